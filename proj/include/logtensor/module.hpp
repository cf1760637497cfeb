#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <logtensor/exact.hpp>
#include <logtensor/report.hpp>
#include <logtensor/series.hpp>

namespace logtensor {

using Grade = std::vector<Rational>;

/// Product of Q and Z/m factors; modulus 0 marks a Q coordinate.
struct GradeGroup {
    std::vector<unsigned> moduli;

    Grade zero() const { return Grade(moduli.size(), Rational(0)); }
    Grade reduce(Grade g) const;
    Grade add(const Grade &a, const Grade &b) const;
    Grade negate(const Grade &a) const;
    friend bool operator==(const GradeGroup &, const GradeGroup &) = default;
};

std::string grade_str(const Grade &g);

using SparseVector = std::map<std::size_t, ExactComplex>;
using SeriesVector = std::map<std::size_t, LogSeries>;

inline NumericComplex scale_by(const NumericComplex &v, const ExactComplex &c) { return v * c.numeric(); }
inline ExactComplex scale_by(const ExactComplex &v, const ExactComplex &c) { return v * c; }
inline LogSeries scale_by(const LogSeries &v, const ExactComplex &c) { return v.scaled(c); }

inline bool is_zero_value(const NumericComplex &v) { return v == NumericComplex(0.0, 0.0); }
inline bool is_zero_value(const ExactComplex &v) { return v.is_zero(); }
inline bool is_zero_value(const LogSeries &v) { return v.is_zero(); }

/// Exact sparse matrix, stored column-major as (col,row) -> value.
class SparseMatrix {
public:
    using Entries = std::map<std::pair<std::size_t, std::size_t>, ExactComplex>;

    void add(std::size_t row, std::size_t col, const ExactComplex &v);
    ExactComplex at(std::size_t row, std::size_t col) const;
    bool empty() const { return e_.empty(); }
    std::size_t nonzeros() const { return e_.size(); }
    const Entries &by_column() const { return e_; }

    SparseMatrix transpose() const;
    SparseMatrix scaled(const ExactComplex &c) const;
    SparseMatrix &operator+=(const SparseMatrix &o);
    friend SparseMatrix operator*(const SparseMatrix &a, const SparseMatrix &b);
    friend SparseMatrix operator-(const SparseMatrix &a, const SparseMatrix &b);
    friend bool operator==(const SparseMatrix &, const SparseMatrix &) = default;

    template <class T>
    std::map<std::size_t, T> apply(const std::map<std::size_t, T> &v) const
    {
        std::map<std::size_t, T> out;
        for (const auto &[col, x] : v) {
            for (auto it = e_.lower_bound({col, 0}); it != e_.end() && it->first.first == col; ++it) {
                auto [pos, fresh] = out.try_emplace(it->first.second, scale_by(x, it->second));
                if (!fresh) pos->second += scale_by(x, it->second);
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = is_zero_value(it->second) ? out.erase(it) : std::next(it);
        return out;
    }

private:
    Entries e_;
};

SparseMatrix identity_matrix(std::size_t n);

struct BasisVector {
    Grade grade;
    ExactComplex weight;
    std::string name;
};

/// Truncated vertex algebra data needed by modules: weights, L(1), vacuum, omega.
struct VertexAlgebra {
    std::string label;
    std::vector<BasisVector> basis;
    SparseMatrix L1;
    std::size_t vacuum = 0;
    std::optional<SparseVector> omega;

    const ExactComplex &weight(std::size_t v) const { return basis.at(v).weight; }
};

class GeneralizedModule {
public:
    std::string label;
    GradeGroup group;
    std::vector<BasisVector> basis;
    Rational weight_hi{0}; // every piece with Re(weight) <= weight_hi is present
    SparseMatrix Lm1, L1, N;
    std::map<std::pair<std::size_t, long>, SparseMatrix> modes; // (v, m) -> v_m
    std::shared_ptr<const VertexAlgebra> algebra;
    std::shared_ptr<const GeneralizedModule> dual_of; // set on contragredients
    mutable std::weak_ptr<const GeneralizedModule> dual_cache;

    std::size_t dim() const { return basis.size(); }
    const ExactComplex &weight(std::size_t i) const { return basis.at(i).weight; }
    Rational weight_lo() const;
    bool stored(const ExactComplex &w) const { return w.re() <= weight_hi; }

    std::map<std::pair<Grade, ExactComplex>, std::size_t> pieces() const;
    std::vector<std::size_t> piece_of(std::size_t i) const;

    const SparseMatrix *mode(std::size_t v, long m) const;
    SparseMatrix mode(const SparseVector &v, long m) const;
    std::pair<long, long> mode_range() const;
    SparseMatrix L(int j) const; // L(0) includes the nilpotent part
};

using ModulePtr = std::shared_ptr<const GeneralizedModule>;

// t^{L(0)} w = t^S sum_k (log t)^k/k! N^k w
SeriesVector x_L0_apply(const GeneralizedModule &M, const SeriesVector &w, const FormalPower &t);
SeriesVector x_L0_apply(const GeneralizedModule &M, const SparseVector &w, const FormalPower &t);

// e^{c A} w for a nilpotent A, c a series
SeriesVector exp_apply(const SparseMatrix &A, const LogSeries &c, const SeriesVector &w, std::size_t dim);

SeriesVector to_series(const SparseVector &v);
SeriesVector apply(const SparseMatrix &A, const SeriesVector &w);
SeriesVector scale(const SeriesVector &w, const LogSeries &c);
void accumulate(SeriesVector &acc, const SeriesVector &w, const LogSeries &c);

/// Coefficients v°_k of Y°(v,x) = sum_k v°_k x^{-k-1}, as matrices on M.
SparseMatrix opposite_mode(const GeneralizedModule &M, std::size_t v, long k);
std::map<long, SparseMatrix> y_opposite(const GeneralizedModule &M, std::size_t v);
SparseMatrix opposite_mode(const GeneralizedModule &M, const SparseVector &v, long k);

ModulePtr contragredient(const ModulePtr &M);
// the canonical dual: returns the base when M is itself a contragredient
ModulePtr dual(const ModulePtr &M);
ModulePtr direct_sum(const ModulePtr &A, const ModulePtr &B, const std::string &label);

ExactComplex pairing(const SparseVector &dual_vec, const SparseVector &vec);

VerificationReport check_strong_grading(const GeneralizedModule &M);

} // namespace logtensor

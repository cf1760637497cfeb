#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <logtensor/module.hpp>
#include <logtensor/report.hpp>
#include <logtensor/series.hpp>

namespace logtensor {

using PairKey = std::pair<std::size_t, std::size_t>;
using Bilinear = std::map<PairKey, SeriesVector>; // (a, b) -> c -> coefficient

/// Coefficient family of a logarithmic intertwining operator of type (W3; W1 W2):
/// Y(e1_a, x) e2_b = sum_c e3_c * data[a,b][c], a series in x and log x.
struct LogIntwOp {
    ModulePtr W1, W2, W3;
    Bilinear data;

    // (w1)_{n;k} w2 as a map c -> coefficient, n read from x^{-n-1}
    std::map<std::pair<ExactComplex, unsigned>, std::map<PairKey, SparseVector>> coefficients() const;
    unsigned max_logpower() const;
    bool same_type(const LogIntwOp &o) const { return W1 == o.W1 && W2 == o.W2 && W3 == o.W3; }
};

bool operator==(const LogIntwOp &a, const LogIntwOp &b);

/// Map W1 (x) W2 -> completion of W3 at a branch point. Components carry the
/// carriers y = e^{-l_p(z)} and u = e^{i pi}.
struct MapData {
    ModulePtr W1, W2, W3;
    BranchPoint bp;
    Bilinear data;

    SeriesVector at(std::size_t a, std::size_t b) const;
    // linear extension to vectors
    SeriesVector apply(const SparseVector &w1, const SparseVector &w2) const;
};

struct PzMap : MapData {};
struct QzMap : MapData {};

bool same_components(const MapData &a, const MapData &b);

// grading and weight law audit; the weight law applies to operators only
VerificationReport audit_operator(const LogIntwOp &Y, unsigned max_logpower);
VerificationReport audit_map(const MapData &I);

PzMap i_from_y(const LogIntwOp &Y, const BranchPoint &bp);
LogIntwOp y_from_i(const PzMap &I, unsigned max_logpower);
// recovery at another branch index of the same z
LogIntwOp y_from_i(const PzMap &I, long p_new, unsigned max_logpower);

struct BranchShift {
    LogIntwOp direct;       // y_from_i at p'
    LogIntwOp via_formula;  // e^{2 pi i (p-p')L0} Y_p(e^{2 pi i (p'-p)L0} ., x) e^{2 pi i (p'-p)L0} .
};
BranchShift branch_shift(const PzMap &I, long p_new, unsigned max_logpower);
VerificationReport compare_operators(const LogIntwOp &a, const LogIntwOp &b, const std::string &tag);
VerificationReport compare_maps(const MapData &a, const MapData &b, const std::string &tag, double tol);

PzMap transport_z(const PzMap &I, const BranchPoint &bp1);

QzMap adjoint(const PzMap &I);
PzMap adjoint(const QzMap &J);

// Y of type (W1'; W3' W2) -> Q-map of type (W3; W1 W2)
QzMap i_q_from_y(const LogIntwOp &Y, const BranchPoint &bp);
LogIntwOp y_q_from_i(const QzMap &J, unsigned max_logpower);

} // namespace logtensor

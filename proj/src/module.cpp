#include <logtensor/module.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace logtensor {

Grade GradeGroup::reduce(Grade g) const
{
    if (g.size() != moduli.size()) throw std::invalid_argument("grade has wrong rank");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (moduli[i] == 0) continue;
        Rational m(moduli[i]);
        g[i] -= m * floor(g[i] / m);
    }
    return g;
}

Grade GradeGroup::add(const Grade &a, const Grade &b) const
{
    Grade s = a;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.at(i);
    return reduce(std::move(s));
}

Grade GradeGroup::negate(const Grade &a) const
{
    Grade s = a;
    for (auto &q : s) q = -q;
    return reduce(std::move(s));
}

std::string grade_str(const Grade &g)
{
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + to_string(g[i]);
    return s + ")";
}

// ---------------------------------------------------------------- matrices

void SparseMatrix::add(std::size_t row, std::size_t col, const ExactComplex &v)
{
    if (v.is_zero()) return;
    auto [it, fresh] = e_.try_emplace({col, row}, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) e_.erase(it);
    }
}

ExactComplex SparseMatrix::at(std::size_t row, std::size_t col) const
{
    auto it = e_.find({col, row});
    return it == e_.end() ? ExactComplex() : it->second;
}

SparseMatrix SparseMatrix::transpose() const
{
    SparseMatrix t;
    for (const auto &[k, v] : e_) t.e_.emplace(std::pair{k.second, k.first}, v);
    return t;
}

SparseMatrix SparseMatrix::scaled(const ExactComplex &c) const
{
    SparseMatrix t;
    if (c.is_zero()) return t;
    for (const auto &[k, v] : e_) t.e_.emplace(k, v * c);
    return t;
}

SparseMatrix &SparseMatrix::operator+=(const SparseMatrix &o)
{
    for (const auto &[k, v] : o.e_) add(k.second, k.first, v);
    return *this;
}

SparseMatrix operator-(const SparseMatrix &a, const SparseMatrix &b)
{
    SparseMatrix r = a;
    r += b.scaled(ExactComplex(-1));
    return r;
}

SparseMatrix operator*(const SparseMatrix &a, const SparseMatrix &b)
{
    SparseMatrix r;
    for (const auto &[kb, vb] : b.e_) {
        auto [c, k] = kb;
        for (auto it = a.e_.lower_bound({k, 0}); it != a.e_.end() && it->first.first == k; ++it)
            r.add(it->first.second, c, it->second * vb);
    }
    return r;
}

SparseMatrix identity_matrix(std::size_t n)
{
    SparseMatrix m;
    for (std::size_t i = 0; i < n; ++i) m.add(i, i, ExactComplex(1));
    return m;
}

// ---------------------------------------------------------------- modules

Rational GeneralizedModule::weight_lo() const
{
    if (basis.empty()) return weight_hi;
    Rational lo = basis.front().weight.re();
    for (const auto &b : basis) lo = std::min(lo, b.weight.re());
    return lo;
}

std::map<std::pair<Grade, ExactComplex>, std::size_t> GeneralizedModule::pieces() const
{
    std::map<std::pair<Grade, ExactComplex>, std::size_t> out;
    for (const auto &b : basis) ++out[{b.grade, b.weight}];
    return out;
}

std::vector<std::size_t> GeneralizedModule::piece_of(std::size_t i) const
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis[j].weight == basis[i].weight && basis[j].grade == basis[i].grade) out.push_back(j);
    return out;
}

const SparseMatrix *GeneralizedModule::mode(std::size_t v, long m) const
{
    auto it = modes.find({v, m});
    return it == modes.end() ? nullptr : &it->second;
}

SparseMatrix GeneralizedModule::mode(const SparseVector &v, long m) const
{
    SparseMatrix r;
    for (const auto &[i, c] : v)
        if (const auto *op = mode(i, m)) r += op->scaled(c);
    return r;
}

std::pair<long, long> GeneralizedModule::mode_range() const
{
    if (modes.empty()) return {0, -1};
    long lo = modes.begin()->first.second, hi = lo;
    for (const auto &[k, _] : modes) {
        lo = std::min(lo, k.second);
        hi = std::max(hi, k.second);
    }
    return {lo, hi};
}

SparseMatrix GeneralizedModule::L(int j) const
{
    if (j == -1) return Lm1;
    if (j == 1) return L1;
    if (j != 0) throw std::invalid_argument("only L(-1), L(0), L(1) are stored");
    SparseMatrix l0 = N;
    for (std::size_t i = 0; i < basis.size(); ++i) l0.add(i, i, basis[i].weight);
    return l0;
}

// ---------------------------------------------------------------- actions

SeriesVector to_series(const SparseVector &v)
{
    SeriesVector out;
    for (const auto &[i, c] : v) out.emplace(i, LogSeries::constant(c));
    return out;
}

SeriesVector apply(const SparseMatrix &A, const SeriesVector &w) { return A.apply(w); }

SeriesVector scale(const SeriesVector &w, const LogSeries &c)
{
    SeriesVector out;
    for (const auto &[i, s] : w) {
        LogSeries t = s * c;
        if (!t.is_zero()) out.emplace(i, std::move(t));
    }
    return out;
}

void accumulate(SeriesVector &acc, const SeriesVector &w, const LogSeries &c)
{
    for (const auto &[i, s] : w) {
        LogSeries t = s * c;
        if (t.is_zero()) continue;
        auto [it, fresh] = acc.try_emplace(i, t);
        if (!fresh) {
            it->second += t;
            if (it->second.is_zero()) acc.erase(it);
        }
    }
}

SeriesVector x_L0_apply(const GeneralizedModule &M, const SeriesVector &w, const FormalPower &t)
{
    SeriesVector out;
    const LogSeries lt = t.log();
    for (const auto &[b, coeff] : w) {
        const std::size_t cap = M.piece_of(b).size();
        SparseVector cur{{b, ExactComplex(1)}};
        LogSeries lpow = LogSeries::constant(ExactComplex(1));
        const LogSeries base = coeff * t.power(M.weight(b));
        for (std::size_t k = 0; !cur.empty(); ++k) {
            if (k > cap) throw std::runtime_error("L(0) nilpotent part is not nilpotent on " + M.label);
            LogSeries c = base * lpow.scaled(ExactComplex(Rational(1) / factorial(unsigned(k))));
            for (const auto &[i, v] : cur) accumulate(out, {{i, LogSeries::constant(v)}}, c);
            cur = M.N.apply(cur);
            lpow = lpow * lt;
        }
    }
    return out;
}

SeriesVector x_L0_apply(const GeneralizedModule &M, const SparseVector &w, const FormalPower &t)
{
    return x_L0_apply(M, to_series(w), t);
}

SeriesVector exp_apply(const SparseMatrix &A, const LogSeries &c, const SeriesVector &w, std::size_t dim)
{
    SeriesVector out = w;
    SeriesVector cur = w;
    LogSeries cp = LogSeries::constant(ExactComplex(1));
    for (std::size_t k = 1; ; ++k) {
        cur = A.apply(cur);
        if (cur.empty()) break;
        if (k > dim) throw std::runtime_error("exponential of a non-nilpotent operator");
        cp = cp * c;
        accumulate(out, cur, cp.scaled(ExactComplex(Rational(1) / factorial(unsigned(k)))));
    }
    return out;
}

// ---------------------------------------------------------------- opposite modes

namespace {

long integral_weight(const VertexAlgebra &V, std::size_t v)
{
    const auto &w = V.weight(v);
    if (!w.is_integer()) throw std::invalid_argument("opposite modes need integral weight");
    return to_long(w.re());
}

std::vector<SparseVector> l1_orbit(const VertexAlgebra &V, std::size_t v)
{
    std::vector<SparseVector> out{{{v, ExactComplex(1)}}};
    while (true) {
        SparseVector n = V.L1.apply(out.back());
        if (n.empty()) break;
        if (out.size() > V.basis.size()) throw std::runtime_error("L(1) is not nilpotent on V");
        out.push_back(std::move(n));
    }
    return out;
}

} // namespace

SparseMatrix opposite_mode(const GeneralizedModule &M, std::size_t v, long k)
{
    if (!M.algebra) throw std::invalid_argument("module has no algebra");
    const long wt = integral_weight(*M.algebra, v);
    const auto orbit = l1_orbit(*M.algebra, v);
    const ExactComplex sign(wt % 2 == 0 ? 1 : -1);
    SparseMatrix r;
    for (std::size_t j = 0; j < orbit.size(); ++j) {
        long m = -k - 2 - long(j) + 2 * wt;
        r += M.mode(orbit[j], m).scaled(sign * ExactComplex(Rational(1) / factorial(unsigned(j))));
    }
    return r;
}

SparseMatrix opposite_mode(const GeneralizedModule &M, const SparseVector &v, long k)
{
    SparseMatrix r;
    for (const auto &[i, c] : v) r += opposite_mode(M, i, k).scaled(c);
    return r;
}

std::map<long, SparseMatrix> y_opposite(const GeneralizedModule &M, std::size_t v)
{
    std::map<long, SparseMatrix> out;
    auto [mlo, mhi] = M.mode_range();
    if (mlo > mhi) return out;
    const long wt = integral_weight(*M.algebra, v);
    const long jmax = long(l1_orbit(*M.algebra, v).size()) - 1;
    // m = -k-2-j+2wt ranges over [mlo, mhi] for some j in [0, jmax]
    for (long k = -mhi - 2 + 2 * wt - jmax; k <= -mlo - 2 + 2 * wt; ++k) {
        SparseMatrix op = opposite_mode(M, v, k);
        if (!op.empty()) out.emplace(k, std::move(op));
    }
    return out;
}

// ---------------------------------------------------------------- constructions

ModulePtr contragredient(const ModulePtr &M)
{
    auto D = std::make_shared<GeneralizedModule>();
    D->label = M->label + "'";
    D->group = M->group;
    D->basis.reserve(M->dim());
    for (const auto &b : M->basis) D->basis.push_back({M->group.negate(b.grade), b.weight, b.name + "*"});
    D->weight_hi = M->weight_hi;
    D->Lm1 = M->L1.transpose();
    D->L1 = M->Lm1.transpose();
    D->N = M->N.transpose();
    D->algebra = M->algebra;
    D->dual_of = M;
    if (M->algebra) {
        for (std::size_t v = 0; v < M->algebra->basis.size(); ++v)
            for (auto &[k, op] : y_opposite(*M, v)) D->modes.emplace(std::pair{v, k}, op.transpose());
    }
    return D;
}

ModulePtr dual(const ModulePtr &M)
{
    if (M->dual_of) return M->dual_of;
    if (auto d = M->dual_cache.lock()) return d;
    auto d = contragredient(M);
    M->dual_cache = d;
    return d;
}

ModulePtr direct_sum(const ModulePtr &A, const ModulePtr &B, const std::string &label)
{
    if (A->algebra != B->algebra) throw std::invalid_argument("direct sum needs a common algebra");
    if (!(A->group == B->group)) throw std::invalid_argument("direct sum needs a common grading group");
    auto S = std::make_shared<GeneralizedModule>();
    S->label = label;
    S->group = A->group;
    S->basis = A->basis;
    for (const auto &b : B->basis) S->basis.push_back(b);
    S->weight_hi = std::min(A->weight_hi, B->weight_hi);
    S->algebra = A->algebra;
    const std::size_t off = A->dim();
    auto block = [off](const SparseMatrix &a, const SparseMatrix &b) {
        SparseMatrix r = a;
        for (const auto &[k, v] : b.by_column()) r.add(k.second + off, k.first + off, v);
        return r;
    };
    S->Lm1 = block(A->Lm1, B->Lm1);
    S->L1 = block(A->L1, B->L1);
    S->N = block(A->N, B->N);
    for (const auto &[k, op] : A->modes) S->modes[k] = op;
    for (const auto &[k, op] : B->modes) S->modes[k] = block(S->modes[k], op);
    return S;
}

ExactComplex pairing(const SparseVector &dual_vec, const SparseVector &vec)
{
    ExactComplex s;
    for (const auto &[i, c] : dual_vec) {
        auto it = vec.find(i);
        if (it != vec.end()) s += c * it->second;
    }
    return s;
}

// ---------------------------------------------------------------- grading audit

namespace {

std::string entry_key(const std::string &op, std::size_t row, std::size_t col)
{
    std::ostringstream s;
    s << op << " (" << row << "," << col << ")";
    return s.str();
}

void check_shift(VerificationReport &r, const GeneralizedModule &M, const SparseMatrix &op,
                 const std::string &name, const ExactComplex &dw, const Grade &dg)
{
    for (const auto &[k, v] : op.by_column()) {
        auto [col, row] = k;
        ++r.checked;
        if (row >= M.dim() || col >= M.dim()) {
            r.add_failure(entry_key(name, row, col), "index out of range");
            continue;
        }
        if (M.weight(row) != M.weight(col) + dw)
            r.add_failure(entry_key(name, row, col), "weight shift");
        else if (M.basis[row].grade != M.group.add(M.basis[col].grade, dg))
            r.add_failure(entry_key(name, row, col), "grade shift");
    }
}

void check_zero(VerificationReport &r, const std::string &key, const SparseVector &v)
{
    if (v.empty())
        ++r.checked;
    else
        r.add_failure(key, "relation fails");
}

} // namespace

VerificationReport check_strong_grading(const GeneralizedModule &M)
{
    VerificationReport r;
    r.identity = "strong grading of " + M.label;
    r.tag = "grading";
    const Grade g0 = M.group.zero();

    for (std::size_t i = 0; i < M.dim(); ++i) {
        ++r.checked;
        if (M.basis[i].grade.size() != g0.size())
            r.add_failure(M.basis[i].name, "grade rank");
        else if (M.basis[i].grade != M.group.reduce(M.basis[i].grade))
            r.add_failure(M.basis[i].name, "grade not reduced");
        else if (!M.stored(M.weight(i)))
            r.add_failure(M.basis[i].name, "weight above stored range");
    }

    check_shift(r, M, M.Lm1, "L(-1)", ExactComplex(1), g0);
    check_shift(r, M, M.L1, "L(1)", ExactComplex(-1), g0);
    check_shift(r, M, M.N, "N", ExactComplex(0), g0);
    if (M.algebra) {
        for (const auto &[key, op] : M.modes) {
            auto [v, m] = key;
            const auto &vb = M.algebra->basis.at(v);
            std::string name = "mode " + vb.name + "_" + std::to_string(m);
            check_shift(r, M, op, name, vb.weight - ExactComplex(m + 1), vb.grade);
        }
    }

    // N nilpotent on every piece
    for (std::size_t i = 0; i < M.dim(); ++i) {
        SparseVector cur{{i, ExactComplex(1)}};
        const std::size_t cap = M.piece_of(i).size();
        for (std::size_t k = 0; k < cap && !cur.empty(); ++k) cur = M.N.apply(cur);
        check_zero(r, "N nilpotent at " + M.basis[i].name, cur);
    }

    // sl2 relations where every intermediate vector is stored
    const SparseMatrix L0 = M.L(0);
    for (std::size_t i = 0; i < M.dim(); ++i) {
        if (!M.stored(M.weight(i) + ExactComplex(1))) continue;
        const SparseVector e{{i, ExactComplex(1)}};
        auto sub = [](SparseVector a, const SparseVector &b, const ExactComplex &c) {
            for (const auto &[j, v] : b) {
                a[j] -= c * v;
                if (a[j].is_zero()) a.erase(j);
            }
            return a;
        };
        const std::string at = " at " + M.basis[i].name;
        auto a = M.L1.apply(M.Lm1.apply(e));
        a = sub(a, M.Lm1.apply(M.L1.apply(e)), ExactComplex(1));
        check_zero(r, "[L(1),L(-1)]=2L(0)" + at, sub(a, L0.apply(e), ExactComplex(2)));
        check_zero(r, "[N,L(-1)]=0" + at, sub(M.N.apply(M.Lm1.apply(e)), M.Lm1.apply(M.N.apply(e)), ExactComplex(1)));
        check_zero(r, "[N,L(1)]=0" + at, sub(M.N.apply(M.L1.apply(e)), M.L1.apply(M.N.apply(e)), ExactComplex(1)));

        if (!M.algebra) continue;
        // [L(-1), v_m] = -m v_{m-1}
        for (const auto &[key, op] : M.modes) {
            auto [v, m] = key;
            const auto &wv = M.algebra->weight(v);
            if (!M.stored(M.weight(i) + wv - ExactComplex(m))) continue;
            auto lhs = sub(M.Lm1.apply(op.apply(e)), op.apply(M.Lm1.apply(e)), ExactComplex(1));
            const SparseMatrix *prev = M.mode(v, m - 1);
            SparseVector rhs = prev ? prev->apply(e) : SparseVector{};
            check_zero(r, "[L(-1),v_m] " + M.algebra->basis[v].name + "_" + std::to_string(m) + at,
                       sub(lhs, rhs, ExactComplex(-m)));
        }
    }
    return r;
}

} // namespace logtensor

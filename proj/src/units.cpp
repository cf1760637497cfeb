#include <logtensor/units.hpp>

#include <functional>
#include <set>
#include <stdexcept>

namespace logtensor {

namespace {

// algebra index for each basis vector of V that the algebra stores
std::map<std::size_t, std::size_t> algebra_indices(const GeneralizedModule &V)
{
    if (!V.algebra) throw std::invalid_argument(V.label + ": no algebra attached");
    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < V.algebra->basis.size(); ++i) by_name.emplace(V.algebra->basis[i].name, i);
    std::map<std::size_t, std::size_t> out;
    for (std::size_t i = 0; i < V.dim(); ++i) {
        auto it = by_name.find(V.basis[i].name);
        if (it != by_name.end()) out.emplace(i, it->second);
    }
    return out;
}

std::size_t vacuum_in(const GeneralizedModule &V)
{
    auto idx = algebra_indices(V);
    for (const auto &[i, a] : idx)
        if (a == V.algebra->vacuum) return i;
    throw std::invalid_argument(V.label + ": vacuum not stored");
}

// z^n in the carrier y = e^{-l_p(z)}, times sign^n
LogSeries z_power(long n, int sign = 1)
{
    ExactComplex c(sign < 0 && n % 2 != 0 ? -1 : 1);
    return LogSeries::monomial(Var::y, ExactComplex(Rational(-n)), 0, c);
}

void add_diff(VerificationReport &rep, const std::string &key, const LogSeries &d, const BranchPoint &bp)
{
    if (d.is_zero()) {
        rep.add(key, ExactComplex(0));
        return;
    }
    if (auto e = evaluate_exact(d, bp)) {
        rep.add(key, *e);
        return;
    }
    rep.add(key, evaluate(d, bp));
}

void compare_vectors(VerificationReport &rep, const std::string &key, const SeriesVector &a, const SeriesVector &b,
                     const BranchPoint &bp, const std::function<bool(std::size_t)> &admit)
{
    std::set<std::size_t> keys;
    for (const auto &[c, s] : a) keys.insert(c);
    for (const auto &[c, s] : b) keys.insert(c);
    for (std::size_t c : keys) {
        if (!admit(c)) continue;
        LogSeries d;
        if (auto it = a.find(c); it != a.end()) d += it->second;
        if (auto it = b.find(c); it != b.end()) d -= it->second;
        add_diff(rep, key + " out=" + std::to_string(c), d, bp);
    }
}

SeriesVector eta_apply(const std::map<std::size_t, SeriesVector> &eta, const SeriesVector &w)
{
    SeriesVector out;
    for (const auto &[d, s] : w)
        if (auto it = eta.find(d); it != eta.end()) accumulate(out, it->second, s);
    return out;
}

std::optional<SparseMatrix> constant_matrix(const std::map<std::size_t, SeriesVector> &eta)
{
    SparseMatrix m;
    for (const auto &[b, vec] : eta)
        for (const auto &[c, s] : vec) {
            if (s.size() != 1) return std::nullopt;
            const auto &[mono, coef] = *s.terms().begin();
            if (!mono.empty()) return std::nullopt;
            m.add(c, b, coef);
        }
    return m;
}

// eta is weight preserving and commutes with every stored mode of the algebra
void check_module_map(VerificationReport &rep, const std::map<std::size_t, SeriesVector> &eta, const GeneralizedModule &W,
                      const GeneralizedModule &W3, const BranchPoint &bp)
{
    for (const auto &[b, vec] : eta)
        for (const auto &[c, s] : vec)
            if (W3.weight(c) != W.weight(b)) add_diff(rep, "graded w=" + std::to_string(b) + " out=" + std::to_string(c), s, bp);

    for (const auto &[vm, mat] : W.modes) {
        auto [v, m] = vm;
        const SparseMatrix *m3 = W3.mode(v, m);
        if (!m3) continue;
        const ExactComplex shift = W.algebra->weight(v) - ExactComplex(Rational(m + 1));
        for (std::size_t b = 0; b < W.dim(); ++b) {
            if (!W.stored(W.weight(b) + shift)) continue;
            SeriesVector lhs = eta_apply(eta, logtensor::apply(mat, to_series(SparseVector{{b, ExactComplex(1)}})));
            SeriesVector rhs = logtensor::apply(*m3, eta.count(b) ? eta.at(b) : SeriesVector{});
            compare_vectors(rep, "v=" + W.algebra->basis[v].name + " m=" + std::to_string(m) + " w=" + std::to_string(b),
                            lhs, rhs, bp, [&](std::size_t c) { return W3.stored(W3.weight(c) - shift); });
        }
    }
}

// Y_W(u, sign z) e_b as a series vector in W, u an algebra index
SeriesVector y_at_z(const GeneralizedModule &W, std::size_t u, std::size_t b, int sign)
{
    SeriesVector out;
    for (const auto &[vm, mat] : W.modes) {
        if (vm.first != u) continue;
        SparseVector col;
        for (const auto &[row, val] : mat.apply(SparseVector{{b, ExactComplex(1)}})) col.emplace(row, val);
        if (col.empty()) continue;
        accumulate(out, to_series(col), z_power(-vm.second - 1, sign));
    }
    return out;
}

LogSeries z_series() { return LogSeries::monomial(Var::y, ExactComplex(-1), 0, ExactComplex(1)); }

} // namespace

UnitResult unit_eta_left(const PzMap &I, double tol)
{
    const auto &V = *I.W1;
    const auto &W = *I.W2;
    const auto &W3 = *I.W3;
    UnitResult res;
    res.report.identity = "left unit map V (x) W -> W";
    res.report.tag = "v-tensor-w-2";
    res.report.tolerance = tol;
    const std::size_t vac = vacuum_in(V);
    for (std::size_t b = 0; b < W.dim(); ++b) {
        SeriesVector e = I.at(vac, b);
        if (!e.empty()) res.eta.emplace(b, std::move(e));
    }
    res.matrix = constant_matrix(res.eta);

    check_module_map(res.report, res.eta, W, W3, I.bp);
    for (const auto &[u, a] : algebra_indices(V))
        for (std::size_t b = 0; b < W.dim(); ++b) {
            SeriesVector rhs = eta_apply(res.eta, y_at_z(W, a, b, 1));
            compare_vectors(res.report, "law u=" + V.basis[u].name + " w=" + std::to_string(b), I.at(u, b), rhs, I.bp,
                            [&](std::size_t c) { return W.stored(W3.weight(c)); });
        }
    return res;
}

UnitResult unit_eta_right(const PzMap &I, double tol)
{
    const auto &W = *I.W1;
    const auto &V = *I.W2;
    const auto &W3 = *I.W3;
    UnitResult res;
    res.report.identity = "right unit map W (x) V -> W";
    res.report.tag = "w-tensor-v-3";
    res.report.tolerance = tol;
    const std::size_t vac = vacuum_in(V);
    const LogSeries z = z_series();
    for (std::size_t a = 0; a < W.dim(); ++a) {
        SeriesVector e = exp_apply(W3.Lm1, -z, I.at(a, vac), W3.dim());
        if (!e.empty()) res.eta.emplace(a, std::move(e));
    }
    res.matrix = constant_matrix(res.eta);

    check_module_map(res.report, res.eta, W, W3, I.bp);
    for (const auto &[u, alg] : algebra_indices(V))
        for (std::size_t a = 0; a < W.dim(); ++a) {
            SeriesVector inner = exp_apply(W.Lm1, z, y_at_z(W, alg, a, -1), W.dim());
            compare_vectors(res.report, "law u=" + V.basis[u].name + " w=" + std::to_string(a), I.at(a, u),
                            eta_apply(res.eta, inner), I.bp, [&](std::size_t c) { return W.stored(W3.weight(c)); });
        }
    return res;
}

namespace {

std::map<std::size_t, SeriesVector> as_eta(const SparseMatrix &f)
{
    std::map<std::size_t, SeriesVector> out;
    for (const auto &[rc, v] : f.by_column()) out[rc.first].emplace(rc.second, LogSeries::constant(v));
    return out;
}

} // namespace

PzMap planted_left(const ModulePtr &V, const ModulePtr &W, const ModulePtr &W3, const SparseMatrix &f,
                   const BranchPoint &bp)
{
    PzMap I;
    I.W1 = V;
    I.W2 = W;
    I.W3 = W3;
    I.bp = bp;
    const auto eta = as_eta(f);
    for (const auto &[u, a] : algebra_indices(*V))
        for (std::size_t b = 0; b < W->dim(); ++b) {
            SeriesVector v = eta_apply(eta, y_at_z(*W, a, b, 1));
            if (!v.empty()) I.data.emplace(PairKey{u, b}, std::move(v));
        }
    return I;
}

PzMap planted_right(const ModulePtr &V, const ModulePtr &W, const ModulePtr &W3, const SparseMatrix &f,
                    const BranchPoint &bp)
{
    PzMap I;
    I.W1 = W;
    I.W2 = V;
    I.W3 = W3;
    I.bp = bp;
    const auto eta = as_eta(f);
    const LogSeries z = z_series();
    for (const auto &[u, alg] : algebra_indices(*V))
        for (std::size_t a = 0; a < W->dim(); ++a) {
            SeriesVector v = eta_apply(eta, exp_apply(W->Lm1, z, y_at_z(*W, alg, a, -1), W->dim()));
            if (!v.empty()) I.data.emplace(PairKey{a, u}, std::move(v));
        }
    return I;
}

} // namespace logtensor

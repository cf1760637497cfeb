#include <logtensor/intertwining.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <stdexcept>

namespace logtensor {

namespace {

void add_into(SeriesVector &acc, std::size_t i, const LogSeries &s)
{
    if (s.is_zero()) return;
    auto [it, fresh] = acc.try_emplace(i, s);
    if (!fresh) {
        it->second += s;
        if (it->second.is_zero()) acc.erase(it);
    }
}

void prune(Bilinear &B)
{
    for (auto it = B.begin(); it != B.end();) it = it->second.empty() ? B.erase(it) : std::next(it);
}

// bilinear extension of stored components to series-valued vectors
SeriesVector apply_bilinear(const Bilinear &data, const SeriesVector &u1, const SeriesVector &u2)
{
    SeriesVector out;
    for (const auto &[a, c1] : u1) {
        for (const auto &[b, c2] : u2) {
            auto it = data.find({a, b});
            if (it == data.end()) continue;
            accumulate(out, it->second, c1 * c2);
        }
    }
    return out;
}

unsigned max_log(const LogSeries &s, Var v)
{
    unsigned k = 0;
    for (const auto &[key, c] : s.terms())
        if (const Factor *f = key.find(v)) k = std::max(k, f->logpow);
    return k;
}

// x^s (log x)^k -> y^{-s} (-log y)^k, merged with any carriers already present
LogSeries x_to_carrier(const LogSeries &s)
{
    LogSeries out;
    for (const auto &[key, c] : s.terms()) {
        const Factor *f = key.find(Var::x);
        if (!f) {
            out += LogSeries::term(key, c);
            continue;
        }
        ExactComplex sign = f->logpow % 2 ? ExactComplex(-1) : ExactComplex(1);
        LogSeries sub = LogSeries::monomial(Var::y, -f->exp, f->logpow, sign * c);
        out += LogSeries::term(key.without(Var::x), ExactComplex(1)) * sub;
    }
    return out;
}

std::string pair_key(std::size_t a, std::size_t b, std::size_t c)
{
    std::ostringstream s;
    s << "(" << a << "," << b << ")->" << c;
    return s.str();
}

// sum of absolute values of numeric coefficients; a size measure for diffs
double coefficient_norm(const LogSeries &s)
{
    double m = 0;
    for (const auto &[k, c] : s.terms()) m = std::max(m, std::abs(c.numeric()));
    return m;
}

} // namespace

// ---------------------------------------------------------------- LogIntwOp

std::map<std::pair<ExactComplex, unsigned>, std::map<PairKey, SparseVector>> LogIntwOp::coefficients() const
{
    std::map<std::pair<ExactComplex, unsigned>, std::map<PairKey, SparseVector>> out;
    for (const auto &[key, vec] : data) {
        for (const auto &[c, s] : vec) {
            for (const auto &[mono, coef] : s.terms()) {
                if (!mono.without(Var::x).empty())
                    throw std::invalid_argument("coefficient family has carrier-valued coefficients");
                const Factor *f = mono.find(Var::x);
                ExactComplex n = f ? -f->exp - ExactComplex(1) : ExactComplex(-1);
                unsigned k = f ? f->logpow : 0;
                out[{n, k}][key][c] += coef;
            }
        }
    }
    return out;
}

unsigned LogIntwOp::max_logpower() const
{
    unsigned k = 0;
    for (const auto &[key, vec] : data)
        for (const auto &[c, s] : vec) k = std::max(k, max_log(s, Var::x));
    return k;
}

bool operator==(const LogIntwOp &a, const LogIntwOp &b) { return a.same_type(b) && a.data == b.data; }

// ---------------------------------------------------------------- maps

SeriesVector MapData::at(std::size_t a, std::size_t b) const
{
    auto it = data.find({a, b});
    return it == data.end() ? SeriesVector{} : it->second;
}

SeriesVector MapData::apply(const SparseVector &w1, const SparseVector &w2) const
{
    return apply_bilinear(data, to_series(w1), to_series(w2));
}

bool same_components(const MapData &a, const MapData &b)
{
    return a.W1 == b.W1 && a.W2 == b.W2 && a.W3 == b.W3 && a.data == b.data;
}

VerificationReport audit_operator(const LogIntwOp &Y, unsigned max_logpower)
{
    VerificationReport r;
    r.identity = "weight law and grading";
    r.tag = "wt-cpnt-int-map";
    const auto &g = Y.W3->group;
    for (const auto &[key, vec] : Y.data) {
        auto [a, b] = key;
        for (const auto &[c, s] : vec) {
            const std::string k = pair_key(a, b, c);
            if (Y.W3->basis.at(c).grade != g.add(Y.W1->basis.at(a).grade, Y.W2->basis.at(b).grade)) {
                r.add_failure(k, "grade");
                continue;
            }
            const ExactComplex expect = Y.W3->weight(c) - Y.W1->weight(a) - Y.W2->weight(b);
            bool ok = true;
            for (const auto &[mono, coef] : s.terms()) {
                const Factor *f = mono.find(Var::x);
                ExactComplex e = f ? f->exp : ExactComplex(0);
                unsigned lp = f ? f->logpow : 0;
                if (e != expect) ok = false, r.add_failure(k, "weight law at " + mono.str());
                else if (lp > max_logpower) ok = false, r.add_failure(k, "log power " + std::to_string(lp));
            }
            if (ok) ++r.checked;
        }
    }
    return r;
}

VerificationReport audit_map(const MapData &I)
{
    VerificationReport r;
    r.identity = "grading compatibility";
    r.tag = "grad-comp";
    const auto &g = I.W3->group;
    for (const auto &[key, vec] : I.data) {
        auto [a, b] = key;
        for (const auto &[c, s] : vec) {
            const std::string k = pair_key(a, b, c);
            if (!s.only_carriers())
                r.add_failure(k, "formal variable in a map component");
            else if (I.W3->basis.at(c).grade != g.add(I.W1->basis.at(a).grade, I.W2->basis.at(b).grade))
                r.add_failure(k, "grade");
            else
                ++r.checked;
        }
    }
    return r;
}

// ---------------------------------------------------------------- correspondences

PzMap i_from_y(const LogIntwOp &Y, const BranchPoint &bp)
{
    PzMap I;
    I.W1 = Y.W1;
    I.W2 = Y.W2;
    I.W3 = Y.W3;
    I.bp = bp;
    for (const auto &[key, vec] : Y.data) {
        SeriesVector out;
        for (const auto &[c, s] : vec) add_into(out, c, x_to_carrier(s));
        if (!out.empty()) I.data.emplace(key, std::move(out));
    }
    return I;
}

LogIntwOp y_from_i(const PzMap &I, unsigned max_logpower)
{
    const FormalPower t = FormalPower::of(Var::y).times(Var::x, Rational(1));
    const FormalPower tinv = FormalPower::of(Var::y, Rational(-1)).times(Var::x, Rational(-1));
    LogIntwOp Y{I.W1, I.W2, I.W3, {}};
    for (std::size_t a = 0; a < I.W1->dim(); ++a) {
        const SeriesVector u1 = x_L0_apply(*I.W1, SparseVector{{a, ExactComplex(1)}}, tinv);
        for (std::size_t b = 0; b < I.W2->dim(); ++b) {
            const SeriesVector u2 = x_L0_apply(*I.W2, SparseVector{{b, ExactComplex(1)}}, tinv);
            SeriesVector inner = apply_bilinear(I.data, u1, u2);
            if (inner.empty()) continue;
            SeriesVector out = x_L0_apply(*I.W3, inner, t);
            for (const auto &[c, s] : out) {
                unsigned k = max_log(s, Var::x);
                if (k > max_logpower)
                    throw std::runtime_error("window too small: log power " + std::to_string(k) +
                                             " exceeds max_logpower " + std::to_string(max_logpower) +
                                             " (deficit " + std::to_string(k - max_logpower) + ")");
            }
            if (!out.empty()) Y.data.emplace(PairKey{a, b}, std::move(out));
        }
    }
    return Y;
}

namespace {

// express carrier y_p through y_{p'}: y_p = y_{p'} u^{2(p'-p)}
Bilinear rebase_data(const Bilinear &data, long dp)
{
    if (dp == 0) return data;
    Bilinear out;
    for (const auto &[key, vec] : data) {
        SeriesVector v;
        for (const auto &[c, s] : vec) add_into(v, c, rescale_var(s, Var::y, Rational(1), Rational(2 * dp)));
        if (!v.empty()) out.emplace(key, std::move(v));
    }
    return out;
}

} // namespace

LogIntwOp y_from_i(const PzMap &I, long p_new, unsigned max_logpower)
{
    PzMap J = I;
    J.data = rebase_data(I.data, p_new - I.bp.p);
    J.bp.p = p_new;
    return y_from_i(J, max_logpower);
}

BranchShift branch_shift(const PzMap &I, long p_new, unsigned max_logpower)
{
    const long d = p_new - I.bp.p;
    BranchShift out;
    out.direct = y_from_i(I, p_new, max_logpower);

    const LogIntwOp Yp = y_from_i(I, max_logpower);
    const FormalPower fwd = FormalPower::of(Var::u, Rational(2 * d));
    const FormalPower back = FormalPower::of(Var::u, Rational(-2 * d));
    LogIntwOp Z{I.W1, I.W2, I.W3, {}};
    for (std::size_t a = 0; a < I.W1->dim(); ++a) {
        const SeriesVector u1 = x_L0_apply(*I.W1, SparseVector{{a, ExactComplex(1)}}, fwd);
        for (std::size_t b = 0; b < I.W2->dim(); ++b) {
            const SeriesVector u2 = x_L0_apply(*I.W2, SparseVector{{b, ExactComplex(1)}}, fwd);
            SeriesVector inner = apply_bilinear(Yp.data, u1, u2);
            if (inner.empty()) continue;
            SeriesVector v = x_L0_apply(*I.W3, inner, back);
            if (!v.empty()) Z.data.emplace(PairKey{a, b}, std::move(v));
        }
    }
    Z.data = rebase_data(Z.data, d);
    out.via_formula = std::move(Z);
    return out;
}

VerificationReport compare_operators(const LogIntwOp &a, const LogIntwOp &b, const std::string &tag)
{
    VerificationReport r;
    r.identity = "operator equality";
    r.tag = tag;
    if (!a.same_type(b)) {
        r.add_failure("type", "operators have different module types");
        return r;
    }
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> keys;
    for (const auto *op : {&a, &b})
        for (const auto &[key, vec] : op->data)
            for (const auto &[c, s] : vec) keys.emplace(key.first, key.second, c);
    for (const auto &[i, j, c] : keys) {
        LogSeries sa, sb;
        if (auto it = a.data.find({i, j}); it != a.data.end())
            if (auto jt = it->second.find(c); jt != it->second.end()) sa = jt->second;
        if (auto it = b.data.find({i, j}); it != b.data.end())
            if (auto jt = it->second.find(c); jt != it->second.end()) sb = jt->second;
        LogSeries d = sa - sb;
        r.add(pair_key(i, j, c), d.is_zero() ? ExactComplex(0) : ExactComplex(Rational(coefficient_norm(d))));
    }
    return r;
}

VerificationReport compare_maps(const MapData &a, const MapData &b, const std::string &tag, double tol)
{
    VerificationReport r;
    r.identity = "map equality";
    r.tag = tag;
    r.tolerance = tol;
    if (a.W1 != b.W1 || a.W2 != b.W2 || a.W3 != b.W3) {
        r.add_failure("type", "maps have different module types");
        return r;
    }
    const bool same_bp = a.bp.p == b.bp.p && a.bp.z == b.bp.z;
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> keys;
    for (const auto *m : {&a, &b})
        for (const auto &[key, vec] : m->data)
            for (const auto &[c, s] : vec) keys.emplace(key.first, key.second, c);

    double scale = 1.0;
    std::vector<std::pair<std::string, NumericComplex>> numeric;
    for (const auto &[i, j, c] : keys) {
        LogSeries sa, sb;
        if (auto it = a.data.find({i, j}); it != a.data.end())
            if (auto jt = it->second.find(c); jt != it->second.end()) sa = jt->second;
        if (auto it = b.data.find({i, j}); it != b.data.end())
            if (auto jt = it->second.find(c); jt != it->second.end()) sb = jt->second;
        const std::string k = pair_key(i, j, c);
        if (same_bp && sa == sb) {
            r.add(k, ExactComplex(0));
            continue;
        }
        auto ea = evaluate_exact(sa, a.bp), eb = evaluate_exact(sb, b.bp);
        if (ea && eb) {
            r.add(k, *ea - *eb);
            continue;
        }
        NumericComplex na = evaluate(sa, a.bp), nb = evaluate(sb, b.bp);
        scale = std::max({scale, std::abs(na), std::abs(nb)});
        numeric.emplace_back(k, na - nb);
    }
    r.scale = scale;
    for (const auto &[k, d] : numeric) r.add(k, d);
    return r;
}

PzMap transport_z(const PzMap &I, const BranchPoint &bp1)
{
    PzMap out = I;
    out.bp = bp1;
    return out;
}

// ---------------------------------------------------------------- adjunction

namespace {

template <class Out, class In>
Out adjoint_impl(const In &I)
{
    Out J;
    J.W1 = dual(I.W3);
    J.W2 = I.W2;
    J.W3 = dual(I.W1);
    J.bp = I.bp;
    for (const auto &[key, vec] : I.data) {
        auto [a, b] = key;
        for (const auto &[c, s] : vec) J.data[{c, b}].emplace(a, s);
    }
    return J;
}

} // namespace

QzMap adjoint(const PzMap &I) { return adjoint_impl<QzMap>(I); }
PzMap adjoint(const QzMap &J) { return adjoint_impl<PzMap>(J); }

QzMap i_q_from_y(const LogIntwOp &Y, const BranchPoint &bp)
{
    // <w3', J(w1 (x) w2)> = <w1, Y(w3', e^{l_p(z)}) w2>
    QzMap J;
    J.W1 = dual(Y.W3);
    J.W2 = Y.W2;
    J.W3 = dual(Y.W1);
    J.bp = bp;
    for (const auto &[key, vec] : Y.data) {
        auto [c, b] = key;
        for (const auto &[a, s] : vec) {
            LogSeries v = x_to_carrier(s);
            if (!v.is_zero()) J.data[{a, b}].emplace(c, std::move(v));
        }
    }
    prune(J.data);
    return J;
}

LogIntwOp y_q_from_i(const QzMap &J, unsigned max_logpower)
{
    // <w1, Y(w3', x) w2> = <(yx)^{-L'(0)} w3', J((yx)^{L(0)} w1 (x) (yx)^{-L(0)} w2)>
    const FormalPower t = FormalPower::of(Var::y).times(Var::x, Rational(1));
    const FormalPower tinv = FormalPower::of(Var::y, Rational(-1)).times(Var::x, Rational(-1));
    LogIntwOp Y{dual(J.W3), J.W2, dual(J.W1), {}};
    for (std::size_t a = 0; a < J.W1->dim(); ++a) {
        const SeriesVector u1 = x_L0_apply(*J.W1, SparseVector{{a, ExactComplex(1)}}, t);
        for (std::size_t b = 0; b < J.W2->dim(); ++b) {
            const SeriesVector u2 = x_L0_apply(*J.W2, SparseVector{{b, ExactComplex(1)}}, tinv);
            SeriesVector inner = apply_bilinear(J.data, u1, u2);
            if (inner.empty()) continue;
            SeriesVector out = x_L0_apply(*J.W3, inner, tinv);
            for (const auto &[c, s] : out) {
                unsigned k = max_log(s, Var::x);
                if (k > max_logpower)
                    throw std::runtime_error("window too small: log power " + std::to_string(k) +
                                             " exceeds max_logpower " + std::to_string(max_logpower));
                Y.data[{c, b}].emplace(a, s);
            }
        }
    }
    return Y;
}

} // namespace logtensor

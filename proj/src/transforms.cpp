#include <logtensor/transforms.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace logtensor {

namespace {

LogSeries x_series(const ExactComplex &c, const Rational &e = Rational(1))
{
    return LogSeries::monomial(Var::x, ExactComplex(e), 0, c);
}

SeriesVector unit_series(std::size_t i) { return {{i, LogSeries::constant(ExactComplex(1))}}; }

SeriesVector apply_operator(const Bilinear &data, const SeriesVector &u1, const SeriesVector &u2)
{
    SeriesVector out;
    for (const auto &[a, c1] : u1)
        for (const auto &[b, c2] : u2) {
            auto it = data.find({a, b});
            if (it != data.end()) accumulate(out, it->second, c1 * c2);
        }
    return out;
}

Bilinear map_series(const Bilinear &data, const std::function<LogSeries(const LogSeries &)> &f)
{
    Bilinear out;
    for (const auto &[key, vec] : data) {
        SeriesVector v;
        for (const auto &[c, s] : vec) {
            LogSeries t = f(s);
            if (!t.is_zero()) v.emplace(c, std::move(t));
        }
        if (!v.empty()) out.emplace(key, std::move(v));
    }
    return out;
}

} // namespace

LogIntwOp omega_r(const LogIntwOp &Z, long r)
{
    LogIntwOp out{Z.W2, Z.W1, Z.W3, {}};
    const Rational phase(2 * r + 1);
    const LogSeries x = x_series(ExactComplex(1));
    for (const auto &[key, vec] : Z.data) {
        auto [a, b] = key;
        SeriesVector v;
        for (const auto &[c, s] : vec) v.emplace(c, rescale_var(s, Var::x, Rational(1), phase));
        // e^{x L(-1)}, with x itself rotated by the same phase
        SeriesVector w = exp_apply(Z.W3->Lm1, x, v, Z.W3->dim());
        if (!w.empty()) out.data.emplace(PairKey{b, a}, std::move(w));
    }
    return out;
}

LogIntwOp b_r(const LogIntwOp &Y, long r)
{
    LogIntwOp out{dual(Y.W3), Y.W2, dual(Y.W1), {}};
    const Bilinear inverted = map_series(Y.data, [](const LogSeries &s) {
        return rescale_var(s, Var::x, Rational(-1), Rational(0));
    });
    const FormalPower t = FormalPower::of(Var::u, Rational(2 * r + 1)).times(Var::x, Rational(-2));
    const LogSeries x = x_series(ExactComplex(1));
    const LogSeries minus_x = x_series(ExactComplex(-1));
    const LogSeries minus_xinv = x_series(ExactComplex(-1), Rational(-1));

    std::vector<SeriesVector> left(Y.W1->dim());
    for (std::size_t a = 0; a < Y.W1->dim(); ++a) left[a] = exp_apply(Y.W1->L1, x, unit_series(a), Y.W1->dim());

    for (std::size_t b = 0; b < Y.W2->dim(); ++b) {
        SeriesVector w2 = x_L0_apply(*Y.W2, SparseVector{{b, ExactComplex(1)}}, t);
        w2 = exp_apply(Y.W2->L1, minus_x, w2, Y.W2->dim());
        for (std::size_t a = 0; a < Y.W1->dim(); ++a) {
            SeriesVector S = apply_operator(inverted, left[a], w2);
            if (S.empty()) continue;
            S = exp_apply(Y.W3->Lm1, minus_xinv, S, Y.W3->dim());
            for (auto &[c, s] : S) out.data[{c, b}].emplace(a, std::move(s));
        }
    }
    return out;
}

LogIntwOp a_r(const LogIntwOp &Z, long r2, long s)
{
    const long inv = -s - 1;
    return omega_r(b_r(omega_r(Z, inv), r2 - 2 * s - 1), inv);
}

VerificationReport check_b_factorizations(const LogIntwOp &Y, long r)
{
    VerificationReport rep;
    rep.identity = "B_r factorizations through Omega and A, r = " + std::to_string(r);
    rep.tag = "7.29";
    const LogIntwOp B = b_r(Y, r);
    struct F {
        long r2, r3, s;
    };
    for (F f : {F{r + 1, 0, 1}, F{r + 3, 1, 0}}) {
        LogIntwOp composite = omega_r(a_r(omega_r(Y, f.r3), f.r2, f.s), f.r3);
        VerificationReport c = compare_operators(composite, B, rep.tag);
        for (auto &k : c.offending) k = "(r2,r3)=(" + std::to_string(f.r2) + "," + std::to_string(f.r3) + ") " + k;
        rep.merge(c);
    }
    // both factorizations produce the same A-independent family
    return rep;
}

RankResult b_r_rank(const ModulePtr &W1, const ModulePtr &W2, const ModulePtr &W3, long r, unsigned max_logpower)
{
    // domain: unit entries (a, b, c, k) with x^{wt c - wt a - wt b} (log x)^k and grades compatible
    struct Entry {
        std::size_t a, b, c;
        unsigned k;
    };
    std::vector<Entry> domain;
    for (std::size_t a = 0; a < W1->dim(); ++a)
        for (std::size_t b = 0; b < W2->dim(); ++b)
            for (std::size_t c = 0; c < W3->dim(); ++c) {
                if (W3->basis[c].grade != W3->group.add(W1->basis[a].grade, W2->basis[b].grade)) continue;
                for (unsigned k = 0; k <= max_logpower; ++k) domain.push_back({a, b, c, k});
            }

    // rows: (output key, x-monomial) with carriers evaluated at u = e^{i pi}
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, MonoKey>, std::size_t> rows;
    std::vector<std::vector<std::pair<std::size_t, NumericComplex>>> cols(domain.size());
    const BranchPoint bp(ExactComplex(1), 0);
    for (std::size_t j = 0; j < domain.size(); ++j) {
        const auto &e = domain[j];
        LogIntwOp Y{W1, W2, W3, {}};
        ExactComplex ex = W3->weight(e.c) - W1->weight(e.a) - W2->weight(e.b);
        Y.data[{e.a, e.b}].emplace(e.c, LogSeries::monomial(Var::x, ex, e.k));
        LogIntwOp B = b_r(Y, r);
        std::map<std::size_t, NumericComplex> col;
        for (const auto &[key, vec] : B.data)
            for (const auto &[out, s] : vec)
                for (const auto &[mono, coef] : s.terms()) {
                    MonoKey xpart = mono.without(Var::u).without(Var::y);
                    MonoKey carrier = mono.without(Var::x);
                    NumericComplex val = evaluate(LogSeries::term(carrier, coef), bp);
                    auto rk = std::make_tuple(key.first, key.second, out, xpart);
                    auto [it, fresh] = rows.try_emplace(rk, rows.size());
                    col[it->second] += val;
                }
        for (const auto &[i, v] : col) cols[j].emplace_back(i, v);
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(rows.size()), Eigen::Index(domain.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto &[i, v] : cols[j]) m(Eigen::Index(i), Eigen::Index(j)) = v;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-10);
    return {domain.size(), std::size_t(lu.rank())};
}

// ---------------------------------------------------------------- mu

long mu_branch(NumericComplex z)
{
    if (z == NumericComplex(0.0, 0.0)) throw std::invalid_argument("z = 0");
    auto principal = [](NumericComplex w) {
        double a = std::arg(w);
        if (a < 0) a += 2 * std::numbers::pi;
        return NumericComplex(std::log(std::abs(w)), a);
    };
    NumericComplex s = principal(1.0 / z) + principal(z);
    return std::lround(-(s / NumericComplex(0, 2 * std::numbers::pi)).real());
}

PzMap rebase(const PzMap &I, long p)
{
    PzMap out = I;
    const long d = p - I.bp.p;
    out.bp.p = p;
    if (d == 0) return out;
    out.data = map_series(I.data, [d](const LogSeries &s) {
        return rescale_var(s, Var::y, Rational(1), Rational(2 * d));
    });
    return out;
}

namespace {

BranchPoint inverse_point(const BranchPoint &bp, long p)
{
    if (bp.exact) return BranchPoint(ExactComplex(1) / *bp.exact, p);
    return BranchPoint(1.0 / bp.z, p);
}

LogSeries carrier(Var v, const Rational &e, const ExactComplex &c)
{
    return LogSeries::monomial(v, ExactComplex(e), 0, c);
}

} // namespace

QzMap mu(const PzMap &I)
{
    const long pm = mu_branch(I.bp.z);
    const long pI = I.bp.p;
    // in the carrier y of I: z = y^{-1}, z^{-1} = y, log z^{-1} = log y + 2(p_I - p) log u
    const FormalPower t = FormalPower::of(Var::y, Rational(-2)).times(Var::u, Rational(1 + 4 * pm - 4 * pI));
    const LogSeries zinv = carrier(Var::y, Rational(1), ExactComplex(1));
    const LogSeries minus_zinv = carrier(Var::y, Rational(1), ExactComplex(-1));
    const LogSeries minus_z = carrier(Var::y, Rational(-1), ExactComplex(-1));

    QzMap J;
    J.W1 = I.W1;
    J.W2 = I.W2;
    J.W3 = I.W3;
    J.bp = inverse_point(I.bp, pm);
    for (std::size_t a = 0; a < I.W1->dim(); ++a) {
        SeriesVector w1 = exp_apply(I.W1->L1, zinv, unit_series(a), I.W1->dim());
        for (std::size_t b = 0; b < I.W2->dim(); ++b) {
            SeriesVector w2 = x_L0_apply(*I.W2, SparseVector{{b, ExactComplex(1)}}, t);
            w2 = exp_apply(I.W2->L1, minus_zinv, w2, I.W2->dim());
            SeriesVector v = apply_operator(I.data, w1, w2);
            if (v.empty()) continue;
            v = exp_apply(I.W3->Lm1, minus_z, v, I.W3->dim());
            SeriesVector conv;
            for (const auto &[c, s] : v) {
                // y_Q = y^{-1} u^{-2 p_I}
                LogSeries q = rescale_var(s, Var::y, Rational(-1), Rational(-2 * pI));
                if (!q.is_zero()) conv.emplace(c, std::move(q));
            }
            if (!conv.empty()) J.data.emplace(PairKey{a, b}, std::move(conv));
        }
    }
    return J;
}

PzMap mu_inverse(const QzMap &J)
{
    const long pm = J.bp.p;
    // in the carrier y_Q of J (at z^{-1}): z = y_Q, z^{-1} = y_Q^{-1}, log z^{-1} = -log y_Q - 2 p log u
    const FormalPower t = FormalPower::of(Var::y, Rational(-2)).times(Var::u, Rational(-4 * pm - 1));
    const LogSeries minus_zinv = carrier(Var::y, Rational(-1), ExactComplex(-1));
    const LogSeries zinv = carrier(Var::y, Rational(-1), ExactComplex(1));
    const LogSeries z = carrier(Var::y, Rational(1), ExactComplex(1));

    PzMap I;
    I.W1 = J.W1;
    I.W2 = J.W2;
    I.W3 = J.W3;
    I.bp = inverse_point(J.bp, 0);
    for (std::size_t a = 0; a < J.W1->dim(); ++a) {
        SeriesVector w1 = exp_apply(J.W1->L1, minus_zinv, unit_series(a), J.W1->dim());
        for (std::size_t b = 0; b < J.W2->dim(); ++b) {
            SeriesVector w2 = exp_apply(J.W2->L1, zinv, unit_series(b), J.W2->dim());
            SeriesVector w2t;
            for (const auto &[i, s] : w2) accumulate(w2t, x_L0_apply(*J.W2, SparseVector{{i, ExactComplex(1)}}, t), s);
            SeriesVector v = apply_operator(J.data, w1, w2t);
            if (v.empty()) continue;
            v = exp_apply(J.W3->Lm1, z, v, J.W3->dim());
            SeriesVector conv;
            for (const auto &[c, s] : v) {
                // y_Q = y_0^{-1}
                LogSeries q = rescale_var(s, Var::y, Rational(-1), Rational(0));
                if (!q.is_zero()) conv.emplace(c, std::move(q));
            }
            if (!conv.empty()) I.data.emplace(PairKey{a, b}, std::move(conv));
        }
    }
    return I;
}

VerificationReport check_mu_roundtrip(const PzMap &I, double tol)
{
    PzMap back = mu_inverse(mu(I));
    PzMap ref = rebase(I, 0);
    back.bp = ref.bp;
    VerificationReport r = compare_maps(back, ref, "mu", tol);
    r.identity = "mu inverse after mu";
    return r;
}

} // namespace logtensor

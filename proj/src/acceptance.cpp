#include <logtensor/acceptance.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <logtensor/fixtures.hpp>
#include <logtensor/fusion.hpp>
#include <logtensor/intertwining.hpp>
#include <logtensor/transforms.hpp>
#include <logtensor/units.hpp>
#include <logtensor/verify.hpp>

namespace logtensor {

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
    CriterionResult &res;
    double tol;

    // keeps a report, returns whether it passed
    bool keep(VerificationReport r)
    {
        const bool ok = r.pass();
        res.reports.push_back(std::move(r));
        return ok;
    }
    void fail(const std::string &why)
    {
        res.pass = false;
        if (!res.detail.empty()) res.detail += "; ";
        res.detail += why;
    }
};

// one aggregate per tag keeps the output readable
struct Aggregate {
    VerificationReport total;
    std::size_t runs = 0, failed = 0;

    Aggregate(std::string identity, std::string tag)
    {
        total.identity = std::move(identity);
        total.tag = std::move(tag);
    }
    void add(const VerificationReport &r, const std::string &label)
    {
        ++runs;
        if (!r.pass()) {
            ++failed;
            if (total.offending.size() < kMaxOffending) total.offending.push_back(label);
        }
        VerificationReport copy = r;
        copy.offending.clear();
        copy.notes.clear();
        total.merge(copy);
    }
};

BranchPoint bp_of(long z, long p) { return BranchPoint(ExactComplex(Rational(z)), p); }

std::string bp_str(const BranchPoint &bp)
{
    std::ostringstream s;
    if (bp.exact)
        s << "z=" << bp.exact->str();
    else
        s << "z=" << bp.z;
    s << " p=" << bp.p;
    return s.str();
}

std::vector<std::size_t> heis_generators() { return {0, 1, 2, 3}; }

struct HeisPair {
    Rational l, m;
};

std::string pair_str(const HeisPair &h) { return "heis(" + h.l.get_str() + "," + h.m.get_str() + ")"; }

RandomFamily family(std::uint64_t seed, unsigned r, unsigned levels)
{
    JordanFamily spec;
    spec.r = r;
    spec.seed = seed;
    spec.levels = levels;
    return random_log_family(spec);
}

// ---------------------------------------------------------------- criteria

void c1_roundtrip(Ctx &c)
{
    Aggregate fwd("y_from_i after i_from_y is the identity", "im:correspond");
    Aggregate back("i_from_y after y_from_i is the identity", "im:correspond");
    const std::vector<BranchPoint> bps{bp_of(1, 0), bp_of(1, 1), bp_of(-1, 0), bp_of(4, 0)};
    std::size_t idx2 = 0, idx3 = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const unsigned r = seed % 2 ? 3 : 2;
        (r == 2 ? idx2 : idx3)++;
        RandomFamily F = family(seed, r, 1 + unsigned(seed % 3 == 0));
        for (const auto &bp : bps) {
            const std::string label = "seed=" + std::to_string(seed) + " r=" + std::to_string(r) + " " + bp_str(bp);
            PzMap I = i_from_y(F.Y, bp);
            LogIntwOp Y2 = y_from_i(I, F.max_logpower);
            fwd.add(compare_operators(Y2, F.Y, "im:correspond"), label);
            back.add(compare_maps(i_from_y(Y2, bp), I, "im:correspond", c.tol), label);
        }
    }
    for (auto *a : {&fwd, &back}) {
        if (!a->total.exact_mode) c.fail("comparison left exact mode");
        if (a->failed) c.fail(std::to_string(a->failed) + " round trips differ");
        c.keep(a->total);
    }
    c.res.detail = std::to_string(fwd.runs) + " round trips each way, families with Jordan index 2 (" +
                   std::to_string(idx2) + ") and 3 (" + std::to_string(idx3) + ")" +
                   (c.res.detail.empty() ? "" : "; " + c.res.detail);
}

const std::vector<HeisPair> &acceptance_pairs()
{
    static const std::vector<HeisPair> p{{rational(0), rational(0)}, {rational(1, 2), rational(1, 2)}, {rational(1), rational(-1)}};
    return p;
}

void c2_jacobi(Ctx &c)
{
    VerifyOptions opt;
    opt.tolerance = c.tol;
    for (const auto &h : acceptance_pairs()) {
        PzMap I = i_from_y(heis_intw(h.l, h.m, rational(6)), bp_of(1, 0));
        for (std::size_t v : heis_generators()) {
            VerificationReport r = verify_P_jacobi(I, basis_vector(v), opt);
            r.identity = pair_str(h) + " " + r.identity;
            if (!c.keep(r)) c.fail(r.identity);
        }
    }
}

void c3_sl2(Ctx &c)
{
    VerifyOptions opt;
    opt.tolerance = c.tol;
    for (const auto &h : acceptance_pairs()) {
        PzMap I = i_from_y(heis_intw(h.l, h.m, rational(6)), bp_of(1, 0));
        const bool integral = h.l == 0 && h.m == 0;
        for (int j = -1; j <= 1; ++j) {
            VerificationReport a = verify_P_sl2(I, j, Sl2Form::Lj, opt);
            VerificationReport b = verify_P_sl2(I, j, Sl2Form::Lj2, opt);
            a.identity = pair_str(h) + " " + a.identity;
            b.identity = pair_str(h) + " " + b.identity;
            const bool pa = a.pass(), pb = b.pass();
            if (!pa || !pb) c.fail(pair_str(h) + " j=" + std::to_string(j));
            if (integral && (!a.exact_mode || !b.exact_mode)) c.fail(pair_str(h) + " not exact");
            c.keep(a);
            c.keep(b);
        }
    }
}

void c4_residue(Ctx &c)
{
    VerifyOptions opt;
    opt.tolerance = c.tol;
    opt.keep_records = true;
    const HeisPair h{rational(1, 2), rational(1, 2)};
    PzMap I = i_from_y(heis_intw(h.l, h.m, rational(6)), bp_of(1, 0));
    for (int j = -1; j <= 1; ++j) {
        VerificationReport direct = verify_P_sl2(I, j, Sl2Form::Lj, opt);
        VerificationReport res = conformal_residue_P(I, j, opt);
        if (!records_identical(direct, res)) c.fail("records differ at j=" + std::to_string(j));
        if (!direct.pass()) c.fail("sl(2) relation fails at j=" + std::to_string(j));
        direct.keep_records = res.keep_records = false;
        direct.records.clear();
        res.records.clear();
        c.keep(direct);
        c.keep(res);
    }
}

void c5_branch(Ctx &c)
{
    Aggregate agg("branch shift: recovery at p' equals the conjugated operator", "YIp'YIp");
    const std::vector<long> zs{1, -1, 4};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RandomFamily F = family(1000 + seed, seed % 2 ? 3 : 2, 1);
        const long z = zs[seed % zs.size()];
        for (long p = 0; p <= 1; ++p) {
            PzMap I = i_from_y(F.Y, bp_of(z, p));
            for (long d = -3; d <= 3; ++d) {
                if (p == 1 && d == 0) continue;
                BranchShift s = branch_shift(I, p + d, F.max_logpower);
                agg.add(compare_operators(s.direct, s.via_formula, "YIp'YIp"),
                        "seed=" + std::to_string(seed) + " p=" + std::to_string(p) + " p'=" + std::to_string(p + d));
            }
        }
    }
    if (agg.failed || !agg.total.exact_mode) c.fail(std::to_string(agg.failed) + " shifts differ");
    c.res.detail = std::to_string(agg.runs) + " shifts on 50 families";
    c.keep(agg.total);
}

QzMap plant_defect(QzMap J)
{
    auto &vec = J.data.begin()->second;
    vec.begin()->second += LogSeries::constant(ExactComplex(1));
    return J;
}

void c6_adjunction(Ctx &c)
{
    VerifyOptions opt;
    opt.tolerance = c.tol;
    opt.n_lo = opt.m_lo = -2;
    opt.n_hi = opt.m_hi = 2;
    const std::vector<HeisPair> pairs{{rational(0), rational(0)},
                                      {rational(1, 2), rational(1, 2)},
                                      {rational(1), rational(-1)},
                                      {rational(1, 3), rational(2, 3)},
                                      {rational(-1, 2), rational(1)}};
    const std::vector<BranchPoint> bps{bp_of(1, 0), bp_of(2, 0), bp_of(-1, 1)};
    std::size_t positives = 0, negatives = 0;
    auto run = [&](const QzMap &J, const std::string &label, bool expect) {
        bool q = true, p = true;
        PzMap I = adjoint(J);
        for (std::size_t v : {1, 3}) {
            VerificationReport rq = verify_Q_jacobi(J, basis_vector(v), opt);
            VerificationReport rp = verify_P_jacobi(I, basis_vector(v), opt);
            q = q && rq.pass();
            p = p && rp.pass();
            rq.identity = label + " " + rq.identity;
            rp.identity = label + " adjoint " + rp.identity;
            c.keep(rq);
            c.keep(rp);
        }
        if (q != p) c.fail(label + ": Q and P sides disagree");
        if (q != expect) c.fail(label + (expect ? ": should pass" : ": planted defect not detected"));
    };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const LogIntwOp Y = heis_intw(pairs[i].l, pairs[i].m, rational(3));
        for (const auto &bp : bps) {
            QzMap J = adjoint(i_from_y(Y, bp));
            run(J, pair_str(pairs[i]) + " " + bp_str(bp), true);
            ++positives;
        }
        QzMap bad = plant_defect(adjoint(i_from_y(Y, bps[i % bps.size()])));
        run(bad, "defect " + pair_str(pairs[i]) + " " + bp_str(bps[i % bps.size()]), false);
        ++negatives;
    }
    c.res.detail = std::to_string(positives) + " fixtures, " + std::to_string(negatives) + " planted defects" +
                   (c.res.detail.empty() ? "" : "; " + c.res.detail);
}

void c7_br(Ctx &c)
{
    std::vector<std::pair<std::string, LogIntwOp>> fixtures;
    fixtures.emplace_back("heis(1/2,1/2)", heis_intw(rational(1, 2), rational(1, 2), rational(3)));
    fixtures.emplace_back("heis(1,-1)", heis_intw(rational(1), rational(-1), rational(3)));
    fixtures.emplace_back("jordan r=2", family(7, 2, 1).Y);
    fixtures.emplace_back("jordan r=3", family(8, 3, 1).Y);
    for (const auto &[name, Y] : fixtures)
        for (long r = -1; r <= 1; ++r) {
            VerificationReport rep = check_b_factorizations(Y, r);
            rep.identity = name + " " + rep.identity;
            if (!rep.exact_mode) c.fail(rep.identity + " not exact");
            if (!c.keep(rep)) c.fail(rep.identity);
        }
    // window 0:4:2
    ModulePtr W12 = jordan_module("J", rational(0), 2, 2);
    ModulePtr W3 = jordan_module("K", rational(0), 2, 4);
    for (long r : {-1L, 0L, 1L}) {
        RankResult rk = b_r_rank(W12, W12, W3, r, 2);
        VerificationReport rep;
        rep.identity = "B_r injective on unit families, r = " + std::to_string(r) + ", rank " + std::to_string(rk.rank) +
                       " of " + std::to_string(rk.domain_dim);
        rep.tag = "4.31";
        rep.window = "0:4:2";
        if (rk.rank == rk.domain_dim)
            rep.add("rank", ExactComplex(0));
        else
            rep.add_failure("rank", std::to_string(rk.rank) + " < " + std::to_string(rk.domain_dim));
        if (!c.keep(rep)) c.fail(rep.identity);
    }
}

void c8_mu(Ctx &c)
{
    Aggregate agg("mu inverse after mu is the identity", "mu");
    std::vector<std::pair<std::string, LogIntwOp>> fixtures;
    const std::vector<HeisPair> pairs{{rational(0), rational(0)},
                                      {rational(1, 2), rational(1, 2)},
                                      {rational(1), rational(-1)},
                                      {rational(1, 3), rational(2, 3)},
                                      {rational(-1, 2), rational(1)}};
    for (const auto &h : pairs) fixtures.emplace_back(pair_str(h), heis_intw(h.l, h.m, rational(3)));
    for (std::uint64_t s = 0; fixtures.size() < 20; ++s)
        fixtures.emplace_back("jordan seed=" + std::to_string(200 + s), family(200 + s, s % 2 ? 3 : 2, 1).Y);
    for (const auto &[name, Y] : fixtures)
        for (long z : {1L, 2L, -1L}) {
            PzMap I = i_from_y(Y, bp_of(z, 0));
            agg.add(check_mu_roundtrip(I, c.tol), name + " z=" + std::to_string(z));
        }
    if (agg.failed) c.fail(std::to_string(agg.failed) + " round trips differ");
    c.res.detail = std::to_string(agg.runs) + " round trips on " + std::to_string(fixtures.size()) + " fixtures";
    c.keep(agg.total);
}

void c9_elm(Ctx &c)
{
    VerifyOptions opt;
    opt.tolerance = c.tol;
    for (const Rational &l : {rational(0), rational(1, 2)}) {
        PzMap I = i_from_y(heis_intw(rational(0), l, rational(6)), bp_of(1, 0));
        for (long m = -2; m <= 2; ++m) {
            VerificationReport r = verify_elm(I, basis_vector(1), m, opt);
            r.identity = "Y_W for W = M(" + l.get_str() + ") " + r.identity;
            if (!c.keep(r)) c.fail(r.identity);
        }
    }
}

void c10_units(Ctx &c)
{
    struct Construction {
        std::string name;
        ModulePtr V, W, W3;
        SparseMatrix f;
        BranchPoint bp;
    };
    std::vector<Construction> cs;
    const ModulePtr V = build_fock(rational(0), 2);
    const std::vector<Rational> lambdas{rational(0), rational(1, 2), rational(-1, 2), rational(1), rational(2, 3)};
    const std::vector<BranchPoint> bps{bp_of(1, 0), bp_of(2, 0), bp_of(-1, 0), bp_of(4, 1), bp_of(1, 2)};
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        ModulePtr W = build_fock(lambdas[i], fock_cutoff(lambdas[i], lambdas[i] * lambdas[i] / 2 + 3));
        ModulePtr W3 = direct_sum(W, W, "W+W");
        SparseMatrix f;
        for (std::size_t b = 0; b < W->dim(); ++b) {
            f.add(b, b, ExactComplex(rational(long(i) + 1, 2)));
            f.add(b + W->dim(), b, ExactComplex(rational(-3, long(i) + 2)));
        }
        cs.push_back({"M(" + lambdas[i].get_str() + ") into M+M", V, W, W3, f, bps[i]});
    }
    const ModulePtr C1 = trivial_vacuum_module();
    const std::vector<std::pair<Rational, unsigned>> jordans{
        {rational(0), 2}, {rational(1, 3), 2}, {rational(1, 2), 3}, {rational(2, 3), 3}, {rational(1), 2}};
    for (std::size_t i = 0; i < jordans.size(); ++i) {
        ModulePtr W = jordan_module("J", jordans[i].first, jordans[i].second, 2);
        SparseMatrix f = identity_matrix(W->dim()).scaled(ExactComplex(Rational(long(i) + 2)));
        f += W->N.scaled(ExactComplex(rational(1, long(i) + 1)));
        f += (W->N * W->N).scaled(ExactComplex(Rational(-1)));
        cs.push_back({"Jordan h=" + jordans[i].first.get_str() + " r=" + std::to_string(jordans[i].second), C1, W, W, f,
                      bps[i]});
    }
    std::size_t recovered = 0;
    for (const auto &k : cs) {
        for (bool left : {true, false}) {
            UnitResult u = left ? unit_eta_left(planted_left(k.V, k.W, k.W3, k.f, k.bp), c.tol)
                                : unit_eta_right(planted_right(k.V, k.W, k.W3, k.f, k.bp), c.tol);
            u.report.identity = (left ? "left unit, " : "right unit, ") + k.name + " " + bp_str(k.bp);
            const bool same = u.matrix && *u.matrix == k.f;
            if (!same) c.fail(u.report.identity + ": recovered map differs");
            if (!u.report.pass()) c.fail(u.report.identity + ": checks fail");
            if (same && u.report.pass()) ++recovered;
            c.keep(u.report);
        }
    }
    c.res.detail = std::to_string(recovered) + " of " + std::to_string(2 * cs.size()) + " planted maps recovered exactly" +
                   (c.res.detail.empty() ? "" : "; " + c.res.detail);
}

// violating quadruples from fusion matrices: (N_a N_b)_{jc} against sum_i N^i_{ab} (N_i)_{jc}
std::vector<AssocViolation> matrix_oracle(const FusionTable &T)
{
    const std::size_t k = T.rank();
    auto Nmat = [&](std::size_t a) {
        std::vector<std::uint64_t> m(k * k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < k; ++i) m[j * k + i] = T(j, a, i);
        return m;
    };
    std::vector<std::vector<std::uint64_t>> mats;
    for (std::size_t a = 0; a < k; ++a) mats.push_back(Nmat(a));
    std::vector<AssocViolation> out;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            std::vector<std::uint64_t> prod(k * k, 0), comb(k * k, 0);
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t cc = 0; cc < k; ++cc)
                    for (std::size_t i = 0; i < k; ++i) {
                        prod[j * k + cc] += mats[a][j * k + i] * mats[b][i * k + cc];
                        comb[j * k + cc] += T(i, a, b) * mats[i][j * k + cc];
                    }
            for (std::size_t cc = 0; cc < k; ++cc)
                for (std::size_t j = 0; j < k; ++j)
                    if (prod[j * k + cc] != comb[j * k + cc])
                        out.push_back({a, b, cc, j, prod[j * k + cc], comb[j * k + cc]});
        }
    return out;
}

void c11_fusion(Ctx &c)
{
    for (const auto &name : bundled_table_names()) {
        const FusionTable T = bundled_table(name);
        VerificationReport u = unit_law_check(T);
        u.identity = name + ": " + u.identity;
        if (!c.keep(u)) c.fail(u.identity);
        AssocResult a = assoc_multiplicity_check(T);
        a.report.identity = name + ": " + a.report.identity;
        const auto oracle = matrix_oracle(T);
        if (a.violations != oracle) c.fail(name + ": violations differ from the matrix oracle");
        if (name == "ising-corrupted") {
            if (a.report.pass() || a.violations.empty())
                c.fail("the corrupted table is still associative (sigma*sigma = 1 + eps + sigma is the Rep(S3) ring), "
                       "so no violating quadruple exists; the matrix oracle agrees");
            c.res.reports.push_back(a.report);
            c.res.detail = "corrupted Ising: " + std::to_string(a.violations.size()) + " violating quadruples";
            continue;
        }
        if (!c.keep(a.report)) c.fail(a.report.identity);
        VerificationReport b = bilinearity_check(T, 11, 50);
        b.identity = name + ": " + b.identity;
        if (!c.keep(b)) c.fail(b.identity);
    }
}

// ---------------------------------------------------------------- kernel

Rational falling(const Rational &n, long i)
{
    Rational r(1);
    for (long j = 0; j < i; ++j) r *= (n - j);
    for (long j = 1; j <= i; ++j) r /= j;
    return r;
}

LogSeries random_series(std::mt19937_64 &rng, Var v, int terms)
{
    std::uniform_int_distribution<int> ex(-6, 6), den(1, 3), lg(0, 2), cf(-5, 5);
    LogSeries s;
    for (int i = 0; i < terms; ++i)
        s.add_term(MonoKey::single(v, ExactComplex(rational(ex(rng), den(rng))), unsigned(lg(rng))),
                   ExactComplex(Rational(cf(rng)), Rational(cf(rng) % 2)));
    return s;
}

void c12_kernel(Ctx &c)
{
    std::mt19937_64 rng(2024);
    Aggregate ring("ring laws: associativity, commutativity, distributivity", "series");
    Aggregate leib("Leibniz rule for d/dx", "series");
    Aggregate subst("substitution x -> e^{l_p(z)} is multiplicative", "log:fsub");
    Aggregate delta("delta expansion against the binomial double loop", "delta");
    for (int t = 0; t < 1000; ++t) {
        const LogSeries a = random_series(rng, Var::x, 3), b = random_series(rng, Var::x, 3), d = random_series(rng, Var::x, 2);
        VerificationReport r;
        auto eq = [&](const std::string &k, const LogSeries &l, const LogSeries &rr) {
            if (l == rr)
                r.add(k, ExactComplex(0));
            else
                r.add_failure(k, "differs");
        };
        const std::string tk = "case=" + std::to_string(t);
        eq(tk + " assoc", (a * b) * d, a * (b * d));
        eq(tk + " comm", a * b, b * a);
        eq(tk + " distrib", a * (b + d), a * b + a * d);
        eq(tk + " additive inverse", a + (-a), LogSeries());
        ring.add(r, tk);

        VerificationReport rl;
        if (ddx(a * b, Var::x) == ddx(a, Var::x) * b + a * ddx(b, Var::x))
            rl.add(tk, ExactComplex(0));
        else
            rl.add_failure(tk, "differs");
        leib.add(rl, tk);
    }
    std::uniform_int_distribution<int> zi(-4, 4), pi(-2, 2);
    for (int t = 0; t < 1000; ++t) {
        const LogSeries a = random_series(rng, Var::x, 3), b = random_series(rng, Var::x, 3);
        NumericComplex z(zi(rng) / 2.0, zi(rng) / 3.0);
        if (z == NumericComplex(0, 0)) z = NumericComplex(1.5, 0);
        const NumericComplex zeta = branch_value(z, pi(rng));
        auto at = [&](const LogSeries &s) {
            auto m = substitute_exp(s, Var::x, zeta);
            return m.empty() ? NumericComplex(0, 0) : m.begin()->second;
        };
        const NumericComplex lhs = at(a * b), rhs = at(a) * at(b);
        VerificationReport r;
        r.tolerance = 1e-12;
        r.scale = std::max(1.0, std::abs(at(a)) * std::abs(at(b)));
        r.add("case=" + std::to_string(t), lhs - rhs);
        subst.add(r, "case=" + std::to_string(t));
    }
    std::uniform_int_distribution<int> pat(0, 2), zn(-5, 5), zd(1, 4), co(-4, 4);
    const DeltaPattern pats[] = {DeltaPattern::x1_minus_z, DeltaPattern::x1_minus_x0, DeltaPattern::z_minus_x1};
    const auto w = TruncationWindow::make(Rational(-4), Rational(4), 0);
    for (int t = 0; t < 1000; ++t) {
        const int p = pat(rng);
        int num = zn(rng);
        if (num == 0) num = 1;
        const Rational zq = rational(num, zd(rng));
        const int a = co(rng), b = co(rng);
        const LogSeries dd = delta_expand(pats[p], scalar(ExactComplex(zq)), w);
        Rational expect(0);
        if (p == 0) {
            const long n = -a - 1, i = n - b;
            if (i >= 0) expect = falling(Rational(n), i) * pow(ExactComplex(-zq), i).re();
        } else if (p == 1) {
            const long i = a, n = b + a;
            if (i >= 0) expect = falling(Rational(n), i) * ((i % 2) ? -1 : 1) * pow(ExactComplex(zq), -n - 1).re();
        } else {
            const long n = -a - 1, i = b;
            if (i >= 0)
                expect = ((n % 2) ? -1 : 1) * falling(Rational(n), i) * ((i % 2) ? -1 : 1) * pow(ExactComplex(zq), n - i).re();
        }
        const ExactComplex got =
            dd.coefficient(MonoKey::single(Var::x0, ExactComplex(a)) * MonoKey::single(Var::x1, ExactComplex(b)));
        VerificationReport r;
        const std::string k = std::string(pattern_name(pats[p])) + " z=" + zq.get_str() + " a=" + std::to_string(a) +
                              " b=" + std::to_string(b);
        r.add(k, got - ExactComplex(expect));
        delta.add(r, k);
    }
    for (auto *agg : {&ring, &leib, &subst, &delta}) {
        if (agg->failed) c.fail(agg->total.identity + ": " + std::to_string(agg->failed) + " failures");
        c.keep(agg->total);
    }
    c.res.detail = "1000 cases per property" + (c.res.detail.empty() ? "" : "; " + c.res.detail);
}

struct Entry {
    int id;
    const char *title;
    double budget;
    void (*run)(Ctx &);
};

const Entry kCriteria[] = {
    {1, "round-trip isomorphism between operators and P(z)-maps", 30, c1_roundtrip},
    {2, "P(z) Jacobi identity on Heisenberg fixtures", 120, c2_jacobi},
    {3, "sl(2) relations in both forms", 0, c3_sl2},
    {4, "conformal residue reproduces the L(j) report", 0, c4_residue},
    {5, "branch-shift law", 0, c5_branch},
    {6, "P/Q adjunction preserves Jacobi validity", 0, c6_adjunction},
    {7, "B_r factorizations agree and B_r is injective", 0, c7_br},
    {8, "mu transport round trip", 0, c8_mu},
    {9, "module action on tensor elements", 0, c9_elm},
    {10, "unit laws recover planted module maps", 0, c10_units},
    {11, "fusion tables: unit laws, bilinearity, associativity", 1, c11_fusion},
    {12, "series kernel properties", 60, c12_kernel},
};

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt)
{
    std::vector<CriterionResult> out;
    for (const auto &e : kCriteria) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), e.id) == opt.only.end()) continue;
        CriterionResult res;
        res.id = e.id;
        res.title = e.title;
        res.budget = e.budget;
        res.pass = true;
        Ctx ctx{res, opt.tolerance};
        const auto t0 = Clock::now();
        try {
            e.run(ctx);
        } catch (const std::exception &ex) {
            ctx.fail(std::string("exception: ") + ex.what());
        }
        res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (res.budget > 0 && res.seconds > res.budget) ctx.fail("over the time budget");
        out.push_back(std::move(res));
    }
    return out;
}

std::string criterion_line(const CriterionResult &c)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", c.seconds);
    std::string line = std::string(c.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + ": " + c.title +
                       " (" + buf;
    if (c.budget > 0) {
        std::snprintf(buf, sizeof buf, " of %.0fs budget", c.budget);
        line += buf;
    }
    line += ")";
    if (!c.detail.empty()) line += " - " + c.detail;
    return line;
}

} // namespace logtensor

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <logtensor/fixtures.hpp>
#include <logtensor/intertwining.hpp>
#include <logtensor/verify.hpp>

using namespace logtensor;

namespace {

BranchPoint at(long z, long p) { return BranchPoint(ExactComplex(Rational(z)), p); }

// one-dimensional modules with a single coefficient x^{-n-1} (log x)^k
LogIntwOp single(const Rational &n, unsigned k)
{
    ModulePtr A = trivial_module("A", {ExactComplex(0)});
    ModulePtr B = trivial_module("B", {ExactComplex(0)});
    ModulePtr C = trivial_module("C", {ExactComplex(-n - 1)});
    LogIntwOp Y{A, B, C, {}};
    Y.data[{0, 0}].emplace(0, LogSeries::monomial(Var::x, ExactComplex(-n - 1), k));
    return Y;
}

NumericComplex value(const PzMap &I) { return evaluate(I.at(0, 0).at(0), I.bp); }

VerifyOptions small_window()
{
    VerifyOptions o;
    o.n_lo = o.m_lo = -2;
    o.n_hi = o.m_hi = 2;
    return o;
}

} // namespace

TEST_CASE("substituting x at a branch point", "[intertwining]")
{
    CHECK(std::abs(value(i_from_y(single(Rational(-1), 0), at(1, 0))) - 1.0) < 1e-15);
    CHECK(std::abs(value(i_from_y(single(Rational(-1), 1), at(1, 1))) - NumericComplex(0, 2 * std::numbers::pi)) < 1e-12);
    CHECK(std::abs(value(i_from_y(single(rational(-3, 2), 0), at(4, 0))) - 2.0) < 1e-14);
    // x^{1/2} at z = -1 lands on e^{i pi/2}
    auto I = i_from_y(single(rational(-3, 2), 0), at(-1, 0));
    CHECK(evaluate_exact(I.at(0, 0).at(0), I.bp) == imag_unit());
}

TEST_CASE("operator and map recover each other exactly", "[intertwining]")
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        JordanFamily spec;
        spec.r = 2 + seed % 2;
        spec.seed = seed;
        RandomFamily F = random_log_family(spec);
        for (auto bp : {at(1, 0), at(1, 1), at(-1, 0), at(4, 0), at(-3, 2)}) {
            PzMap I = i_from_y(F.Y, bp);
            LogIntwOp Y2 = y_from_i(I, F.max_logpower);
            CHECK(Y2 == F.Y);
            CHECK(audit_operator(Y2, F.max_logpower).pass());
            CHECK(compare_maps(i_from_y(Y2, bp), I, "im:correspond", 1e-9).pass());
        }
    }
    auto Y = heis_intw(rational(1, 2), rational(-1, 3), rational(3));
    CHECK(y_from_i(i_from_y(Y, at(2, 1)), 0) == Y);
}

TEST_CASE("recovery with too small a log window is refused", "[intertwining]")
{
    JordanFamily spec;
    spec.r = 3;
    spec.seed = 4;
    RandomFamily F = random_log_family(spec);
    REQUIRE(F.Y.max_logpower() > 0);
    CHECK_THROWS(y_from_i(i_from_y(F.Y, at(1, 1)), 0));
}

TEST_CASE("branch shift agrees with the conjugation formula", "[intertwining]")
{
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        JordanFamily spec;
        spec.r = 2 + seed % 2;
        spec.seed = seed;
        RandomFamily F = random_log_family(spec);
        PzMap I = i_from_y(F.Y, at(-1, 0));
        for (long q = -3; q <= 3; ++q) {
            BranchShift s = branch_shift(I, q, F.max_logpower);
            CHECK(s.direct == s.via_formula);
            CHECK(compare_operators(s.direct, s.via_formula, "YIp'YIp").exact_mode);
        }
        // no shift, no change
        CHECK(branch_shift(I, 0, F.max_logpower).direct == F.Y);
    }
}

TEST_CASE("recovery at another branch index describes the same map", "[intertwining]")
{
    JordanFamily spec;
    spec.r = 2;
    spec.seed = 3;
    RandomFamily F = random_log_family(spec);
    REQUIRE(F.Y.max_logpower() > 0);
    PzMap I = i_from_y(F.Y, at(1, 0));
    LogIntwOp Y1 = y_from_i(I, 1, F.max_logpower);
    CHECK_FALSE(Y1 == F.Y);
    PzMap I1 = i_from_y(Y1, at(1, 1));
    for (const auto &[key, vec] : I.data)
        for (const auto &[c, s] : vec) {
            const NumericComplex want = evaluate(s, I.bp);
            const NumericComplex got = evaluate(I1.at(key.first, key.second)[c], I1.bp);
            CHECK(std::abs(want - got) < 1e-9 * std::max(1.0, std::abs(want)));
        }
}

TEST_CASE("transport to another z keeps the carrier data", "[intertwining]")
{
    auto Y = heis_intw(rational(1, 2), rational(1, 2), rational(3));
    PzMap I = i_from_y(Y, at(1, 0));
    PzMap T = transport_z(I, at(2, 1));
    PzMap direct = i_from_y(Y, at(2, 1));
    CHECK(T.data == direct.data);
    CHECK(T.bp.p == 1);
    CHECK(verify_P_jacobi(T, basis_vector(1), small_window()).pass());
}

TEST_CASE("adjoint is an involution and exchanges P and Q Jacobi validity", "[intertwining]")
{
    auto Y = heis_intw(rational(1, 2), rational(1, 2), rational(3));
    for (auto bp : {at(1, 0), at(2, 0)}) {
        PzMap I = i_from_y(Y, bp);
        QzMap J = adjoint(I);
        CHECK(J.W1 == dual(I.W3));
        CHECK(J.W3 == dual(I.W1));
        CHECK(J.W2 == I.W2);
        PzMap back = adjoint(J);
        CHECK(back.data == I.data);
        CHECK(back.W1 == I.W1);
        for (std::size_t v : {1u, 3u}) {
            CHECK(verify_Q_jacobi(J, basis_vector(v), small_window()).pass());
            CHECK(verify_P_jacobi(back, basis_vector(v), small_window()).pass());
        }
        QzMap bad = J;
        bad.data.begin()->second.begin()->second += LogSeries::constant(ExactComplex(1));
        CHECK_FALSE(verify_Q_jacobi(bad, basis_vector(1), small_window()).pass());
        CHECK_FALSE(verify_P_jacobi(adjoint(bad), basis_vector(1), small_window()).pass());
    }
}

TEST_CASE("Q-correspondence matches the adjoint of the P-correspondence", "[intertwining]")
{
    auto Y = heis_intw(rational(1, 2), rational(1, 3), rational(3));
    for (auto bp : {at(1, 0), at(2, 0), at(-1, 1)}) {
        QzMap J = i_q_from_y(Y, bp);
        QzMap oracle = adjoint(i_from_y(Y, bp));
        CHECK(J.data == oracle.data);
        CHECK(J.W1 == dual(Y.W3));
        CHECK(J.W3 == dual(Y.W1));
        CHECK(y_q_from_i(J, 0) == Y);
    }
    CHECK(verify_Q_jacobi(i_q_from_y(Y, at(2, 0)), basis_vector(1), small_window()).pass());
    JordanFamily spec;
    spec.r = 3;
    spec.seed = 9;
    RandomFamily F = random_log_family(spec);
    QzMap J = i_q_from_y(F.Y, at(4, 0));
    CHECK(y_q_from_i(J, F.max_logpower) == F.Y);
}

TEST_CASE("Jacobi identity on Heisenberg maps, exact and numeric", "[intertwining][verify]")
{
    auto Y = heis_intw(rational(1, 2), rational(1, 2), rational(3));
    auto exact = verify_P_jacobi(i_from_y(Y, at(1, 0)), basis_vector(1), small_window());
    CHECK(exact.pass());
    CHECK(exact.exact_mode);
    CHECK(exact.checked > 0);
    auto numeric = verify_P_jacobi(i_from_y(Y, at(2, 0)), basis_vector(1), small_window());
    CHECK(numeric.pass());
    CHECK_FALSE(numeric.exact_mode);
    CHECK(numeric.max_deviation <= 1e-9 * numeric.scale);
    auto complex_z = verify_P_jacobi(i_from_y(Y, BranchPoint(NumericComplex(0.3, -0.8), 1)), basis_vector(3), small_window());
    CHECK(complex_z.pass());
}

TEST_CASE("vacuum Jacobi holds for any grading-compatible map", "[intertwining][verify]")
{
    auto Y = heis_intw(rational(1, 2), rational(1, 2), rational(3));
    PzMap I = i_from_y(Y, at(1, 0));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-5, 5);
    for (auto &[key, vec] : I.data)
        for (auto &[c, s] : vec) s = LogSeries::constant(ExactComplex(Rational(d(rng))));
    CHECK(audit_map(I).pass());
    CHECK(verify_P_jacobi(I, basis_vector(0), small_window()).pass());
    CHECK(verify_Q_jacobi(adjoint(I), basis_vector(0), small_window()).pass());
    CHECK_FALSE(verify_P_jacobi(I, basis_vector(1), small_window()).pass());
}

TEST_CASE("planted defects are reported with their coefficient keys", "[intertwining][verify]")
{
    auto Y = heis_intw(rational(0), rational(0), rational(3));
    PzMap I = i_from_y(Y, at(1, 0));
    I.data[{1, 0}][1] += LogSeries::constant(ExactComplex(1));
    auto r = verify_P_jacobi(I, basis_vector(1), small_window());
    CHECK_FALSE(r.pass());
    CHECK(r.failures > 0);
    REQUIRE_FALSE(r.offending.empty());
    CHECK(r.offending.front().find("w1=") != std::string::npos);
    CHECK(r.offending.size() <= kMaxOffending);
}

TEST_CASE("sl(2) relations in both forms", "[intertwining][verify]")
{
    for (auto [l, m] : {std::pair{rational(0), rational(0)}, std::pair{rational(1, 2), rational(1, 2)}}) {
        PzMap I = i_from_y(heis_intw(l, m, rational(4)), at(1, 0));
        for (int j = -1; j <= 1; ++j) {
            auto a = verify_P_sl2(I, j, Sl2Form::Lj, {});
            auto b = verify_P_sl2(I, j, Sl2Form::Lj2, {});
            CHECK(a.pass());
            CHECK(b.pass());
            CHECK(a.tag == "im:Lj");
            CHECK(b.tag == "im:Lj2");
            if (l == 0) CHECK((a.exact_mode && b.exact_mode));
            CHECK(verify_Q_sl2(adjoint(I), j, {}).pass());
        }
    }
    // L(-1) derivative property fails once a weight-raising component is scaled
    PzMap I = i_from_y(heis_intw(rational(0), rational(0), rational(4)), at(1, 0));
    for (auto &[c, s] : I.data.at({1, 1})) s = s.scaled(ExactComplex(2));
    CHECK_FALSE(verify_P_sl2(I, -1, Sl2Form::Lj, {}).pass());
}

TEST_CASE("conformal residue reproduces the sl(2) report", "[intertwining][verify]")
{
    VerifyOptions o;
    o.keep_records = true;
    PzMap I = i_from_y(heis_intw(rational(1, 2), rational(1, 2), rational(4)), at(1, 0));
    for (int j = -1; j <= 1; ++j) {
        auto a = verify_P_sl2(I, j, Sl2Form::Lj, o);
        auto b = conformal_residue_P(I, j, o);
        CHECK(records_identical(a, b));
        CHECK(!a.records.empty());
        auto q = verify_Q_sl2(adjoint(I), j, o);
        auto qr = conformal_residue_Q(adjoint(I), j, o);
        CHECK(records_identical(q, qr));
    }
}

TEST_CASE("module action on tensor elements", "[intertwining][verify]")
{
    PzMap I = i_from_y(heis_intw(rational(0), rational(1, 2), rational(5)), at(1, 0));
    for (long m = -2; m <= 2; ++m) CHECK(verify_elm(I, basis_vector(1), m, {}).pass());
    CHECK(verify_elm(I, basis_vector(0), -1, {}).pass());
    auto numeric = i_from_y(heis_intw(rational(0), rational(1, 2), rational(4)), at(2, 0));
    CHECK(verify_elm(numeric, basis_vector(1), 0, {}).pass());
    I.data[{1, 0}][0] += LogSeries::constant(ExactComplex(3));
    CHECK_FALSE(verify_elm(I, basis_vector(1), 1, {}).pass());
}

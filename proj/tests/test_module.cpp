#include <catch_amalgamated.hpp>

#include <random>

#include <logtensor/fixtures.hpp>
#include <logtensor/module.hpp>

using namespace logtensor;

namespace {

const ExactComplex one(1);

SparseVector unit(std::size_t i) { return {{i, one}}; }

SparseVector random_vector(std::mt19937_64 &rng, std::size_t dim)
{
    SparseVector v;
    for (int t = 0; t < 3; ++t) {
        long n = long(rng() % 7) - 3;
        if (n) v[rng() % dim] += ExactComplex(rational(n, long(rng() % 3) + 1));
    }
    for (auto it = v.begin(); it != v.end();) it = it->second.is_zero() ? v.erase(it) : std::next(it);
    return v;
}

// sum of the series values in a single variable keyed by monomial
LogSeries component(const SeriesVector &v, std::size_t i)
{
    auto it = v.find(i);
    return it == v.end() ? LogSeries() : it->second;
}

} // namespace

TEST_CASE("grade group arithmetic", "[graded-space]")
{
    GradeGroup g{{0, 3}};
    Grade a{rational(1, 2), Rational(2)}, b{rational(1, 3), Rational(2)};
    CHECK(g.add(a, b) == Grade{rational(5, 6), Rational(1)});
    CHECK(g.negate(a) == Grade{rational(-1, 2), Rational(1)});
    CHECK(g.add(a, g.negate(a)) == g.zero());
}

TEST_CASE("sparse matrix algebra", "[graded-space]")
{
    SparseMatrix A, B;
    A.add(0, 1, ExactComplex(2));
    A.add(1, 0, ExactComplex(3));
    B.add(1, 1, ExactComplex(5));
    SparseMatrix AB = A * B;
    CHECK(AB.at(0, 1) == ExactComplex(10));
    CHECK(AB.nonzeros() == 1);
    CHECK(A.transpose().at(1, 0) == ExactComplex(2));
    SparseVector v{{0, one}, {1, one}};
    auto w = A.apply(v);
    CHECK(w.at(0) == ExactComplex(2));
    CHECK(w.at(1) == ExactComplex(3));
    CHECK((A - A).empty());
}

TEST_CASE("x^L0 on a semisimple vector", "[graded-space]")
{
    auto M = trivial_module("T", {ExactComplex(2)});
    auto out = x_L0_apply(*M, unit(0), FormalPower::of(Var::x));
    CHECK(component(out, 0) == LogSeries::monomial(Var::x, ExactComplex(2)));
}

TEST_CASE("x^L0 on a Jordan block", "[graded-space]")
{
    auto M = jordan_module("J", Rational(0), 2, 0);
    auto out = x_L0_apply(*M, unit(0), FormalPower::of(Var::x));
    CHECK(component(out, 0) == LogSeries::constant(one));
    CHECK(component(out, 1) == LogSeries::monomial(Var::x, ExactComplex(0), 1));
}

TEST_CASE("x^-L0 then x^L0 is the identity", "[graded-space]")
{
    std::mt19937_64 rng(11);
    auto M = jordan_module("J", rational(1, 3), 3, 2);
    for (int t = 0; t < 20; ++t) {
        auto v = random_vector(rng, M->dim());
        auto back = x_L0_apply(*M, x_L0_apply(*M, v, FormalPower::of(Var::x, Rational(-1))), FormalPower::of(Var::x));
        CHECK(back == to_series(v));
    }
}

TEST_CASE("non-nilpotent N is rejected", "[graded-space]")
{
    auto base = jordan_module("J", Rational(0), 2, 0);
    auto M = std::make_shared<GeneralizedModule>(*base);
    M->N.add(0, 1, one);
    CHECK_THROWS(x_L0_apply(*M, unit(0), FormalPower::of(Var::x)));
}

TEST_CASE("opposite modes of the vacuum and of alpha", "[graded-space]")
{
    auto M = build_fock(rational(1, 2), 4);
    auto Yo = y_opposite(*M, 0);
    REQUIRE(Yo.size() == 1);
    CHECK(Yo.begin()->first == -1);
    CHECK(Yo.begin()->second == identity_matrix(M->dim()));

    // weight one, L(1) alpha = 0: alpha°_k = -alpha_{-k}
    for (long k = -3; k <= 3; ++k) {
        SparseMatrix expect = fock_alpha(*M, -k).scaled(ExactComplex(-1));
        CHECK(opposite_mode(*M, 1, k) == expect);
    }
}

TEST_CASE("contragredient modes pair with opposite modes", "[graded-space]")
{
    // oracle: Y°(v,x) = sum_j x^j/j! (-1)^wt x^{-2wt} Y(L(1)^j v, x^-1), expanded by hand
    auto M = build_fock(Rational(1), 4);
    auto D = contragredient(M);
    const auto &V = *M->algebra;
    for (std::size_t v = 0; v < V.basis.size(); ++v) {
        const long wt = to_long(V.weight(v).re());
        std::map<long, SparseMatrix> by_power; // power of x -> matrix
        SparseVector u = unit(v);
        for (long j = 0; !u.empty(); ++j) {
            // Y(u, x^-1) = sum_m u_m x^{m+1}
            auto [mlo, mhi] = M->mode_range();
            for (long m = mlo; m <= mhi; ++m) {
                SparseMatrix op = M->mode(u, m);
                if (op.empty()) continue;
                const ExactComplex c = ExactComplex((wt % 2 ? -1 : 1)) * ExactComplex(Rational(1) / factorial(unsigned(j)));
                by_power[j - 2 * wt + m + 1] += op.scaled(c);
            }
            u = V.L1.apply(u);
        }
        for (const auto &[power, op] : by_power) {
            long k = -power - 1;
            CHECK(opposite_mode(*M, v, k) == op);
            const SparseMatrix *dm = D->mode(v, k);
            SparseMatrix dual_op = dm ? *dm : SparseMatrix();
            CHECK(dual_op == op.transpose());
        }
    }
}

TEST_CASE("pairing identities of the contragredient", "[graded-space]")
{
    std::mt19937_64 rng(5);
    auto M = jordan_module("J", rational(1, 2), 2, 3);
    auto D = contragredient(M);
    for (std::size_t i = 0; i < M->dim(); ++i) CHECK(D->weight(i) == M->weight(i));
    for (int t = 0; t < 30; ++t) {
        auto wp = random_vector(rng, D->dim());
        auto w = random_vector(rng, M->dim());
        CHECK(pairing(D->L1.apply(wp), w) == pairing(wp, M->Lm1.apply(w)));
        CHECK(pairing(D->Lm1.apply(wp), w) == pairing(wp, M->L1.apply(w)));
        CHECK(pairing(D->N.apply(wp), w) == pairing(wp, M->N.apply(w)));
    }
}

TEST_CASE("double contragredient is the identity", "[graded-space]")
{
    for (auto M : {build_fock(rational(1, 2), 4), jordan_module("J", rational(1, 3), 3, 2)}) {
        auto DD = contragredient(contragredient(M));
        REQUIRE(DD->dim() == M->dim());
        for (std::size_t i = 0; i < M->dim(); ++i) {
            CHECK(DD->basis[i].grade == M->basis[i].grade);
            CHECK(DD->weight(i) == M->weight(i));
        }
        CHECK(DD->Lm1 == M->Lm1);
        CHECK(DD->L1 == M->L1);
        CHECK(DD->N == M->N);
        CHECK(DD->modes == M->modes);
        CHECK(dual(dual(M)) == M);
    }
}

TEST_CASE("strong grading audit", "[graded-space]")
{
    CHECK(check_strong_grading(*build_fock(Rational(0), 6)).pass());
    CHECK(check_strong_grading(*contragredient(build_fock(rational(1, 2), 5))).pass());

    GeneralizedModule empty;
    CHECK(check_strong_grading(empty).pass());

    auto bad = std::make_shared<GeneralizedModule>(*build_fock(Rational(0), 4));
    bad->modes[{1, 2}].add(1, 0, one); // alpha_2 must lower weight by 2
    auto r = check_strong_grading(*bad);
    CHECK_FALSE(r.pass());
    bool named = false;
    for (const auto &k : r.offending) named = named || k.find("mode [1]_2") != std::string::npos;
    CHECK(named);
}

TEST_CASE("direct sums are block diagonal", "[graded-space]")
{
    auto A = build_fock(Rational(1), 3);
    auto S = direct_sum(A, A, "M+M");
    CHECK(S->dim() == 2 * A->dim());
    CHECK(check_strong_grading(*S).pass());
    auto a = S->mode(1, -1);
    REQUIRE(a);
    CHECK(a->nonzeros() == 2 * A->mode(1, -1)->nonzeros());
}

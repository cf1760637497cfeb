#include <catch_amalgamated.hpp>

#include <logtensor/fixtures.hpp>
#include <logtensor/units.hpp>

using namespace logtensor;

namespace {

BranchPoint at(long z, long p) { return BranchPoint(ExactComplex(Rational(z)), p); }

ModulePtr vac_module() { return build_fock(Rational(0), 2); }

ModulePtr fock(const Rational &l) { return build_fock(l, fock_cutoff(l, l * l / 2 + 3)); }

} // namespace

TEST_CASE("the module vertex operator gives the identity unit map", "[units]")
{
    auto W = fock(rational(1, 2));
    const SparseMatrix id = identity_matrix(W->dim());
    for (auto bp : {at(1, 0), at(2, 0), at(-1, 1)}) {
        auto l = unit_eta_left(planted_left(vac_module(), W, W, id, bp));
        REQUIRE(l.matrix);
        CHECK(*l.matrix == id);
        CHECK(l.report.pass());
        auto r = unit_eta_right(planted_right(vac_module(), W, W, id, bp));
        REQUIRE(r.matrix);
        CHECK(*r.matrix == id);
        CHECK(r.report.pass());
    }
}

TEST_CASE("the left unit map of Y_W itself is the identity", "[units]")
{
    // heis_intw(0, lambda) is the module vertex operator of M(lambda)
    auto Y = heis_intw(rational(0), rational(1, 2), rational(3));
    PzMap I = i_from_y(Y, at(1, 0));
    auto u = unit_eta_left(I);
    REQUIRE(u.matrix);
    CHECK(*u.matrix == identity_matrix(I.W2->dim()));
    CHECK(u.report.pass());
}

TEST_CASE("scaling the map scales the unit map", "[units]")
{
    auto W = fock(rational(1));
    const ExactComplex c(rational(-5, 3), Rational(2));
    const SparseMatrix f = identity_matrix(W->dim()).scaled(c);
    auto l = unit_eta_left(planted_left(vac_module(), W, W, f, at(4, 0)));
    REQUIRE(l.matrix);
    CHECK(*l.matrix == f);
}

TEST_CASE("planted embeddings into a direct sum are recovered", "[units]")
{
    for (const Rational &lambda : {rational(0), rational(-1, 2), rational(2, 3)}) {
        auto W = fock(lambda);
        auto W3 = direct_sum(W, W, "W+W");
        SparseMatrix f;
        for (std::size_t b = 0; b < W->dim(); ++b) {
            f.add(b, b, ExactComplex(rational(3, 2)));
            f.add(b + W->dim(), b, ExactComplex(Rational(-7)));
        }
        for (auto bp : {at(1, 0), at(2, 1), BranchPoint(NumericComplex(0.5, 0.2), 0)}) {
            auto l = unit_eta_left(planted_left(vac_module(), W, W3, f, bp));
            auto r = unit_eta_right(planted_right(vac_module(), W, W3, f, bp));
            CHECK(l.report.pass());
            CHECK(r.report.pass());
            REQUIRE(l.matrix);
            REQUIRE(r.matrix);
            CHECK(*l.matrix == f);
            CHECK(*r.matrix == f);
        }
    }
}

TEST_CASE("Jordan module maps are recovered through the trivial algebra", "[units]")
{
    auto V = trivial_vacuum_module();
    auto W = jordan_module("J", rational(1, 3), 3, 2);
    SparseMatrix f = identity_matrix(W->dim()).scaled(ExactComplex(Rational(3)));
    f += W->N.scaled(ExactComplex(rational(1, 2)));
    f += (W->N * W->N).scaled(ExactComplex(Rational(-1)));
    auto l = unit_eta_left(planted_left(V, W, W, f, at(-1, 0)));
    auto r = unit_eta_right(planted_right(V, W, W, f, at(4, 0)));
    REQUIRE(l.matrix);
    REQUIRE(r.matrix);
    CHECK(*l.matrix == f);
    CHECK(*r.matrix == f);
    CHECK(l.report.pass());
    CHECK(r.report.pass());
}

TEST_CASE("with L(-1) = 0 the right unit map is I(w (x) 1)", "[units]")
{
    auto V = trivial_vacuum_module();
    auto W = trivial_module("T", {ExactComplex(0), ExactComplex(rational(1, 2)), ExactComplex(rational(1, 2))});
    SparseMatrix f;
    f.add(0, 0, ExactComplex(Rational(2)));
    f.add(1, 1, ExactComplex(Rational(1)));
    f.add(2, 1, ExactComplex(Rational(4)));
    f.add(1, 2, ExactComplex(Rational(-1)));
    PzMap I = planted_right(V, W, W, f, at(2, 0));
    auto r = unit_eta_right(I);
    for (std::size_t a = 0; a < W->dim(); ++a) CHECK(r.eta[a] == I.at(a, 0));
    REQUIRE(r.matrix);
    CHECK(*r.matrix == f);
}

TEST_CASE("a map that is not a module map is reported", "[units]")
{
    auto W = fock(rational(1, 2));
    auto l = unit_eta_left(planted_left(vac_module(), W, W, W->Lm1, at(1, 0)));
    CHECK_FALSE(l.report.pass());
    PzMap I = planted_left(vac_module(), W, W, identity_matrix(W->dim()), at(1, 0));
    I.data.at({1, 0}).begin()->second += LogSeries::constant(ExactComplex(1));
    auto bad = unit_eta_left(I);
    CHECK_FALSE(bad.report.pass());
    REQUIRE_FALSE(bad.report.offending.empty());
    CHECK(bad.report.offending.front().find("law") != std::string::npos);
}

#include <catch_amalgamated.hpp>

#include <logtensor/fixtures.hpp>

using namespace logtensor;

namespace {

const ExactComplex one(1);

// number of partitions of n, by the coin-change recurrence over part sizes
std::vector<long> partition_counts(unsigned n)
{
    std::vector<long> p(n + 1, 0);
    p[0] = 1;
    for (unsigned part = 1; part <= n; ++part)
        for (unsigned s = part; s <= n; ++s) p[s] += p[s - part];
    return p;
}

std::map<Rational, std::size_t> dims_by_weight(const GeneralizedModule &M)
{
    std::map<Rational, std::size_t> d;
    for (const auto &b : M.basis) ++d[b.weight.re()];
    return d;
}

std::size_t index_of(const GeneralizedModule &M, const std::string &name)
{
    for (std::size_t i = 0; i < M.dim(); ++i)
        if (M.basis[i].name == name) return i;
    throw std::out_of_range(name);
}

} // namespace

TEST_CASE("piece dimensions are partition counts", "[fixtures]")
{
    const auto p = partition_counts(10);
    for (unsigned cutoff : {3u, 6u, 10u}) {
        auto M = build_fock(Rational(0), cutoff);
        auto d = dims_by_weight(*M);
        for (unsigned n = 0; n <= cutoff; ++n) CHECK(long(d[Rational(n)]) == p[n]);
    }
    auto d3 = dims_by_weight(*build_fock(Rational(0), 3));
    CHECK(d3 == std::map<Rational, std::size_t>{{0, 1}, {1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("momentum offsets weights by lambda^2/2", "[fixtures]")
{
    auto M = build_fock(rational(1, 2), 3);
    CHECK(M->weight(0) == ExactComplex(rational(1, 8)));
    for (const auto &b : M->basis) CHECK(b.grade == Grade{rational(1, 2)});
}

TEST_CASE("cutoff guard", "[fixtures]")
{
    CHECK_THROWS_AS(build_fock(Rational(0), 11), ResourceGuard);
    CHECK(fock_cutoff(rational(1, 2), Rational(6)) == 5);
    CHECK(fock_cutoff(Rational(0), Rational(6)) == 6);
}

TEST_CASE("Heisenberg commutator", "[fixtures]")
{
    auto M = build_fock(rational(-1, 3), 5);
    SparseMatrix c = fock_alpha(*M, 1) * fock_alpha(*M, -1) - fock_alpha(*M, -1) * fock_alpha(*M, 1);
    for (std::size_t i = 0; i < M->dim(); ++i) {
        if (M->weight(i).re() + 1 > M->weight_hi) continue; // a(-1) leaves the cutoff space
        CHECK(c.apply(SparseVector{{i, one}}) == SparseVector{{i, one}});
    }
}

TEST_CASE("vertex operator modes match oscillators and Sugawara", "[fixtures]")
{
    auto M = build_fock(rational(1, 2), 6);
    const auto &V = *M->algebra;
    REQUIRE(V.basis.size() == 4);
    REQUIRE(V.omega);
    CHECK(V.basis[1].name == "[1]");
    for (long m = -3; m <= 3; ++m) {
        const SparseMatrix *a = M->mode(1, m);
        SparseMatrix am = a ? *a : SparseMatrix();
        CHECK(am == fock_alpha(*M, m));
    }
    // omega_m = L(m-1), restricted to entries whose target stays stored
    CHECK(M->mode(*V.omega, 0) == fock_sugawara(*M, -1));
    CHECK(M->mode(*V.omega, 2) == fock_sugawara(*M, 1));
    CHECK(M->mode(*V.omega, 1) == M->L(0));
    // the vacuum acts as the identity
    CHECK(*M->mode(0, -1) == identity_matrix(M->dim()));
    // a(-2)1 has Y = d/dx a(x), so its m-th mode is -m a_{m-1}
    CHECK(*M->mode(2, 1) == fock_alpha(*M, 0).scaled(ExactComplex(-1)));
}

TEST_CASE("fixtures pass the strong grading audit", "[fixtures]")
{
    for (auto l : {Rational(0), rational(1, 2), Rational(1), Rational(-1)})
        CHECK(check_strong_grading(*build_fock(l, 5)).pass());
    CHECK(check_strong_grading(*jordan_module("J", rational(1, 3), 3, 3)).pass());
    CHECK(check_strong_grading(*jordan_module("J", Rational(0), 2, 2)).pass());
    CHECK(check_strong_grading(*trivial_module("T", {ExactComplex(0), ExactComplex(rational(1, 2))})).pass());
}

TEST_CASE("lambda = mu = 0 reduces to the module vertex operator", "[fixtures]")
{
    auto M = build_fock(Rational(0), 4);
    auto Y = heis_intw(M, M, M);
    const auto &V = *M->algebra;
    for (std::size_t v = 0; v < V.basis.size(); ++v) {
        std::size_t a = index_of(*M, V.basis[v].name);
        for (std::size_t b = 0; b < M->dim(); ++b) {
            SeriesVector expect;
            for (const auto &[key, op] : M->modes) {
                if (key.first != v) continue;
                for (const auto &[c, x] : op.apply(SparseVector{{b, one}}))
                    expect[c] += LogSeries::monomial(Var::x, ExactComplex(-key.second - 1), 0, x);
            }
            auto it = Y.data.find({a, b});
            CHECK((it == Y.data.end() ? SeriesVector{} : it->second) == expect);
        }
    }
}

TEST_CASE("heis_intw exponent law and vertex operator expansion", "[fixtures]")
{
    const Rational l = rational(1, 2), m = rational(1, 2);
    auto Y = heis_intw(l, m, Rational(6));
    CHECK(check_strong_grading(*Y.W3).pass());
    CHECK(audit_operator(Y, 0).pass());
    for (const auto &b : Y.W3->basis) CHECK(b.grade == Grade{l + m});

    // Y(e^l, x) e^m = exp(l sum a_{-n} x^n / n) x^{lm} e^{l+m}
    auto comp = [&](const std::string &c) {
        return Y.data.at({0, 0}).at(index_of(*Y.W3, c));
    };
    const Rational lm = l * m;
    CHECK(comp("[]") == LogSeries::monomial(Var::x, ExactComplex(lm)));
    CHECK(comp("[1]") == LogSeries::monomial(Var::x, ExactComplex(lm + 1), 0, ExactComplex(l)));
    CHECK(comp("[2]") == LogSeries::monomial(Var::x, ExactComplex(lm + 2), 0, ExactComplex(l / 2)));
    CHECK(comp("[1,1]") == LogSeries::monomial(Var::x, ExactComplex(lm + 2), 0, ExactComplex(l * l / 2)));

    for (const auto &[key, vec] : Y.data)
        for (const auto &[c, s] : vec)
            for (const auto &[mono, coef] : s.terms()) {
                const Factor *f = mono.find(Var::x);
                ExactComplex e = f ? f->exp : ExactComplex(0);
                CHECK((e - ExactComplex(lm)).is_integer());
            }
}

TEST_CASE("random log families", "[fixtures]")
{
    JordanFamily spec{2, 42, 50, 1};
    auto f1 = random_log_family(spec), f2 = random_log_family(spec);
    CHECK(f1.Y.data == f2.Y.data);
    CHECK(audit_operator(f1.Y, f1.max_logpower).pass());
    CHECK(f1.Y.max_logpower() <= 3);

    JordanFamily flat{1, 3, 30, 2};
    auto f3 = random_log_family(flat);
    CHECK(f3.Y.max_logpower() == 0);

    JordanFamily deep{3, 9, 50, 1};
    auto f4 = random_log_family(deep);
    CHECK(audit_operator(f4.Y, 6).pass());
    CHECK(f4.Y.max_logpower() >= 1);
}

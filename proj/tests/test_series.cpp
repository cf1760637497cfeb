#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <logtensor/series.hpp>
#include <logtensor/series_io.hpp>

using namespace logtensor;

namespace {

TruncationWindow win(long lo, long hi, unsigned k) { return TruncationWindow::make(Rational(lo), Rational(hi), k); }

LogSeries mono(Var v, const Rational &e, unsigned k = 0, long c = 1, TruncationWindow w = TruncationWindow::open())
{
    return LogSeries::monomial(v, ExactComplex(e), k, ExactComplex(c), w);
}

MonoKey key2(Var a, long ea, Var b, long eb)
{
    return MonoKey::single(a, ExactComplex(ea)) * MonoKey::single(b, ExactComplex(eb));
}

// falling factorial over i!, computed with plain rationals
Rational falling(const Rational &n, unsigned i)
{
    Rational r(1);
    for (unsigned j = 0; j < i; ++j) r *= (n - j);
    for (unsigned j = 1; j <= i; ++j) r /= j;
    return r;
}

} // namespace

TEST_CASE("addition drops cancelled terms and merges equal keys")
{
    auto w = win(-3, 3, 2);
    CHECK((mono(Var::x, 0, 0, 1, w) + mono(Var::x, 0, 0, -1, w)).is_zero());
    auto half = Rational(1, 2);
    auto s = mono(Var::x, half, 0, 1, w) + mono(Var::x, half, 0, 1, w);
    REQUIRE(s.size() == 1);
    CHECK(s.coefficient(MonoKey::single(Var::x, ExactComplex(half))) == ExactComplex(2));
    auto t = mono(Var::x, -1, 0, 3, w) + mono(Var::x, 2, 0, 5, w);
    CHECK(t.size() == 2);
    CHECK(t.coefficient(MonoKey::single(Var::x, ExactComplex(-1))) == ExactComplex(3));
}

TEST_CASE("window mismatch is an error")
{
    CHECK_THROWS(mono(Var::x, 0, 0, 1, win(0, 2, 0)) + mono(Var::x, 1, 0, 1, win(0, 3, 0)));
    CHECK_THROWS(TruncationWindow::make(Rational(2), Rational(1), 0));
}

TEST_CASE("multiplication adds exponents and log powers")
{
    auto w = win(-4, 4, 3);
    auto one = mono(Var::x, 1, 0, 1, w) * mono(Var::x, -1, 0, 1, w);
    CHECK(one == LogSeries::constant(ExactComplex(1)));
    auto lg = mono(Var::x, 0, 1, 1, w);
    CHECK(lg * lg == mono(Var::x, 0, 2));
    auto a = LogSeries::constant(ExactComplex(1), w) + mono(Var::x, 1, 0, 1, w);
    auto b = LogSeries::constant(ExactComplex(1), w) + mono(Var::x, 1, 0, -1, w);
    CHECK(a * b == LogSeries::constant(ExactComplex(1)) + mono(Var::x, 2, 0, -1));
    // log power beyond the window is truncated silently
    auto w1 = win(-4, 4, 1);
    CHECK((mono(Var::x, 0, 1, 1, w1) * mono(Var::x, 0, 1, 1, w1)).is_zero());
}

TEST_CASE("u powers reduce modulo the sign")
{
    LogSeries s;
    s.add_term(MonoKey::single(Var::u, ExactComplex(Rational(3, 2))), ExactComplex(1));
    CHECK(s == LogSeries::monomial(Var::u, ExactComplex(Rational(1, 2)), 0, ExactComplex(-1)));
    LogSeries t;
    t.add_term(MonoKey::single(Var::u, ExactComplex(-2)), ExactComplex(5));
    CHECK(t == LogSeries::constant(ExactComplex(5)));
}

TEST_CASE("binomial expansion: finite and geometric")
{
    auto w = win(-6, 6, 0);
    auto sq = binom_expand(Var::x1, scalar(ExactComplex(1)), -1, ExactComplex(2), w);
    auto expect = mono(Var::x1, 2) + mono(Var::x1, 1, 0, -2) + LogSeries::constant(ExactComplex(1));
    CHECK(sq == expect);

    auto w2 = win(-4, 2, 0);
    auto geo = binom_expand(Var::x1, Var::x0, -1, ExactComplex(-1), w2);
    // x1^-1 + x0 x1^-2 + x0^2 x1^-3 (x1 exponent stops at -4, x0 at 2)
    CHECK(geo.size() == 3);
    for (long i = 0; i <= 2; ++i)
        CHECK(geo.coefficient(key2(Var::x0, i, Var::x1, -1 - i)) == ExactComplex(1));
}

TEST_CASE("binomial coefficients of a half power match the falling factorial")
{
    const Rational half(1, 2);
    auto w = TruncationWindow::make(Rational(-3, 2), Rational(1), 0);
    LogSeries z = LogSeries::monomial(Var::y, ExactComplex(-1));
    auto s = binom_expand(Var::x, z, -1, ExactComplex(half), w);
    REQUIRE(s.size() == 3);
    for (unsigned i = 0; i < 3; ++i) {
        MonoKey k = MonoKey::single(Var::x, ExactComplex(Rational(half - i))) *
                    MonoKey::single(Var::y, ExactComplex(-static_cast<long>(i)));
        Rational expect = falling(half, i) * ((i % 2) ? -1 : 1);
        CHECK(s.coefficient(k) == ExactComplex(expect));
    }
    CHECK(s.coefficient(MonoKey::single(Var::x, ExactComplex(Rational(-1, 2))) *
                        MonoKey::single(Var::y, ExactComplex(-1))) == ExactComplex(Rational(-1, 2)));
    CHECK(s.coefficient(MonoKey::single(Var::x, ExactComplex(Rational(-3, 2))) *
                        MonoKey::single(Var::y, ExactComplex(-2))) == ExactComplex(Rational(-1, 8)));
}

TEST_CASE("delta expansion coefficients")
{
    auto w = win(-5, 5, 0);
    LogSeries z = LogSeries::monomial(Var::y, ExactComplex(-1)); // symbolic z
    auto d = delta_expand(DeltaPattern::x1_minus_z, z, w);
    CHECK(d.coefficient(MonoKey::single(Var::x0, ExactComplex(-3)) * MonoKey::single(Var::x1, ExactComplex(1)) *
                        MonoKey::single(Var::y, ExactComplex(-1))) == ExactComplex(-2));
    CHECK(d.coefficient(MonoKey::single(Var::x0, ExactComplex(-1))) == ExactComplex(1));
    CHECK(residue(d, Var::x0) == LogSeries::constant(ExactComplex(1)));

    CHECK_THROWS(delta_expand(DeltaPattern::x1_minus_z, LogSeries(), w));
}

TEST_CASE("middle delta: x0-residue vanishes, x0^0 coefficient is z^-1 delta(x1/z)")
{
    auto w = win(-4, 4, 0);
    LogSeries z = LogSeries::monomial(Var::y, ExactComplex(-1));
    auto d = delta_expand(DeltaPattern::x1_minus_x0, z, w);
    CHECK(residue(d, Var::x0).is_zero());
    // brute force: x0^0 coefficient is sum_n z^{-n-1} x1^n
    for (const auto &[k, c] : d.terms()) {
        if (k.find(Var::x0)) continue;
        const Factor *f = k.find(Var::x1);
        long n = f ? to_long(f->exp.re()) : 0;
        CHECK(c == ExactComplex(1));
        const Factor *fy = k.find(Var::y);
        long ye = fy ? to_long(fy->exp.re()) : 0;
        CHECK(ye == n + 1); // z^{-n-1} = y^{n+1}
    }
    std::size_t count = 0;
    for (const auto &[k, c] : d.terms())
        if (!k.find(Var::x0)) ++count;
    CHECK(count == 9);
}

TEST_CASE("all delta patterns agree with a double-loop oracle")
{
    auto w = win(-4, 4, 0);
    const Rational zq(3, 2);
    LogSeries z = scalar(ExactComplex(zq));
    for (auto p : {DeltaPattern::x1_minus_z, DeltaPattern::x1_minus_x0, DeltaPattern::z_minus_x1}) {
        auto d = delta_expand(p, z, w);
        for (long a = -4; a <= 4; ++a)
            for (long b = -4; b <= 4; ++b) {
                // coefficient of x0^a x1^b
                Rational expect(0);
                if (p == DeltaPattern::x1_minus_z) {
                    long n = -a - 1, i = n - b;
                    if (i >= 0) expect = falling(Rational(n), i) * ::logtensor::pow(ExactComplex(-zq), i).re();
                } else if (p == DeltaPattern::x1_minus_x0) {
                    long i = a, n = b + a;
                    if (i >= 0)
                        expect = falling(Rational(n), i) * ((i % 2) ? -1 : 1) *
                                 ::logtensor::pow(ExactComplex(zq), -n - 1).re();
                } else {
                    long n = -a - 1, i = b;
                    if (i >= 0)
                        expect = ((n % 2) ? -1 : 1) * falling(Rational(n), i) * ((i % 2) ? -1 : 1) *
                                 ::logtensor::pow(ExactComplex(zq), n - i).re();
                }
                INFO(pattern_name(p) << " a=" << a << " b=" << b);
                CHECK(d.coefficient(MonoKey::single(Var::x0, ExactComplex(a)) *
                                    MonoKey::single(Var::x1, ExactComplex(b))) == ExactComplex(expect));
            }
    }
}

TEST_CASE("residue")
{
    auto w = win(-3, 3, 2);
    auto s = mono(Var::x, -1, 0, 3, w) + mono(Var::x, 2, 0, 5, w);
    CHECK(residue(s, Var::x) == LogSeries::constant(ExactComplex(3)));
    CHECK(residue(mono(Var::x, -1, 1, 1, w), Var::x).is_zero());
}

TEST_CASE("substitution at a branch point")
{
    auto at = [](const LogSeries &s, NumericComplex zeta) {
        auto m = substitute_exp(s, Var::x, zeta);
        REQUIRE(m.size() == 1);
        return m.begin()->second;
    };
    CHECK(std::abs(at(mono(Var::x, 2), branch_value(BranchPoint(ExactComplex(1), 0))) - 1.0) < 1e-15);
    auto v = at(mono(Var::x, Rational(1, 2), 1), branch_value(BranchPoint(ExactComplex(1), 1)));
    CHECK(std::abs(v - NumericComplex(0, -2 * std::numbers::pi)) < 1e-12);
    auto e = at(mono(Var::x, Rational(-3, 2)), branch_value(BranchPoint(ExactComplex(4), 0)));
    CHECK(std::abs(e - 0.125) < 1e-15);
}

TEST_CASE("branch values")
{
    CHECK(std::abs(branch_value(NumericComplex(1, 0), 0)) < 1e-15);
    CHECK(std::abs(branch_value(NumericComplex(1, 0), 1) - NumericComplex(0, 2 * std::numbers::pi)) < 1e-15);
    CHECK(std::abs(branch_value(NumericComplex(-1, 0), 0) - NumericComplex(0, std::numbers::pi)) < 1e-15);
    CHECK_THROWS(branch_value(NumericComplex(0, 0), 0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-5, 5);
    for (int i = 0; i < 100; ++i) {
        NumericComplex z(d(rng), d(rng));
        auto diff = branch_value(z, 4) - branch_value(z, 3);
        CHECK(std::abs(diff - NumericComplex(0, 2 * std::numbers::pi)) < 1e-14);
    }
}

TEST_CASE("formal derivative")
{
    auto w = win(-3, 3, 2);
    CHECK(ddx(mono(Var::x, 2, 0, 1, w), Var::x) == mono(Var::x, 1, 0, 2));
    CHECK(ddx(mono(Var::x, 0, 1, 1, w), Var::x) == mono(Var::x, -1));
    const Rational h(1, 2);
    auto d = ddx(mono(Var::x, h, 2, 1, w), Var::x);
    LogSeries expect;
    expect.add_term(MonoKey::single(Var::x, ExactComplex(Rational(-1, 2)), 2), ExactComplex(h));
    expect.add_term(MonoKey::single(Var::x, ExactComplex(Rational(-1, 2)), 1), ExactComplex(2));
    CHECK(d == expect);
    CHECK(d.window().exponent_hi == 2);
}

TEST_CASE("exact evaluation of carriers")
{
    BranchPoint one(ExactComplex(1), 0);
    LogSeries s = LogSeries::monomial(Var::y, ExactComplex(Rational(1, 4)), 0, ExactComplex(3));
    CHECK(evaluate_exact(s, one) == ExactComplex(3));
    CHECK(evaluate_exact(LogSeries::monomial(Var::y, ExactComplex(0), 1), one) == ExactComplex(0));
    CHECK(!evaluate_exact(LogSeries::monomial(Var::y, ExactComplex(0), 1), BranchPoint(ExactComplex(1), 1)));
    CHECK(evaluate_exact(LogSeries::monomial(Var::y, ExactComplex(2)), BranchPoint(ExactComplex(4), 0)) ==
          ExactComplex(Rational(1, 16)));
    CHECK(evaluate_exact(LogSeries::monomial(Var::u, ExactComplex(Rational(1, 2))), one) == imag_unit());
    auto n = evaluate(LogSeries::monomial(Var::y, ExactComplex(Rational(-1, 2))), BranchPoint(ExactComplex(4), 0));
    CHECK(std::abs(n - 2.0) < 1e-14);
}

TEST_CASE("rescaling a variable is a ring map")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> ex(-3, 3), lg(0, 2), cf(-4, 4);
    for (int t = 0; t < 50; ++t) {
        LogSeries a, b;
        for (int i = 0; i < 3; ++i) {
            a.add_term(MonoKey::single(Var::x, ExactComplex(rational(ex(rng), 2)), lg(rng)), ExactComplex(cf(rng)));
            b.add_term(MonoKey::single(Var::x, ExactComplex(rational(ex(rng), 3)), lg(rng)), ExactComplex(cf(rng)));
        }
        for (auto [s, c] : {std::pair{1, 3}, std::pair{-1, 0}, std::pair{1, -2}}) {
            auto lhs = rescale_var(a * b, Var::x, Rational(s), Rational(c));
            auto rhs = rescale_var(a, Var::x, Rational(s), Rational(c)) * rescale_var(b, Var::x, Rational(s), Rational(c));
            CHECK(lhs == rhs);
        }
        // inverse pair
        CHECK(rescale_var(rescale_var(a, Var::x, Rational(1), Rational(3)), Var::x, Rational(1), Rational(-3)) == a);
    }
}

TEST_CASE("text and json serialization round trip")
{
    LogSeries s(win(-3, 3, 2));
    s.add_term(MonoKey::single(Var::x, ExactComplex(Rational(1, 2), Rational(-1, 3)), 2) *
                   MonoKey::single(Var::x1, ExactComplex(-2)),
               ExactComplex(Rational(7, 5), Rational(1)));
    s.add_term(MonoKey::single(Var::y, ExactComplex(Rational(5, 4))) * MonoKey::single(Var::u, ExactComplex(0), 1),
               ExactComplex(-3));
    auto text = to_text(s);
    auto back = series_from_text(text);
    CHECK(back == s);
    CHECK(back.window() == s.window());
    CHECK(to_text(back) == text);
    auto j = to_json(s);
    auto back2 = series_from_json(j);
    CHECK(back2 == s);
    CHECK(to_json(back2).dump() == j.dump());
    CHECK_THROWS(series_from_text("1 0 ; q 1 0 0\n"));
}

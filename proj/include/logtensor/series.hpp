#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <logtensor/exact.hpp>

namespace logtensor {

// x, x0, x1, x2 are the formal variables of the calculus. y and u are carriers:
// y stands for e^{-l_p(z)} of a branch point, u for e^{i pi} with log u = i pi.
enum class Var : std::uint8_t { x = 0, y = 1, x0 = 2, x1 = 3, x2 = 4, u = 5 };
inline constexpr int kVarCount = 6;

std::string_view var_name(Var v);
std::optional<Var> parse_var(std::string_view s);
inline bool is_carrier(Var v) { return v == Var::y || v == Var::u; }

struct TruncationWindow {
    Rational exponent_lo{0};
    Rational exponent_hi{0};
    unsigned max_logpower = 0;
    bool bounded = false;

    static TruncationWindow open() { return {}; }
    static TruncationWindow make(Rational lo, Rational hi, unsigned max_logpower);

    // Only x, x0, x1, x2 are truncated; carriers pass.
    bool admits(Var v, const ExactComplex &exp, unsigned logpow) const;
    TruncationWindow shifted(const Rational &d) const;

    friend bool operator==(const TruncationWindow &, const TruncationWindow &) = default;
};

struct Factor {
    Var var = Var::x;
    ExactComplex exp;
    unsigned logpow = 0;

    friend bool operator==(const Factor &, const Factor &) = default;
    friend std::strong_ordering operator<=>(const Factor &a, const Factor &b)
    {
        if (auto c = a.var <=> b.var; c != 0) return c;
        if (auto c = a.exp <=> b.exp; c != 0) return c;
        return a.logpow <=> b.logpow;
    }
};

/// Product of one factor per active variable, sorted by variable id.
/// Trivial factors (exponent 0, no log) are never stored.
class MonoKey {
public:
    MonoKey() = default;
    static MonoKey single(Var v, ExactComplex exp, unsigned logpow = 0);

    const std::vector<Factor> &factors() const { return f_; }
    bool empty() const { return f_.empty(); }
    const Factor *find(Var v) const;
    MonoKey without(Var v) const;
    // replaces (or removes, when trivial) the factor of v
    MonoKey with(Var v, ExactComplex exp, unsigned logpow) const;
    bool only_carriers() const;

    friend MonoKey operator*(const MonoKey &a, const MonoKey &b);
    friend bool operator==(const MonoKey &, const MonoKey &) = default;
    friend std::strong_ordering operator<=>(const MonoKey &a, const MonoKey &b);

    std::string str() const;

private:
    std::vector<Factor> f_;
};

/// Sparse sum of c * prod var^n (log var)^k, truncated to a window.
/// Operands with an open window adopt the other operand's window.
class LogSeries {
public:
    using Terms = std::map<MonoKey, ExactComplex>;

    LogSeries() = default;
    explicit LogSeries(TruncationWindow w) : window_(std::move(w)) {}

    static LogSeries constant(const ExactComplex &c, TruncationWindow w = TruncationWindow::open());
    static LogSeries monomial(Var v, const ExactComplex &exp, unsigned logpow = 0,
                              const ExactComplex &c = ExactComplex(1),
                              TruncationWindow w = TruncationWindow::open());
    static LogSeries term(const MonoKey &k, const ExactComplex &c,
                          TruncationWindow w = TruncationWindow::open());

    const TruncationWindow &window() const { return window_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    ExactComplex coefficient(const MonoKey &k) const;
    bool only_carriers() const;
    bool has_var(Var v) const;

    // u^b is reduced to b in [0,1) with the sign moved into c.
    void add_term(const MonoKey &k, const ExactComplex &c);

    LogSeries rewindow(const TruncationWindow &w) const;
    LogSeries scaled(const ExactComplex &c) const;

    LogSeries &operator+=(const LogSeries &o);
    LogSeries &operator-=(const LogSeries &o);
    LogSeries &operator*=(const LogSeries &o) { return *this = *this * o; }

    friend LogSeries operator+(LogSeries a, const LogSeries &b) { return a += b; }
    friend LogSeries operator-(LogSeries a, const LogSeries &b) { return a -= b; }
    friend LogSeries operator-(const LogSeries &a) { return a.scaled(ExactComplex(-1)); }
    friend LogSeries operator*(const LogSeries &a, const LogSeries &b);
    friend LogSeries operator*(const ExactComplex &c, const LogSeries &a) { return a.scaled(c); }

    // terms only; windows are not compared
    friend bool operator==(const LogSeries &a, const LogSeries &b) { return a.terms_ == b.terms_; }

    std::string str() const;

private:
    TruncationWindow window_;
    Terms terms_;
};

// carrier-valued coefficients (ring generated by y, u and their logs)
using Scalar = LogSeries;
inline Scalar scalar(const ExactComplex &c) { return LogSeries::constant(c); }

LogSeries series_add(const LogSeries &a, const LogSeries &b);
LogSeries series_mul(const LogSeries &a, const LogSeries &b);

// Integral power of a single-term series. Negative powers need a nonzero term.
LogSeries monomial_power(const LogSeries &m, long e);

/// (a + sign*b)^n expanded in non-negative powers of b.
using SecondArg = std::variant<Var, LogSeries>;
LogSeries binom_expand(Var a, const SecondArg &b, int sign, const ExactComplex &n,
                       const TruncationWindow &w);

enum class DeltaPattern {
    x1_minus_z,  // x0^-1 delta((x1 - z)/x0), expanded in z
    x1_minus_x0, // z^-1 delta((x1 - x0)/z), expanded in x0
    z_minus_x1,  // x0^-1 delta((z - x1)/(-x0)), expanded in x1
};
std::string_view pattern_name(DeltaPattern p);

LogSeries delta_expand(DeltaPattern p, const LogSeries &z, const TruncationWindow &w);

// Coefficient of var^-1 (log var)^0. Log-bearing terms contribute nothing.
LogSeries residue(const LogSeries &a, Var v);

LogSeries ddx(const LogSeries &a, Var v);

struct BranchPoint {
    NumericComplex z{1.0, 0.0};
    long p = 0;
    std::optional<ExactComplex> exact; // set when z was given as a rational

    BranchPoint() = default;
    BranchPoint(NumericComplex z_, long p_);
    BranchPoint(const ExactComplex &z_, long p_);
};

NumericComplex branch_value(const BranchPoint &bp);
NumericComplex branch_value(NumericComplex z, long p);

/// x^n -> e^{zeta n}, (log x)^m -> zeta^m, grouped by the remaining keys.
std::map<MonoKey, NumericComplex> substitute_exp(const LogSeries &a, Var v, NumericComplex zeta);

// Numeric value of a carrier-only series with y = e^{-l_p(z)}, u = e^{i pi}.
NumericComplex evaluate(const Scalar &s, const BranchPoint &bp);
// Exact value when every term rationalizes (real z, see docs); nullopt otherwise.
std::optional<ExactComplex> evaluate_exact(const Scalar &s, const BranchPoint &bp);

/// var^a (log var)^k -> var^{s a} u^{c a} (s log var + c log u)^k
LogSeries rescale_var(const LogSeries &a, Var v, const Rational &s, const Rational &c);

/// t = prod var^{c_i}; t^a and log t, used for t^{L(0)}.
struct FormalPower {
    std::vector<std::pair<Var, Rational>> parts;

    static FormalPower of(Var v, Rational c = Rational(1)) { return {{{v, std::move(c)}}}; }
    FormalPower times(Var v, Rational c) const;
    LogSeries power(const ExactComplex &a) const;
    LogSeries log() const;
};

} // namespace logtensor

#include <logtensor/series.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace logtensor {

namespace {

constexpr std::string_view kVarNames[kVarCount] = {"x", "y", "x0", "x1", "x2", "u"};

bool trivial(const ExactComplex &exp, unsigned logpow) { return exp.is_zero() && logpow == 0; }

NumericComplex npow(NumericComplex b, unsigned k)
{
    NumericComplex r(1.0, 0.0);
    for (unsigned i = 0; i < k; ++i) r *= b;
    return r;
}

const NumericComplex kIPi(0.0, std::numbers::pi);

} // namespace

std::string_view var_name(Var v) { return kVarNames[static_cast<int>(v)]; }

std::optional<Var> parse_var(std::string_view s)
{
    for (int i = 0; i < kVarCount; ++i)
        if (kVarNames[i] == s) return static_cast<Var>(i);
    return std::nullopt;
}

TruncationWindow TruncationWindow::make(Rational lo, Rational hi, unsigned max_logpower)
{
    if (lo > hi) throw std::invalid_argument("window: exponent_lo > exponent_hi");
    TruncationWindow w;
    w.exponent_lo = std::move(lo);
    w.exponent_hi = std::move(hi);
    w.max_logpower = max_logpower;
    w.bounded = true;
    return w;
}

bool TruncationWindow::admits(Var v, const ExactComplex &exp, unsigned logpow) const
{
    if (!bounded || is_carrier(v)) return true;
    return exp.re() >= exponent_lo && exp.re() <= exponent_hi && logpow <= max_logpower;
}

TruncationWindow TruncationWindow::shifted(const Rational &d) const
{
    if (!bounded) return *this;
    TruncationWindow w = *this;
    w.exponent_lo += d;
    w.exponent_hi += d;
    return w;
}

MonoKey MonoKey::single(Var v, ExactComplex exp, unsigned logpow)
{
    MonoKey k;
    if (!trivial(exp, logpow)) k.f_.push_back(Factor{v, std::move(exp), logpow});
    return k;
}

const Factor *MonoKey::find(Var v) const
{
    for (const auto &f : f_)
        if (f.var == v) return &f;
    return nullptr;
}

MonoKey MonoKey::without(Var v) const
{
    MonoKey k;
    for (const auto &f : f_)
        if (f.var != v) k.f_.push_back(f);
    return k;
}

MonoKey MonoKey::with(Var v, ExactComplex exp, unsigned logpow) const
{
    MonoKey k = without(v);
    if (trivial(exp, logpow)) return k;
    auto it = std::find_if(k.f_.begin(), k.f_.end(), [v](const Factor &f) { return f.var > v; });
    k.f_.insert(it, Factor{v, std::move(exp), logpow});
    return k;
}

bool MonoKey::only_carriers() const
{
    return std::all_of(f_.begin(), f_.end(), [](const Factor &f) { return is_carrier(f.var); });
}

MonoKey operator*(const MonoKey &a, const MonoKey &b)
{
    MonoKey r;
    r.f_.reserve(a.f_.size() + b.f_.size());
    auto i = a.f_.begin(), j = b.f_.begin();
    while (i != a.f_.end() || j != b.f_.end()) {
        if (j == b.f_.end() || (i != a.f_.end() && i->var < j->var)) {
            r.f_.push_back(*i++);
        } else if (i == a.f_.end() || j->var < i->var) {
            r.f_.push_back(*j++);
        } else {
            ExactComplex e = i->exp + j->exp;
            unsigned k = i->logpow + j->logpow;
            if (!trivial(e, k)) r.f_.push_back(Factor{i->var, std::move(e), k});
            ++i;
            ++j;
        }
    }
    return r;
}

std::strong_ordering operator<=>(const MonoKey &a, const MonoKey &b)
{
    return std::lexicographical_compare_three_way(a.f_.begin(), a.f_.end(), b.f_.begin(),
                                                  b.f_.end());
}

std::string MonoKey::str() const
{
    if (f_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto &f : f_) {
        if (!first) os << "*";
        first = false;
        bool wrote = false;
        if (!f.exp.is_zero()) {
            os << var_name(f.var);
            if (!f.exp.is_one()) os << "^" << f.exp.str();
            wrote = true;
        }
        if (f.logpow > 0) {
            if (wrote) os << "*";
            os << "log(" << var_name(f.var) << ")";
            if (f.logpow > 1) os << "^" << f.logpow;
        }
    }
    return os.str();
}

LogSeries LogSeries::constant(const ExactComplex &c, TruncationWindow w)
{
    LogSeries s(std::move(w));
    s.add_term(MonoKey(), c);
    return s;
}

LogSeries LogSeries::monomial(Var v, const ExactComplex &exp, unsigned logpow,
                              const ExactComplex &c, TruncationWindow w)
{
    LogSeries s(std::move(w));
    s.add_term(MonoKey::single(v, exp, logpow), c);
    return s;
}

LogSeries LogSeries::term(const MonoKey &k, const ExactComplex &c, TruncationWindow w)
{
    LogSeries s(std::move(w));
    s.add_term(k, c);
    return s;
}

ExactComplex LogSeries::coefficient(const MonoKey &k) const
{
    auto it = terms_.find(k);
    return it == terms_.end() ? ExactComplex() : it->second;
}

bool LogSeries::only_carriers() const
{
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto &t) { return t.first.only_carriers(); });
}

bool LogSeries::has_var(Var v) const
{
    return std::any_of(terms_.begin(), terms_.end(),
                       [v](const auto &t) { return t.first.find(v) != nullptr; });
}

void LogSeries::add_term(const MonoKey &k, const ExactComplex &c)
{
    if (c.is_zero()) return;
    const MonoKey *key = &k;
    MonoKey reduced;
    ExactComplex coeff = c;
    if (const Factor *uf = k.find(Var::u)) {
        if (!uf->exp.is_real()) throw std::domain_error("u exponent must be real");
        Rational fl = floor(uf->exp.re());
        if (fl != 0) {
            if (mpz_odd_p(fl.get_num_mpz_t())) coeff = -coeff;
            reduced = k.with(Var::u, ExactComplex(uf->exp.re() - fl), uf->logpow);
            key = &reduced;
        }
    }
    for (const auto &f : key->factors())
        if (!window_.admits(f.var, f.exp, f.logpow)) return;
    auto [it, inserted] = terms_.try_emplace(*key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LogSeries LogSeries::rewindow(const TruncationWindow &w) const
{
    LogSeries r(w);
    for (const auto &[k, c] : terms_) r.add_term(k, c);
    return r;
}

LogSeries LogSeries::scaled(const ExactComplex &c) const
{
    LogSeries r(window_);
    if (c.is_zero()) return r;
    for (const auto &[k, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), k, v * c);
    return r;
}

namespace {

const TruncationWindow &common_window(const LogSeries &a, const LogSeries &b)
{
    if (!a.window().bounded) return b.window();
    if (!b.window().bounded) return a.window();
    if (!(a.window() == b.window())) throw std::invalid_argument("series window mismatch");
    return a.window();
}

} // namespace

LogSeries &LogSeries::operator+=(const LogSeries &o)
{
    const TruncationWindow w = common_window(*this, o);
    if (!(w == window_)) *this = rewindow(w);
    for (const auto &[k, c] : o.terms_) add_term(k, c);
    return *this;
}

LogSeries &LogSeries::operator-=(const LogSeries &o)
{
    const TruncationWindow w = common_window(*this, o);
    if (!(w == window_)) *this = rewindow(w);
    for (const auto &[k, c] : o.terms_) add_term(k, -c);
    return *this;
}

LogSeries operator*(const LogSeries &a, const LogSeries &b)
{
    LogSeries r(common_window(a, b));
    for (const auto &[ka, ca] : a.terms_)
        for (const auto &[kb, cb] : b.terms_) r.add_term(ka * kb, ca * cb);
    return r;
}

std::string LogSeries::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (!k.empty()) os << "*" << k.str();
    }
    return os.str();
}

LogSeries series_add(const LogSeries &a, const LogSeries &b) { return a + b; }
LogSeries series_mul(const LogSeries &a, const LogSeries &b) { return a * b; }

LogSeries monomial_power(const LogSeries &m, long e)
{
    if (e == 0) return LogSeries::constant(ExactComplex(1), m.window());
    if (m.size() != 1) {
        if (e > 0) {
            LogSeries r = m;
            for (long i = 1; i < e; ++i) r = r * m;
            return r;
        }
        throw std::domain_error("negative power of a non-monomial series");
    }
    const auto &[k, c] = *m.terms().begin();
    MonoKey key;
    for (const auto &f : k.factors()) {
        if (f.logpow > 0 && e < 0) throw std::domain_error("negative power of a log term");
        key = key * MonoKey::single(f.var, f.exp * ExactComplex(e),
                                    f.logpow * static_cast<unsigned>(e > 0 ? e : 0));
    }
    return LogSeries::term(key, pow(c, e), m.window());
}

namespace {

// (first + sign*second)^n with second to non-negative powers only
LogSeries expand_binomial(const SecondArg &first, const SecondArg &second, int sign,
                          const ExactComplex &n, const TruncationWindow &w)
{
    const bool finite = n.is_integer() && sgn(n.re()) >= 0;
    const bool first_var = std::holds_alternative<Var>(first);
    const bool second_var = std::holds_alternative<Var>(second);
    if (!finite && !w.bounded)
        throw std::invalid_argument("binom_expand: infinite expansion needs a bounded window");
    if (!finite && !(first_var && !is_carrier(std::get<Var>(first))) &&
        !(second_var && !is_carrier(std::get<Var>(second))))
        throw std::invalid_argument("binom_expand: infinite expansion with no truncated variable");
    if (!first_var && !n.is_integer())
        throw std::invalid_argument("binom_expand: scalar base needs an integral exponent");

    LogSeries out(w);
    const long limit = finite ? to_long(n.re()) : -1;
    for (long i = 0;; ++i) {
        if (finite && i > limit) break;
        ExactComplex e = n - ExactComplex(i);
        LogSeries a_part, b_part;
        if (first_var) {
            Var v = std::get<Var>(first);
            if (!is_carrier(v) && w.bounded) {
                if (e.re() < w.exponent_lo) break;
                if (e.re() > w.exponent_hi) continue;
            }
            a_part = LogSeries::monomial(v, e);
        } else {
            a_part = monomial_power(std::get<LogSeries>(first), to_long(e.re()));
        }
        if (second_var) {
            Var v = std::get<Var>(second);
            if (!is_carrier(v) && w.bounded) {
                if (Rational(i) > w.exponent_hi) break;
                if (Rational(i) < w.exponent_lo) continue;
            }
            b_part = LogSeries::monomial(v, ExactComplex(i));
        } else {
            b_part = monomial_power(std::get<LogSeries>(second), i);
        }
        ExactComplex c = binomial(n, static_cast<unsigned>(i));
        if (sign < 0 && (i % 2)) c = -c;
        out += (a_part * b_part).scaled(c).rewindow(w);
    }
    return out;
}

void require_nonzero(const LogSeries &z)
{
    if (z.is_zero()) throw std::invalid_argument("delta_expand: z = 0");
}

} // namespace

LogSeries binom_expand(Var a, const SecondArg &b, int sign, const ExactComplex &n,
                       const TruncationWindow &w)
{
    return expand_binomial(SecondArg(a), b, sign, n, w);
}

std::string_view pattern_name(DeltaPattern p)
{
    switch (p) {
    case DeltaPattern::x1_minus_z: return "x0^-1 delta((x1-z)/x0)";
    case DeltaPattern::x1_minus_x0: return "z^-1 delta((x1-x0)/z)";
    case DeltaPattern::z_minus_x1: return "x0^-1 delta((z-x1)/(-x0))";
    }
    return "?";
}

LogSeries delta_expand(DeltaPattern p, const LogSeries &z, const TruncationWindow &w)
{
    require_nonzero(z);
    if (!w.bounded) throw std::invalid_argument("delta_expand: window must be bounded");
    if (!z.only_carriers()) throw std::invalid_argument("delta_expand: z must be a scalar");
    LogSeries out(w);
    const Rational &lo = w.exponent_lo;
    const Rational &hi = w.exponent_hi;
    auto ceil_of = [](const Rational &q) { return to_long(Rational(-floor(Rational(-q)))); };
    auto floor_of = [](const Rational &q) { return to_long(floor(q)); };

    switch (p) {
    case DeltaPattern::x1_minus_z:
    case DeltaPattern::z_minus_x1: {
        const long n_lo = ceil_of(Rational(-hi - 1));
        const long n_hi = floor_of(Rational(-lo - 1));
        for (long n = n_lo; n <= n_hi; ++n) {
            LogSeries x0p = LogSeries::monomial(Var::x0, ExactComplex(-n - 1));
            LogSeries body = (p == DeltaPattern::x1_minus_z)
                                 ? expand_binomial(Var::x1, z, -1, ExactComplex(n), w)
                                 : expand_binomial(z, Var::x1, -1, ExactComplex(n), w);
            if (p == DeltaPattern::z_minus_x1 && (n % 2)) body = -body;
            out += (x0p * body).rewindow(w);
        }
        break;
    }
    case DeltaPattern::x1_minus_x0: {
        const long n_lo = ceil_of(lo);
        const long n_hi = floor_of(Rational(2 * hi));
        for (long n = n_lo; n <= n_hi; ++n) {
            LogSeries zp = monomial_power(z, -n - 1);
            out += (zp * expand_binomial(Var::x1, Var::x0, -1, ExactComplex(n), w)).rewindow(w);
        }
        break;
    }
    }
    return out;
}

LogSeries residue(const LogSeries &a, Var v)
{
    LogSeries r(a.window());
    const ExactComplex minus_one(-1);
    for (const auto &[k, c] : a.terms()) {
        const Factor *f = k.find(v);
        if (f && f->logpow == 0 && f->exp == minus_one) r.add_term(k.without(v), c);
    }
    return r;
}

LogSeries ddx(const LogSeries &a, Var v)
{
    LogSeries r(is_carrier(v) ? a.window() : a.window().shifted(Rational(-1)));
    for (const auto &[k, c] : a.terms()) {
        const Factor *f = k.find(v);
        if (!f) continue;
        ExactComplex e = f->exp - ExactComplex(1);
        if (!f->exp.is_zero()) r.add_term(k.with(v, e, f->logpow), c * f->exp);
        if (f->logpow > 0)
            r.add_term(k.with(v, e, f->logpow - 1), c * ExactComplex(static_cast<long>(f->logpow)));
    }
    return r;
}

BranchPoint::BranchPoint(NumericComplex z_, long p_) : z(z_), p(p_)
{
    if (z == NumericComplex(0.0, 0.0)) throw std::invalid_argument("branch point z = 0");
}

BranchPoint::BranchPoint(const ExactComplex &z_, long p_) : z(z_.numeric()), p(p_), exact(z_)
{
    if (z_.is_zero()) throw std::invalid_argument("branch point z = 0");
}

NumericComplex branch_value(NumericComplex z, long p)
{
    if (z == NumericComplex(0.0, 0.0)) throw std::invalid_argument("branch_value: z = 0");
    double arg = std::atan2(z.imag(), z.real());
    if (arg < 0) arg += 2 * std::numbers::pi;
    return {std::log(std::abs(z)), arg + 2 * std::numbers::pi * static_cast<double>(p)};
}

NumericComplex branch_value(const BranchPoint &bp) { return branch_value(bp.z, bp.p); }

std::map<MonoKey, NumericComplex> substitute_exp(const LogSeries &a, Var v, NumericComplex zeta)
{
    std::map<MonoKey, NumericComplex> out;
    for (const auto &[k, c] : a.terms()) {
        NumericComplex val = c.numeric();
        if (const Factor *f = k.find(v)) val *= std::exp(zeta * f->exp.numeric()) * npow(zeta, f->logpow);
        out[k.without(v)] += val;
    }
    return out;
}

NumericComplex evaluate(const Scalar &s, const BranchPoint &bp)
{
    const NumericComplex zy = -branch_value(bp);
    NumericComplex total(0.0, 0.0);
    for (const auto &[k, c] : s.terms()) {
        NumericComplex val = c.numeric();
        for (const auto &f : k.factors()) {
            if (f.var == Var::y) {
                val *= std::exp(zy * f.exp.numeric()) * npow(zy, f.logpow);
            } else if (f.var == Var::u) {
                val *= std::exp(kIPi * f.exp.numeric()) * npow(kIPi, f.logpow);
            } else {
                throw std::invalid_argument("evaluate: series has formal variable " +
                                            std::string(var_name(f.var)));
            }
        }
        total += val;
    }
    return total;
}

namespace {

// e^{i pi q} for q in (1/2)Z
std::optional<ExactComplex> exact_phase(const Rational &q)
{
    Rational twice = q * 2;
    if (!is_integer(twice)) return std::nullopt;
    mpz_class m = twice.get_num() % 4;
    if (m < 0) m += 4;
    switch (m.get_si()) {
    case 0: return ExactComplex(1);
    case 1: return imag_unit();
    case 2: return ExactComplex(-1);
    default: return -imag_unit();
    }
}

} // namespace

std::optional<ExactComplex> evaluate_exact(const Scalar &s, const BranchPoint &bp)
{
    if (!bp.exact || !bp.exact->is_real()) return std::nullopt;
    const Rational &z = bp.exact->re();
    const Rational mag = abs(z);
    const bool unit_circle = (mag == 1);
    const Rational theta(sgn(z) > 0 ? 0 : 1);
    const bool zero_log = (z == 1 && bp.p == 0);
    ExactComplex total;
    for (const auto &[k, c] : s.terms()) {
        ExactComplex val = c;
        bool vanishes = false;
        for (const auto &f : k.factors()) {
            if (f.var == Var::y) {
                if (f.logpow > 0) {
                    if (!zero_log) return std::nullopt;
                    vanishes = true;
                    break;
                }
                if (!f.exp.is_real()) return std::nullopt;
                const Rational &a = f.exp.re();
                if (!unit_circle) {
                    if (!is_integer(a)) return std::nullopt;
                    val *= pow(ExactComplex(mag), -to_long(a));
                }
                auto ph = exact_phase(Rational(-a * (theta + Rational(2 * bp.p))));
                if (!ph) return std::nullopt;
                val *= *ph;
            } else if (f.var == Var::u) {
                if (f.logpow > 0) return std::nullopt;
                auto ph = exact_phase(f.exp.re());
                if (!ph) return std::nullopt;
                val *= *ph;
            } else {
                return std::nullopt;
            }
        }
        if (!vanishes) total += val;
    }
    return total;
}

LogSeries rescale_var(const LogSeries &a, Var v, const Rational &s, const Rational &c)
{
    LogSeries r(a.window());
    for (const auto &[k, coeff] : a.terms()) {
        const Factor *f = k.find(v);
        if (!f) {
            r.add_term(k, coeff);
            continue;
        }
        if (v == Var::u && sgn(c) != 0) throw std::invalid_argument("rescale_var: u onto itself");
        ExactComplex ce = f->exp * ExactComplex(c);
        if (!ce.is_real()) throw std::domain_error("rescale_var: complex phase exponent");
        const unsigned k_log = f->logpow;
        for (unsigned j = 0; j <= k_log; ++j) {
            // C(k,j) s^{k-j} c^j (log v)^{k-j} (log u)^j
            ExactComplex w = binomial(ExactComplex(static_cast<long>(k_log)), j);
            w *= pow(ExactComplex(s), static_cast<long>(k_log - j));
            w *= pow(ExactComplex(c), static_cast<long>(j));
            if (w.is_zero()) continue;
            MonoKey nk = k.with(v, f->exp * ExactComplex(s), k_log - j);
            nk = nk * MonoKey::single(Var::u, ce, j);
            r.add_term(nk, coeff * w);
        }
    }
    return r;
}

FormalPower FormalPower::times(Var v, Rational c) const
{
    FormalPower t = *this;
    for (auto &[var, m] : t.parts)
        if (var == v) {
            m += c;
            return t;
        }
    t.parts.emplace_back(v, std::move(c));
    return t;
}

LogSeries FormalPower::power(const ExactComplex &a) const
{
    MonoKey k;
    for (const auto &[v, c] : parts) k = k * MonoKey::single(v, a * ExactComplex(c));
    return LogSeries::term(k, ExactComplex(1));
}

LogSeries FormalPower::log() const
{
    LogSeries r;
    for (const auto &[v, c] : parts) r.add_term(MonoKey::single(v, ExactComplex(), 1), ExactComplex(c));
    return r;
}

} // namespace logtensor

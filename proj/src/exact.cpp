#include <logtensor/exact.hpp>

#include <sstream>

namespace logtensor {

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto trim = [](std::string &t) {
        auto b = t.find_first_not_of(" \t");
        auto e = t.find_last_not_of(" \t");
        t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) throw std::invalid_argument("empty rational");
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    // decimal form, e.g. 0.25 or -1.5
    if (auto dot = s.find('.'); dot != std::string::npos) {
        if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational: " + s);
        bool neg = !s.empty() && s.front() == '-';
        std::string digits = s.substr(neg ? 1 : 0);
        dot = digits.find('.');
        std::string whole = digits.substr(0, dot);
        std::string frac = digits.substr(dot + 1);
        if (whole.empty()) whole = "0";
        for (char c : whole + frac)
            if (c < '0' || c > '9') throw std::invalid_argument("bad rational: " + s);
        mpz_class num(whole + frac);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0 || (s.find('/') != std::string::npos && s.back() == '/'))
        throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational &q) { return q.get_str(); }

Rational floor(const Rational &q)
{
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

long to_long(const Rational &q)
{
    if (!is_integer(q) || !q.get_num().fits_slong_p())
        throw std::domain_error("rational is not a machine integer: " + q.get_str());
    return q.get_num().get_si();
}

ExactComplex &ExactComplex::operator*=(const ExactComplex &o)
{
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

ExactComplex &ExactComplex::operator/=(const ExactComplex &o)
{
    if (o.is_zero()) throw std::domain_error("division by zero");
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    Rational d = o.re_ * o.re_ + o.im_ * o.im_;
    Rational r = (re_ * o.re_ + im_ * o.im_) / d;
    Rational i = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

std::string ExactComplex::str() const
{
    if (sgn(im_) == 0) return re_.get_str();
    std::ostringstream os;
    os << "(" << re_.get_str() << (sgn(im_) < 0 ? "-" : "+") << Rational(abs(im_)).get_str() << "i)";
    return os.str();
}

ExactComplex binomial(const ExactComplex &n, unsigned i)
{
    ExactComplex r(1);
    for (unsigned j = 0; j < i; ++j) {
        r *= (n - ExactComplex(static_cast<long>(j)));
        r /= ExactComplex(static_cast<long>(j + 1));
    }
    return r;
}

ExactComplex pow(const ExactComplex &base, long e)
{
    ExactComplex r(1);
    ExactComplex b = e < 0 ? ExactComplex(1) / base : base;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    while (k) {
        if (k & 1u) r *= b;
        b *= b;
        k >>= 1u;
    }
    return r;
}

Rational factorial(unsigned n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

} // namespace logtensor

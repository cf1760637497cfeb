#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace logtensor {

using Rational = mpq_class;
using NumericComplex = std::complex<double>;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational &q);

inline Rational rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational &q) { return q.get_den() == 1; }

// floor for rationals, exact
Rational floor(const Rational &q);

long to_long(const Rational &q);

/// Gaussian rational. Used for coefficients and for exponents n in x^n.
class ExactComplex {
public:
    ExactComplex() = default;
    ExactComplex(Rational re) : re_(std::move(re)) {}
    ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    ExactComplex(long re) : re_(re) {}

    const Rational &re() const { return re_; }
    const Rational &im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_integer() const { return is_real() && logtensor::is_integer(re_); }

    ExactComplex conj() const { return {re_, -im_}; }
    NumericComplex numeric() const { return {re_.get_d(), im_.get_d()}; }

    ExactComplex &operator+=(const ExactComplex &o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ExactComplex &operator-=(const ExactComplex &o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ExactComplex &operator*=(const ExactComplex &o);
    ExactComplex &operator/=(const ExactComplex &o);

    friend ExactComplex operator+(ExactComplex a, const ExactComplex &b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex &b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex &b) { return a *= b; }
    friend ExactComplex operator/(ExactComplex a, const ExactComplex &b) { return a /= b; }
    friend ExactComplex operator-(const ExactComplex &a) { return {-a.re_, -a.im_}; }

    friend bool operator==(const ExactComplex &a, const ExactComplex &b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    // lexicographic on (re, im); this is the canonical key order
    friend std::strong_ordering operator<=>(const ExactComplex &a, const ExactComplex &b)
    {
        int c = cmp(a.re_, b.re_);
        if (c == 0) c = cmp(a.im_, b.im_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const;

private:
    Rational re_{0};
    Rational im_{0};
};

inline const ExactComplex &imag_unit()
{
    static const ExactComplex i{Rational(0), Rational(1)};
    return i;
}

/// Generalized binomial C(n, i) = n(n-1)...(n-i+1)/i!.
ExactComplex binomial(const ExactComplex &n, unsigned i);

/// Exact integer power (negative powers need a nonzero base).
ExactComplex pow(const ExactComplex &base, long e);

Rational factorial(unsigned n);

} // namespace logtensor

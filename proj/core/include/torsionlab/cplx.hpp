#ifndef TORSIONLAB_CPLX_HPP
#define TORSIONLAB_CPLX_HPP

#include <string>

#include "torsionlab/real.hpp"

namespace torsionlab {

// Arbitrary-precision complex number: a pair of Reals; precision
// tracking is inherited from Real.
class Cplx {
public:
    Real re, im;

    Cplx() = default;
    explicit Cplx(mpfr_prec_t bits) : re(bits), im(bits) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    static Cplx from_long(long r, long i, mpfr_prec_t bits) {
        return {Real::from_long(r, bits), Real::from_long(i, bits)};
    }
    static Cplx from_real(Real r) {
        Real z(r.bits());
        return {std::move(r), std::move(z)};
    }
    static Cplx from_rational(const Rational &q, mpfr_prec_t bits) {
        return {Real::from_rational(q, bits), Real(bits)};
    }
    static Cplx i(mpfr_prec_t bits) { return from_long(0, 1, bits); }

    mpfr_prec_t bits() const { return std::min(re.bits(), im.bits()); }
    Cplx at_bits(mpfr_prec_t b) const { return {re.at_bits(b), im.at_bits(b)}; }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend Cplx operator+(const Cplx &a, const Cplx &b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx &a, const Cplx &b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator*(const Cplx &a, const Cplx &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cplx operator*(const Real &s, const Cplx &b) { return {s * b.re, s * b.im}; }
    friend Cplx operator/(const Cplx &a, const Cplx &b);
    Cplx operator-() const { return {-re, -im}; }
    Cplx &operator+=(const Cplx &b) { re += b.re; im += b.im; return *this; }
    Cplx &operator-=(const Cplx &b) { re -= b.re; im -= b.im; return *this; }
    Cplx &operator*=(const Cplx &b) { *this = *this * b; return *this; }
    Cplx &operator/=(const Cplx &b) { *this = *this / b; return *this; }

    friend Cplx conj(const Cplx &a) { return {a.re, -a.im}; }
    friend Real abs(const Cplx &a) { return hypot(a.re, a.im); }
    friend Cplx sqrt(const Cplx &a);      // principal branch
    friend Cplx exp(const Cplx &a);
    friend Cplx log(const Cplx &a);       // principal branch
    friend Cplx sin(const Cplx &a);
    friend Cplx cos(const Cplx &a);
    friend Cplx inv(const Cplx &a);
    friend Cplx mul_2si(const Cplx &a, long e) { return {mul_2si(a.re, e), mul_2si(a.im, e)}; }
    friend Cplx mul_si(const Cplx &a, long k) { return {mul_si(a.re, k), mul_si(a.im, k)}; }
    friend Cplx div_si(const Cplx &a, long k) { return {div_si(a.re, k), div_si(a.im, k)}; }

    Cplx pow_long(long e) const;

    std::string str(long digits = -1) const;
};

// namespace-scope declarations so qualified and template code can name
// the friend operations
Cplx conj(const Cplx &a);
Real abs(const Cplx &a);
Cplx sqrt(const Cplx &a);
Cplx exp(const Cplx &a);
Cplx log(const Cplx &a);
Cplx sin(const Cplx &a);
Cplx cos(const Cplx &a);
Cplx inv(const Cplx &a);
Cplx mul_2si(const Cplx &a, long e);
Cplx mul_si(const Cplx &a, long k);
Cplx div_si(const Cplx &a, long k);

// Parses "re", "re+im*i", "re-im*i", "im*i" style decimal strings.
Cplx parse_cplx(const std::string &text, mpfr_prec_t bits);

} // namespace torsionlab

#endif

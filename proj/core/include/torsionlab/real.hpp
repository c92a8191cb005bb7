#ifndef TORSIONLAB_REAL_HPP
#define TORSIONLAB_REAL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "torsionlab/rational.hpp"

namespace torsionlab {

// Decimal digits <-> mantissa bits. A small guard is added so that the
// requested decimal accuracy survives rounding at the edges.
inline mpfr_prec_t bits_for_digits(long digits) {
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 16);
}
inline long digits_for_bits(mpfr_prec_t bits) {
    return static_cast<long>((bits - 16) / 3.3219280948873626);
}

// Arbitrary-precision real backed by one mpfr_t. Every value carries its
// own precision; binary operations produce results at the minimum of the
// operand precisions (the contract APComplex inherits).
class Real {
public:
    Real();                       // zero at the 15-digit floor
    explicit Real(mpfr_prec_t bits);
    Real(const Real &o);
    Real(Real &&o) noexcept;
    Real &operator=(const Real &o);
    Real &operator=(Real &&o) noexcept;
    ~Real();

    static Real from_long(long v, mpfr_prec_t bits);
    static Real from_double(double v, mpfr_prec_t bits);
    static Real from_rational(const Rational &q, mpfr_prec_t bits);
    static Real from_string(const std::string &s, mpfr_prec_t bits);
    static Real pi(mpfr_prec_t bits);

    mpfr_prec_t bits() const { return mpfr_get_prec(m_v); }
    mpfr_ptr raw() { return m_v; }
    mpfr_srcptr raw() const { return m_v; }

    // Same value re-homed at another working precision (the input is
    // treated as exact when extending).
    Real at_bits(mpfr_prec_t bits) const;

    int sign() const { return mpfr_sgn(m_v); }
    bool is_zero() const { return mpfr_zero_p(m_v) != 0; }
    bool is_finite() const { return mpfr_number_p(m_v) != 0; }

    double to_double() const { return mpfr_get_d(m_v, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(m_v, MPFR_RNDN); }
    // Exact conversion (the float is a dyadic rational).
    Rational to_rational() const;
    BigInt round_to_integer() const;
    std::string str(long digits = -1) const;

    friend Real operator+(const Real &a, const Real &b);
    friend Real operator-(const Real &a, const Real &b);
    friend Real operator*(const Real &a, const Real &b);
    friend Real operator/(const Real &a, const Real &b);
    Real operator-() const;
    Real &operator+=(const Real &b) { *this = *this + b; return *this; }
    Real &operator-=(const Real &b) { *this = *this - b; return *this; }
    Real &operator*=(const Real &b) { *this = *this * b; return *this; }
    Real &operator/=(const Real &b) { *this = *this / b; return *this; }

    friend int cmp(const Real &a, const Real &b) { return mpfr_cmp(a.m_v, b.m_v); }
    friend bool operator<(const Real &a, const Real &b) { return cmp(a, b) < 0; }
    friend bool operator>(const Real &a, const Real &b) { return cmp(a, b) > 0; }
    friend bool operator<=(const Real &a, const Real &b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const Real &a, const Real &b) { return cmp(a, b) >= 0; }

    friend Real abs(const Real &a);
    friend Real sqrt(const Real &a);   // requires a >= 0
    friend Real exp(const Real &a);
    friend Real log(const Real &a);    // requires a > 0
    friend Real sin(const Real &a);
    friend Real cos(const Real &a);
    friend Real sinh(const Real &a);
    friend Real cosh(const Real &a);
    friend Real atan2(const Real &y, const Real &x);
    friend Real hypot(const Real &x, const Real &y);
    friend Real floor(const Real &a);
    friend Real round(const Real &a);
    friend Real pow_si(const Real &a, long e);
    friend Real mul_2si(const Real &a, long e);  // a * 2^e, exact
    friend Real mul_si(const Real &a, long k);
    friend Real div_si(const Real &a, long k);

    // 10^e at this value's precision; the workhorse for tolerances.
    static Real pow10(long e, mpfr_prec_t bits);

private:
    mpfr_t m_v;
};

Real min(const Real &a, const Real &b);
Real max(const Real &a, const Real &b);

} // namespace torsionlab

#endif

#include "torsionlab/real.hpp"

#include <algorithm>

namespace torsionlab {

namespace {
constexpr mpfr_prec_t k_floor_bits = 64; // ~ 15 digits, the precision floor
mpfr_prec_t clamp_bits(mpfr_prec_t b) { return std::max(b, k_floor_bits); }
} // namespace

Real::Real() { mpfr_init2(m_v, k_floor_bits); mpfr_set_zero(m_v, 1); }

Real::Real(mpfr_prec_t bits) {
    mpfr_init2(m_v, clamp_bits(bits));
    mpfr_set_zero(m_v, 1);
}

Real::Real(const Real &o) {
    mpfr_init2(m_v, mpfr_get_prec(o.m_v));
    mpfr_set(m_v, o.m_v, MPFR_RNDN);
}

Real::Real(Real &&o) noexcept {
    mpfr_init2(m_v, k_floor_bits);
    mpfr_swap(m_v, o.m_v);
}

Real &Real::operator=(const Real &o) {
    if (this != &o) {
        mpfr_set_prec(m_v, mpfr_get_prec(o.m_v));
        mpfr_set(m_v, o.m_v, MPFR_RNDN);
    }
    return *this;
}

Real &Real::operator=(Real &&o) noexcept {
    if (this != &o) mpfr_swap(m_v, o.m_v);
    return *this;
}

Real::~Real() { mpfr_clear(m_v); }

Real Real::from_long(long v, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.m_v, v, MPFR_RNDN);
    return r;
}

Real Real::from_double(double v, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_d(r.m_v, v, MPFR_RNDN);
    return r;
}

Real Real::from_rational(const Rational &q, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_q(r.m_v, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::from_string(const std::string &s, mpfr_prec_t bits) {
    Real r(bits);
    if (mpfr_set_str(r.m_v, s.c_str(), 10, MPFR_RNDN) != 0)
        throw UsageError("cannot parse real number: " + s);
    return r;
}

Real Real::pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.m_v, MPFR_RNDN);
    return r;
}

Real Real::at_bits(mpfr_prec_t bits) const {
    Real r(bits);
    mpfr_set(r.m_v, m_v, MPFR_RNDN);
    return r;
}

Rational Real::to_rational() const {
    if (!is_finite()) throw InternalCheckFailed("to_rational on non-finite value");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), m_v);
    return q;
}

BigInt Real::round_to_integer() const {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(m_v));
    mpfr_round(t, m_v);
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
}

std::string Real::str(long digits) const {
    if (digits < 0) digits = digits_for_bits(bits());
    if (digits < 2) digits = 2;
    mpfr_exp_t e;
    char *s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), m_v, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string dig = neg ? mant.substr(1) : mant;
    std::string out = std::string(neg ? "-" : "") + (dig.empty() ? "0" : dig.substr(0, 1)) +
                      (dig.size() > 1 ? "." + dig.substr(1) : "") + "e" + std::to_string(e - 1);
    if (mpfr_zero_p(m_v)) return "0";
    return out;
}

#define TL_BINOP(op, fn)                                                      \
    Real operator op(const Real &a, const Real &b) {                         \
        Real r(std::min(a.bits(), b.bits()));                                 \
        fn(r.m_v, a.m_v, b.m_v, MPFR_RNDN);                                   \
        return r;                                                             \
    }
TL_BINOP(+, mpfr_add)
TL_BINOP(-, mpfr_sub)
TL_BINOP(*, mpfr_mul)
TL_BINOP(/, mpfr_div)
#undef TL_BINOP

Real Real::operator-() const {
    Real r(bits());
    mpfr_neg(r.m_v, m_v, MPFR_RNDN);
    return r;
}

#define TL_UNOP(name, fn)                                                     \
    Real name(const Real &a) {                                                \
        Real r(a.bits());                                                     \
        fn(r.m_v, a.m_v, MPFR_RNDN);                                          \
        return r;                                                             \
    }
TL_UNOP(abs, mpfr_abs)
TL_UNOP(sqrt, mpfr_sqrt)
TL_UNOP(exp, mpfr_exp)
TL_UNOP(log, mpfr_log)
TL_UNOP(sin, mpfr_sin)
TL_UNOP(cos, mpfr_cos)
TL_UNOP(sinh, mpfr_sinh)
TL_UNOP(cosh, mpfr_cosh)
#undef TL_UNOP

Real floor(const Real &a) {
    Real r(a.bits());
    mpfr_floor(r.m_v, a.m_v);
    return r;
}

Real round(const Real &a) {
    Real r(a.bits());
    mpfr_round(r.m_v, a.m_v);
    return r;
}

Real atan2(const Real &y, const Real &x) {
    Real r(std::min(y.bits(), x.bits()));
    mpfr_atan2(r.m_v, y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real hypot(const Real &x, const Real &y) {
    Real r(std::min(y.bits(), x.bits()));
    mpfr_hypot(r.m_v, x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Real pow_si(const Real &a, long e) {
    Real r(a.bits());
    mpfr_pow_si(r.m_v, a.raw(), e, MPFR_RNDN);
    return r;
}

Real mul_2si(const Real &a, long e) {
    Real r(a.bits());
    mpfr_mul_2si(r.m_v, a.raw(), e, MPFR_RNDN);
    return r;
}

Real mul_si(const Real &a, long k) {
    Real r(a.bits());
    mpfr_mul_si(r.m_v, a.raw(), k, MPFR_RNDN);
    return r;
}

Real div_si(const Real &a, long k) {
    Real r(a.bits());
    mpfr_div_si(r.m_v, a.raw(), k, MPFR_RNDN);
    return r;
}

Real Real::pow10(long e, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.m_v, 10, MPFR_RNDN);
    mpfr_pow_si(r.m_v, r.m_v, e, MPFR_RNDN);
    return r;
}

Real min(const Real &a, const Real &b) { return cmp(a, b) <= 0 ? a : b; }
Real max(const Real &a, const Real &b) { return cmp(a, b) >= 0 ? a : b; }

Rational parse_rational(const std::string &text) {
    std::string t;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw UsageError("empty rational literal");
    try {
        Rational q(t);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument &) {
        throw UsageError("cannot parse rational: " + text);
    }
}

} // namespace torsionlab

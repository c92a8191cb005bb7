#ifndef TORSIONLAB_FIELDS_HPP
#define TORSIONLAB_FIELDS_HPP

#include <optional>

#include "torsionlab/cplx.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

// Approximate-field plug-in for the generic algorithms; zero tests are
// exact bit-level tests, so callers decide tolerances themselves.
template <>
struct FieldTraits<Cplx> {
    static constexpr bool exact = false;
    static Cplx zero(const Cplx &s) { return Cplx(s.bits()); }
    static Cplx one(const Cplx &s) { return Cplx::from_long(1, 0, s.bits()); }
    static bool is_zero(const Cplx &x) { return x.is_zero(); }
    static std::optional<Cplx> sqrt(const Cplx &x) { return torsionlab::sqrt(x); }
    static std::size_t bits(const Cplx &) { return 0; }
};

// Field of fractions of Q[lambda]; just enough of Q(lambda) to run the
// quartic-to-Weierstrass transformation symbolically over the base.
template <class F>
class RatFunc {
public:
    explicit RatFunc(Poly<F> n)
        : m_num(std::move(n)), m_den(Poly<F>::one(m_num.sample())) {}
    RatFunc(Poly<F> n, Poly<F> d) : m_num(std::move(n)), m_den(std::move(d)) {
        if (m_den.is_zero()) throw DivideByZeroPoly("rational function with zero denominator");
        normalize();
    }

    const Poly<F> &num() const { return m_num; }
    const Poly<F> &den() const { return m_den; }
    bool is_zero() const { return m_num.is_zero(); }
    bool is_polynomial() const { return m_den.degree() == 0; }

    friend RatFunc operator+(const RatFunc &a, const RatFunc &b) {
        return {a.m_num * b.m_den + b.m_num * a.m_den, a.m_den * b.m_den};
    }
    friend RatFunc operator-(const RatFunc &a, const RatFunc &b) {
        return {a.m_num * b.m_den - b.m_num * a.m_den, a.m_den * b.m_den};
    }
    friend RatFunc operator*(const RatFunc &a, const RatFunc &b) {
        return {a.m_num * b.m_num, a.m_den * b.m_den};
    }
    friend RatFunc operator/(const RatFunc &a, const RatFunc &b) {
        if (b.is_zero()) throw DivideByZeroPoly("division by the zero rational function");
        return {a.m_num * b.m_den, a.m_den * b.m_num};
    }
    RatFunc operator-() const { return {-m_num, m_den}; }
    friend bool operator==(const RatFunc &a, const RatFunc &b) { return (a - b).is_zero(); }

    // Specialization lambda -> value, exact in the coefficient field.
    F operator()(const F &x) const {
        F d = m_den(x);
        if (FieldTraits<F>::is_zero(d))
            throw DenominatorZero("specialization hits a pole of the rational function");
        return m_num(x) / d;
    }

private:
    Poly<F> m_num, m_den;
    void normalize() {
        if (m_num.is_zero()) {
            m_den = Poly<F>::one(m_num.sample());
            return;
        }
        Poly<F> g = poly_gcd(m_num, m_den);
        if (g.degree() > 0) {
            m_num = poly_quo(m_num, g);
            m_den = poly_quo(m_den, g);
        }
        const F inv_lc = FieldTraits<F>::one(m_num.sample()) / m_den.lc();
        m_num = inv_lc * m_num;
        m_den = inv_lc * m_den;
    }
};

template <class F>
struct FieldTraits<RatFunc<F>> {
    static constexpr bool exact = true;
    static RatFunc<F> zero(const RatFunc<F> &s) {
        return RatFunc<F>(Poly<F>::zero(s.num().sample()));
    }
    static RatFunc<F> one(const RatFunc<F> &s) {
        return RatFunc<F>(Poly<F>::one(s.num().sample()));
    }
    static bool is_zero(const RatFunc<F> &x) { return x.is_zero(); }
    // Only constants are rooted; that covers every monic case this
    // project feeds through the symbolic route.
    static std::optional<RatFunc<F>> sqrt(const RatFunc<F> &x) {
        if (x.num().degree() > 0 || x.den().degree() > 0) return std::nullopt;
        auto r = FieldTraits<F>::sqrt(x.num().constant() / x.den().constant());
        if (!r) return std::nullopt;
        return RatFunc<F>(Poly<F>(*r));
    }
    static std::size_t bits(const RatFunc<F> &x) {
        return std::max(x.num().max_coeff_bits(), x.den().max_coeff_bits());
    }
};

} // namespace torsionlab

#endif

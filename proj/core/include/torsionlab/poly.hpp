#ifndef TORSIONLAB_POLY_HPP
#define TORSIONLAB_POLY_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/rational.hpp"

namespace torsionlab {

// Field plug-in points for the generic polynomial/curve algorithms.
// Specializations exist for Rational, NFElem and RatFunc.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero(const Rational &) { return Rational(0); }
    static Rational one(const Rational &) { return Rational(1); }
    static bool is_zero(const Rational &x) { return sgn(x) == 0; }
    static std::optional<Rational> sqrt(const Rational &x) { return rat_sqrt(x); }
    static std::size_t bits(const Rational &x) { return rat_bits(x); }
};

// Dense univariate polynomial over an exact field, lowest degree first.
// The coefficient vector is never empty; the zero polynomial is {0}, so a
// sample field element is always available for zero/one construction.
template <class F>
class Poly {
public:
    explicit Poly(F zero_coeff) : m_c{std::move(zero_coeff)} { trim(); }

    static Poly zero(const F &sample) { return Poly(FieldTraits<F>::zero(sample)); }
    static Poly one(const F &sample) { return Poly(FieldTraits<F>::one(sample)); }
    static Poly from_coeffs(std::vector<F> c) {
        if (c.empty()) throw InternalCheckFailed("Poly::from_coeffs on empty vector");
        Poly p(c.front());
        p.m_c = std::move(c);
        p.trim();
        return p;
    }
    // x^k with coefficient c.
    static Poly monomial(F c, std::size_t k) {
        std::vector<F> v;
        v.reserve(k + 1);
        for (std::size_t i = 0; i < k; ++i) v.push_back(FieldTraits<F>::zero(c));
        v.push_back(std::move(c));
        return from_coeffs(std::move(v));
    }

    const std::vector<F> &coeffs() const { return m_c; }
    std::size_t size() const { return m_c.size(); }
    // deg(0) = -1 by convention.
    long degree() const { return is_zero() ? -1 : static_cast<long>(m_c.size()) - 1; }
    bool is_zero() const { return m_c.size() == 1 && FieldTraits<F>::is_zero(m_c[0]); }
    bool is_constant() const { return m_c.size() == 1; }
    const F &lc() const { return m_c.back(); }
    const F &constant() const { return m_c.front(); }
    F at(std::size_t i) const {
        return i < m_c.size() ? m_c[i] : FieldTraits<F>::zero(m_c[0]);
    }
    F sample() const { return FieldTraits<F>::zero(m_c[0]); }

    std::size_t max_coeff_bits() const {
        std::size_t b = 0;
        for (const F &x : m_c) b = std::max(b, FieldTraits<F>::bits(x));
        return b;
    }

    friend Poly operator+(const Poly &a, const Poly &b) {
        std::vector<F> r(std::max(a.m_c.size(), b.m_c.size()), a.sample());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) + b.at(i);
        return from_coeffs(std::move(r));
    }
    friend Poly operator-(const Poly &a, const Poly &b) {
        std::vector<F> r(std::max(a.m_c.size(), b.m_c.size()), a.sample());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) - b.at(i);
        return from_coeffs(std::move(r));
    }
    Poly operator-() const {
        std::vector<F> r = m_c;
        for (F &x : r) x = FieldTraits<F>::zero(x) - x;
        return from_coeffs(std::move(r));
    }
    friend Poly operator*(const Poly &a, const Poly &b) {
        if (a.is_zero() || b.is_zero()) return zero(a.m_c[0]);
        std::vector<F> r(a.m_c.size() + b.m_c.size() - 1, a.sample());
        for (std::size_t i = 0; i < a.m_c.size(); ++i) {
            if (FieldTraits<F>::is_zero(a.m_c[i])) continue;
            for (std::size_t j = 0; j < b.m_c.size(); ++j)
                r[i + j] = r[i + j] + a.m_c[i] * b.m_c[j];
        }
        return from_coeffs(std::move(r));
    }
    friend Poly operator*(const F &s, const Poly &a) {
        std::vector<F> r = a.m_c;
        for (F &x : r) x = s * x;
        return from_coeffs(std::move(r));
    }
    friend bool operator==(const Poly &a, const Poly &b) { return (a - b).is_zero(); }

    Poly derivative() const {
        if (m_c.size() == 1) return zero(m_c[0]);
        std::vector<F> r;
        r.reserve(m_c.size() - 1);
        F k = FieldTraits<F>::zero(m_c[0]);
        const F one = FieldTraits<F>::one(m_c[0]);
        for (std::size_t i = 1; i < m_c.size(); ++i) {
            k = k + one;
            r.push_back(k * m_c[i]);
        }
        return from_coeffs(std::move(r));
    }

    template <class T, class Map>
    T eval_map(const T &x, Map embed) const {
        T acc = embed(m_c.back());
        for (std::size_t i = m_c.size(); i-- > 1;) acc = acc * x + embed(m_c[i - 1]);
        return acc;
    }
    F operator()(const F &x) const {
        return eval_map(x, [](const F &c) { return c; });
    }

    // p(x + c), exact.
    Poly taylor_shift(const F &c) const {
        Poly res = zero(m_c[0]);
        Poly lin = from_coeffs({c, FieldTraits<F>::one(m_c[0])});
        for (std::size_t i = m_c.size(); i-- > 0;)
            res = res * lin + Poly(m_c[i]);
        return res;
    }

    Poly monic() const {
        if (is_zero()) throw DivideByZeroPoly("monic of zero polynomial");
        const F inv_lc = FieldTraits<F>::one(m_c[0]) / lc();
        return inv_lc * *this;
    }

private:
    std::vector<F> m_c;

    void trim() {
        while (m_c.size() > 1 && FieldTraits<F>::is_zero(m_c.back())) m_c.pop_back();
    }
};

// Exact Euclidean division: a = q*b + r with deg r < deg b.
template <class F>
std::pair<Poly<F>, Poly<F>> poly_divrem(const Poly<F> &a, const Poly<F> &b) {
    if (b.is_zero()) throw DivideByZeroPoly("polynomial division by zero");
    Poly<F> q = Poly<F>::zero(a.sample());
    std::vector<F> rem(a.coeffs());
    const long db = b.degree();
    while (static_cast<long>(rem.size()) - 1 >= db &&
           !(rem.size() == 1 && FieldTraits<F>::is_zero(rem[0]))) {
        while (rem.size() > 1 && FieldTraits<F>::is_zero(rem.back())) rem.pop_back();
        long dr = static_cast<long>(rem.size()) - 1;
        if (dr < db || (rem.size() == 1 && FieldTraits<F>::is_zero(rem[0]))) break;
        F c = rem.back() / b.lc();
        std::size_t shift = static_cast<std::size_t>(dr - db);
        for (std::size_t i = 0; i < b.coeffs().size(); ++i)
            rem[i + shift] = rem[i + shift] - c * b.coeffs()[i];
        q = q + Poly<F>::monomial(c, shift);
        rem.pop_back(); // leading term cancelled exactly
    }
    if (rem.empty()) rem.push_back(a.sample());
    return {q, Poly<F>::from_coeffs(std::move(rem))};
}

template <class F>
Poly<F> poly_quo(const Poly<F> &a, const Poly<F> &b) {
    return poly_divrem(a, b).first;
}

// Monic gcd.
template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

template <class F>
bool poly_is_squarefree(const Poly<F> &f) {
    if (f.degree() <= 1) return true;
    return poly_gcd(f, f.derivative()).degree() == 0;
}

// Squarefree part f / gcd(f, f').
template <class F>
Poly<F> poly_radical(const Poly<F> &f) {
    if (f.degree() <= 0) return f;
    Poly<F> g = poly_gcd(f, f.derivative());
    if (g.degree() <= 0) return f;
    return poly_quo(f, g);
}

// Polynomial part A of sqrt(D) at infinity: deg A = deg D / 2 and
// deg(D - A^2) <= deg D / 2 - 1, by descending undetermined coefficients.
template <class F>
Poly<F> poly_sqrt_floor(const Poly<F> &D) {
    const long d = D.degree();
    if (d < 2 || d % 2 != 0)
        throw OddDegree("poly_sqrt_floor needs even degree >= 2, got degree " +
                        std::to_string(d));
    auto s = FieldTraits<F>::sqrt(D.lc());
    if (!s)
        throw NonSquareLeadingCoeff("leading coefficient is not a square in the field");
    const std::size_t n = static_cast<std::size_t>(d) / 2;
    std::vector<F> a(n + 1, D.sample());
    a[n] = *s;
    const F two = FieldTraits<F>::one(a[n]) + FieldTraits<F>::one(a[n]);
    for (std::size_t k = 1; k <= n; ++k) {
        // match the coefficient of x^(2n-k); one pass over ordered pairs
        // (i, 2n-k-i) with both indices already determined
        F acc = D.at(2 * n - k);
        for (std::size_t i = n - k + 1; i <= n - 1; ++i)
            acc = acc - a[i] * a[2 * n - k - i];
        a[n - k] = acc / (two * a[n]);
    }
    return Poly<F>::from_coeffs(std::move(a));
}

} // namespace torsionlab

#endif

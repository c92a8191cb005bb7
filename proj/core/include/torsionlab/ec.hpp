#ifndef TORSIONLAB_EC_HPP
#define TORSIONLAB_EC_HPP

#include <optional>
#include <vector>

#include "torsionlab/poly.hpp"

namespace torsionlab {

// Short Weierstrass curve Y^2 = X^3 + aX + b over an exact field.
template <class F>
struct ShortWeierstrass {
    F a, b;
};

template <class F>
ShortWeierstrass<F> make_curve(F a, F b) {
    const F one = FieldTraits<F>::one(a);
    const F four = one + one + one + one;
    const F t27 = four * four + four + four + one + one + one;
    F disc = four * (a * a * a) + t27 * (b * b);
    if (FieldTraits<F>::is_zero(disc))
        throw DegenerateCurve("discriminant 4a^3 + 27b^2 vanishes");
    return {std::move(a), std::move(b)};
}

template <class F>
struct ECPoint {
    bool infinity;
    F x, y;

    static ECPoint at_infinity(const F &sample) {
        return {true, FieldTraits<F>::zero(sample), FieldTraits<F>::zero(sample)};
    }
    static ECPoint affine(F px, F py) { return {false, std::move(px), std::move(py)}; }
};

template <class F>
bool on_curve(const ShortWeierstrass<F> &E, const ECPoint<F> &P) {
    if (P.infinity) return true;
    F lhs = P.y * P.y;
    F rhs = P.x * P.x * P.x + E.a * P.x + E.b;
    return FieldTraits<F>::is_zero(lhs - rhs);
}

template <class F>
ECPoint<F> ec_neg(const ECPoint<F> &P) {
    if (P.infinity) return P;
    return ECPoint<F>::affine(P.x, FieldTraits<F>::zero(P.y) - P.y);
}

template <class F>
bool ec_equal(const ECPoint<F> &P, const ECPoint<F> &Q) {
    if (P.infinity || Q.infinity) return P.infinity && Q.infinity;
    return FieldTraits<F>::is_zero(P.x - Q.x) && FieldTraits<F>::is_zero(P.y - Q.y);
}

// Chord-tangent addition. `checked` verifies membership (exact fields).
template <class F>
ECPoint<F> ec_add(const ShortWeierstrass<F> &E, const ECPoint<F> &P, const ECPoint<F> &Q,
                  bool checked = true) {
    if constexpr (FieldTraits<F>::exact) {
        if (checked && (!on_curve(E, P) || !on_curve(E, Q)))
            throw PointNotOnCurve("ec_add operand is not on the curve");
    }
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const F one = FieldTraits<F>::one(P.x);
    F slope = FieldTraits<F>::zero(P.x);
    if (FieldTraits<F>::is_zero(P.x - Q.x)) {
        if (FieldTraits<F>::is_zero(P.y + Q.y)) return ECPoint<F>::at_infinity(P.x);
        // tangent
        const F three = one + one + one;
        const F two = one + one;
        slope = (three * P.x * P.x + E.a) / (two * P.y);
    } else {
        slope = (Q.y - P.y) / (Q.x - P.x);
    }
    F x3 = slope * slope - P.x - Q.x;
    F y3 = slope * (P.x - x3) - P.y;
    return ECPoint<F>::affine(std::move(x3), std::move(y3));
}

template <class F>
ECPoint<F> ec_mul(const ShortWeierstrass<F> &E, long n, const ECPoint<F> &P,
                  bool checked = true) {
    if constexpr (FieldTraits<F>::exact) {
        if (checked && !on_curve(E, P))
            throw PointNotOnCurve("ec_mul operand is not on the curve");
    }
    if (n == 0 || P.infinity) return ECPoint<F>::at_infinity(P.x);
    ECPoint<F> base = n < 0 ? ec_neg(P) : P;
    unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    ECPoint<F> acc = ECPoint<F>::at_infinity(P.x);
    while (k) {
        if (k & 1u) acc = ec_add(E, acc, base, false);
        k >>= 1u;
        if (k) base = ec_add(E, base, base, false);
    }
    return acc;
}

// Least n <= n_max with [n]P = O, by exact incremental addition.
template <class F>
std::optional<int> torsion_order(const ShortWeierstrass<F> &E, const ECPoint<F> &P,
                                 int n_max) {
    if (n_max < 1) throw UsageError("torsion_order needs n_max >= 1");
    if constexpr (FieldTraits<F>::exact) {
        if (!on_curve(E, P))
            throw PointNotOnCurve("torsion_order point is not on the curve");
    }
    ECPoint<F> acc = P;
    for (int n = 1; n <= n_max; ++n) {
        if (acc.infinity) return n;
        acc = ec_add(E, acc, P, false);
    }
    return std::nullopt;
}

// Division-polynomial ladder in the reduced form psi_n = f_n * (2y)^(n even),
// with y^2 == x^3 + ax + b eliminated:
//   f_0 = 0, f_1 = f_2 = 1,
//   f_3 = 3x^4 + 6a x^2 + 12b x - a^2,
//   f_4 = 2(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3),
//   f_{2m+1} = f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3   (16 g^2 on the even side),
//   f_{2m}   = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2),  g = x^3 + ax + b.
template <class F>
std::vector<Poly<F>> division_poly_ladder(const ShortWeierstrass<F> &E, int n) {
    if (n < 1) throw UsageError("division_poly needs n >= 1");
    const F zero = FieldTraits<F>::zero(E.a);
    const F one = FieldTraits<F>::one(E.a);
    const F two = one + one, three = two + one, four = two + two;
    const F five = four + one, eight = four + four, twelve = eight + four;
    const F six = three + three, twenty = twelve + eight, sixteen = eight + eight;
    using P = Poly<F>;
    const P x = P::monomial(one, 1);
    const P g = x * x * x + P(E.a) * x + P(E.b);
    const P g2_16 = P(sixteen) * g * g;
    std::vector<P> f;
    f.reserve(static_cast<std::size_t>(std::max(n + 1, 5)));
    f.push_back(P(zero)); // f_0
    f.push_back(P(one));  // f_1
    f.push_back(P(one));  // f_2
    f.push_back(P(three) * x * x * x * x + P(six * E.a) * x * x + P(twelve * E.b) * x -
                P(E.a * E.a)); // f_3
    f.push_back(P(two) *
                (x * x * x * x * x * x + P(five * E.a) * x * x * x * x +
                 P(twenty * E.b) * x * x * x - P(five * E.a * E.a) * x * x -
                 P(four * E.a * E.b) * x -
                 P(eight * E.b * E.b + E.a * E.a * E.a))); // f_4
    for (int k = 5; k <= std::max(n, 4); ++k) {
        if (k % 2 == 1) {
            int m = (k - 1) / 2;
            P t1 = f[m + 2] * f[m] * f[m] * f[m];
            P t2 = f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
            f.push_back(m % 2 == 0 ? g2_16 * t1 - t2 : t1 - g2_16 * t2);
        } else {
            int m = k / 2;
            f.push_back(f[m] * (f[m + 2] * f[m - 1] * f[m - 1] - f[m - 2] * f[m + 1] * f[m + 1]));
        }
    }
    f.resize(static_cast<std::size_t>(n) + 1, P(zero));
    return f;
}

// psi_n as (f_n, has 2y factor); for a point with y != 0,
// [n]P = O  <=>  f_n(x(P)) = 0.
template <class F>
std::pair<Poly<F>, bool> division_poly(const ShortWeierstrass<F> &E, int n) {
    auto f = division_poly_ladder(E, n);
    return {f.back(), n % 2 == 0};
}

} // namespace torsionlab

#endif

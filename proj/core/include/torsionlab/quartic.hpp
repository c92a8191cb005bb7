#ifndef TORSIONLAB_QUARTIC_HPP
#define TORSIONLAB_QUARTIC_HPP

#include "torsionlab/cplx.hpp"
#include "torsionlab/ec.hpp"
#include "torsionlab/fields.hpp"
#include "torsionlab/numberfield.hpp"

namespace torsionlab {

// Jacobian of the genus-one quartic v^2 = Q(u) together with the
// Abel-Jacobi map based at the infinite branch where v/u^2 -> -s.
//
// Writing A = s u^2 + p u + r for the polynomial part of sqrt(Q) and
// Q - A^2 = c1 u + c0, the function xi = 2s(A(u) - v) has a double pole at
// the base point only, u*xi a triple pole, and eliminating v gives
//   Y^2 = X^3 + alpha X^2 + 2s(p c1 - 2s c0) X + s^2 c1^2,
//   X = xi, Y = -(2su + p) xi - s c1, alpha = p^2 - 4 s r,
// then X -> X + alpha/3 depresses the cubic. phi(inf_-) = (alpha/3, s c1),
// and the class of (inf_+) - (inf_-) is its negative. The branch choice is
// pinned by the family Q = u^4 + u + lambda, whose divisor class must land
// on (0, -1) of Y^2 = X^3 - 4 lambda X + 1.
template <class F>
struct QuarticModel {
    Poly<F> Q;
    ShortWeierstrass<F> E;
    ECPoint<F> inf_class; // class of (inf_+) - (inf_-)
    F s, p, r, c1, c0, alpha;
};

template <class F>
QuarticModel<F> quartic_jacobian(const Poly<F> &Q) {
    if (Q.degree() != 4) throw UsageError("quartic_jacobian needs a degree-4 polynomial");
    if (!poly_is_squarefree(Q)) throw NotSquarefree("quartic is not squarefree");
    const Poly<F> A = poly_sqrt_floor(Q); // NonSquareLeadingCoeff propagates
    const Poly<F> R = Q - A * A;
    if (R.degree() > 1)
        throw InternalCheckFailed("sqrt floor residue has degree > 1");
    const F one = FieldTraits<F>::one(Q.lc());
    const F two = one + one, three = two + one, four = two + two;
    F s = A.at(2), p = A.at(1), r = A.at(0);
    F c1 = R.at(1), c0 = R.at(0);
    F alpha = p * p - four * s * r;
    F B = two * s * (p * c1 - two * s * c0);
    F C = s * s * c1 * c1;
    // depress X^3 + alpha X^2 + B X + C
    const F a3 = alpha / three;
    F a = B - alpha * a3;
    F b = C - B * a3 + (two * alpha * alpha * alpha) / (three * three * three);
    auto E = make_curve(std::move(a), std::move(b));
    ECPoint<F> infm = ECPoint<F>::affine(a3, s * c1);
    if constexpr (FieldTraits<F>::exact) {
        if (!on_curve(E, infm))
            throw InternalCheckFailed("phi(inf_-) does not land on the Jacobian");
    }
    return {Q, E, ec_neg(infm), s, p, r, c1, c0, alpha};
}

// phi(u0, v0) for an affine point with v0^2 = Q(u0).
template <class F>
ECPoint<F> aj_point(const QuarticModel<F> &M, const F &u0, const F &v0) {
    if constexpr (FieldTraits<F>::exact) {
        if (!FieldTraits<F>::is_zero(v0 * v0 - M.Q(u0)))
            throw PointNotOnCurve("(u0, v0) does not satisfy v^2 = Q(u)");
    }
    const F one = FieldTraits<F>::one(u0);
    const F two = one + one, three = two + one;
    const F Au = (M.s * u0 + M.p) * u0 + M.r;
    const F xi = two * M.s * (Au - v0);
    F X = xi + M.alpha / three;
    F Y = FieldTraits<F>::zero(u0) - ((two * M.s * u0 + M.p) * xi) - M.s * M.c1;
    ECPoint<F> out = ECPoint<F>::affine(std::move(X), std::move(Y));
    if constexpr (FieldTraits<F>::exact) {
        if (!on_curve(M.E, out))
            throw InternalCheckFailed("Abel-Jacobi image left the curve");
    }
    return out;
}

// class((u0, v0) - (u0, -v0)) = phi(q+) - phi(q-): the divisor-class map
// for a vertical pair on the quartic.
template <class F>
ECPoint<F> aj_class_difference(const QuarticModel<F> &M, const F &u0, const F &v0) {
    auto qp = aj_point(M, u0, v0);
    F nv = FieldTraits<F>::zero(v0) - v0;
    auto qm = aj_point(M, u0, nv);
    return ec_add(M.E, qp, ec_neg(qm), false);
}

template <class F>
ECPoint<F> aj_infinity_plus(const QuarticModel<F> &M) {
    return ECPoint<F>::at_infinity(M.s);
}

template <class F>
ECPoint<F> aj_infinity_minus(const QuarticModel<F> &M) {
    const F three = FieldTraits<F>::one(M.s) + FieldTraits<F>::one(M.s) +
                    FieldTraits<F>::one(M.s);
    return ECPoint<F>::affine(M.alpha / three, M.s * M.c1);
}

// phi(u0, sign * sqrt(Q(u0))) over Q, building the quadratic extension
// when Q(u0) is not a square. `allow_extension = false` reproduces the
// BranchNotInField failure mode.
struct AJLift {
    bool in_base_field = false;
    ECPoint<Rational> point_q{true, Rational(0), Rational(0)};
    NFPtr field;                            // the quadratic extension, else null
    std::optional<ECPoint<NFElem>> point_nf;
};
AJLift abel_jacobi_rational(const QuarticModel<Rational> &M, const Rational &u0, int sign,
                            bool allow_extension = true);

// ---- case-(ii) data: the algebraic function rho(lambda) ----

// Numeric evaluation at arbitrary precision. Root selectors index the
// sorted root lists (real roots first, ascending; then by (re, im)).
struct RhoCaseII {
    Cplx rho;
    Cplx m_root;               // chosen root of m^4 - 8m + 16 lambda
    Cplx half_pw_x, half_pw_y; // half point of (0, -1/4) on y^2 = 4x^3 - lambda x + 1/16
    Cplx e3_x, e3_y;           // chosen 3-torsion point, Y^2 = X^3 - 4 lambda X + 1 coords
    int n_real_m_roots = 0;
    int n_real_e3_points = 0;
};
RhoCaseII rho_case_ii(const Cplx &lam, int m_choice, int e3_choice, long digits);

} // namespace torsionlab

#endif

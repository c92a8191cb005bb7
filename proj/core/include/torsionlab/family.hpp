#ifndef TORSIONLAB_FAMILY_HPP
#define TORSIONLAB_FAMILY_HPP

#include <vector>

#include "torsionlab/ec.hpp"
#include "torsionlab/numberfield.hpp"

namespace torsionlab {

// The quartic family Q_lambda = x^4 + x + lambda. Its Jacobian is
// Y^2 = X^3 - 4 lambda X + 1 and the class of (inf_+) - (inf_-) is the
// marked point P = (0, -1); torsion of P in lambda governs Pell solvability.

template <class F>
ShortWeierstrass<F> family_curve(const F &lambda) {
    const F one = FieldTraits<F>::one(lambda);
    const F four = one + one + one + one;
    F a = FieldTraits<F>::zero(lambda) - four * lambda;
    return make_curve(std::move(a), one);
}

template <class F>
ECPoint<F> family_point(const F &lambda) {
    return ECPoint<F>::affine(FieldTraits<F>::zero(lambda),
                              FieldTraits<F>::zero(lambda) - FieldTraits<F>::one(lambda));
}

template <class F>
Poly<F> family_quartic(const F &lambda) {
    const F zero = FieldTraits<F>::zero(lambda);
    const F one = FieldTraits<F>::one(lambda);
    return Poly<F>::from_coeffs({lambda, one, zero, zero, one});
}

// f_n(0) evaluated on the family (a = -4 lambda, b = 1) as an exact
// polynomial in lambda: [n]P = O exactly when it vanishes.
Poly<Rational> torsion_condition(int n);

// The order-n condition with every proper-divisor condition removed and
// repeated factors squashed; its lambda-degree is |S_n^E|.
Poly<Rational> torsion_condition_exact_order(int n);

// One torsion parameter presentation: either an exact rational lambda or
// the generator of Q[t]/(minpoly) with its complex embeddings.
struct TorsionParam {
    int order = 0;
    bool is_rational = false;
    Rational rational_value;
    NFPtr field;                  // non-null for algebraic entries
    bool conditional = false;      // minpoly not certified irreducible
    std::vector<Cplx> embeddings;  // all lambda values this entry carries
    bool verified = false;         // exact (rational) or 40-digit numeric check
};

// All lambda with exact order n for P = (0,-1) on Y^2 = X^3 - 4 lambda X + 1.
std::vector<TorsionParam> torsion_parameters(int n, long digits = 40);

// Certified non-torsion test for rational lambda: exhaustive exact
// multiples up to the rational-torsion bound 12 (Mazur), so a miss
// certifies that P is non-torsion over Q outright.
bool certified_non_torsion(const Rational &lambda);

// Numeric check that [n]P = O at an embedded parameter: computes
// [n-1]P and compares with -P at the working tolerance.
bool torsion_order_matches_numeric(const Cplx &lambda, int n, long digits);

} // namespace torsionlab

#endif

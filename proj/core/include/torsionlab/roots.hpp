#ifndef TORSIONLAB_ROOTS_HPP
#define TORSIONLAB_ROOTS_HPP

#include <vector>

#include "torsionlab/cplx.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

// All roots of a complex-coefficient polynomial (lowest first, lc != 0,
// assumed squarefree) by Aberth-Ehrlich simultaneous iteration at the
// working precision of the coefficients.
std::vector<Cplx> aberth_roots(const std::vector<Cplx> &coeffs);

// Certified roots of an exact polynomial over Q: deg(f) roots with
// multiplicity, each r with |f(r)| < 10^(-prec+10) * max|coeff|. Retries at
// 2x and 4x working precision before PrecisionExhausted.
std::vector<Cplx> complex_roots(const Poly<Rational> &f, long prec_digits);

} // namespace torsionlab

#endif

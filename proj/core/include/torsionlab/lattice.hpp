#ifndef TORSIONLAB_LATTICE_HPP
#define TORSIONLAB_LATTICE_HPP

#include <memory>

#include "torsionlab/cplx.hpp"
#include "torsionlab/ec.hpp"
#include "torsionlab/fields.hpp"

namespace torsionlab {

// Complex point in the Weierstrass normalization y^2 = 4x^3 - g2 x - g3,
// or the origin of the group law.
using CPoint = ECPoint<Cplx>;

// Real coordinates of u in the basis (omega1, omega2).
struct EBetti {
    Real b1, b2;
};

// Period data of one elliptic curve over C. Basis satisfies
// Im(omega2/omega1) > 0 with tau reduced to the fundamental domain, and
// eta_i = 2 zeta(omega_i / 2), so the Legendre relation reads
// eta1 omega2 - eta2 omega1 = 2 pi i.
class Lattice {
public:
    Cplx g2, g3;
    Cplx omega1, omega2;
    Cplx eta1, eta2;
    Cplx tau;
    long digits = 0;

    mpfr_prec_t bits() const { return bits_for_digits(digits + 25); }
    Cplx nome() const;       // q = exp(i pi tau)
    Real min_period() const; // min(|omega1|, |omega2|, |omega1 +- omega2|)
    Real tol(long offset) const { return Real::pow10(-digits + offset, bits()); }
};

// Periods and quasi-periods from the invariants: AGM over root orderings,
// certified by reconstructing (g2, g3) from Eisenstein series at the
// reduced tau.
Lattice periods(const Cplx &g2, const Cplx &g3, long digits);

// Weierstrass functions; z anywhere in C (internal reduction into the
// fundamental cell plus exact quasi-periodicity factors).
std::pair<Cplx, Cplx> wp(const Lattice &L, const Cplx &z); // (p(z), p'(z))
Cplx wzeta(const Lattice &L, const Cplx &z);
Cplx wsigma(const Lattice &L, const Cplx &z);

// Elliptic logarithm with the fundamental-parallelogram determination:
// z with wp(z) = (x(P), y(P)), coordinates b1, b2 in [0, 1).
Cplx elog(const Lattice &L, const CPoint &P);

// Real solution of u = b1 omega1 + b2 omega2.
EBetti betti_e(const Lattice &L, const Cplx &u);

// Lattice translate of z nearest to `prev` (the continuation step for
// path-uniform determinations).
Cplx nearest_translate(const Lattice &L, const Cplx &z, const Cplx &prev);

// Path-continuous determination: the translate of elog(P) nearest the
// previous value. Steps whose jump exceeds a quarter of the shortest
// period are rejected with BranchJump (shrink the path step instead).
Cplx elog_continued(const Lattice &L, const CPoint &P, const Cplx &prev);

// Reduce z into the centered fundamental cell; returns the removed
// integers (m, n) with z = z_red + m omega1 + n omega2.
Cplx reduce_to_cell(const Lattice &L, const Cplx &z, long &m, long &n);

// Process-wide construction cache keyed by (g2, g3, digits).
std::shared_ptr<const Lattice> lattice_cached(const Cplx &g2, const Cplx &g3, long digits);

} // namespace torsionlab

#endif

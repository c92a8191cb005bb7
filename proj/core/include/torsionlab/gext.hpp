#ifndef TORSIONLAB_GEXT_HPP
#define TORSIONLAB_GEXT_HPP

#include <memory>
#include <optional>

#include "torsionlab/lattice.hpp"

namespace torsionlab {

// Extension G of E by the multiplicative group, presented analytically by
// a logarithm v of the parametrizing point q on the dual curve. The
// period system of G has the basis
//   pi_0 = (2 pi i, 0), pi_i = (kappa_v(omega_i), omega_i),
//   kappa_v(omega_i) = zeta(v) omega_i - eta_i v.
struct GExtension {
    std::shared_ptr<const Lattice> L;
    Cplx v;
    Cplx zeta_v;
    Cplx kappa1, kappa2;

    mpfr_prec_t bits() const { return L->bits(); }
    Cplx two_pi_i() const {
        return {Real(bits()), mul_2si(Real::pi(bits()), 1)};
    }
    // the period basis of Pi_G as vectors in C^2
    std::pair<Cplx, Cplx> pi0() const { return {two_pi_i(), Cplx(bits())}; }
    std::pair<Cplx, Cplx> pi1() const { return {kappa1, L->omega1}; }
    std::pair<Cplx, Cplx> pi2() const { return {kappa2, L->omega2}; }
};

GExtension extension_make(std::shared_ptr<const Lattice> L, const Cplx &v);

// Point of G in the birational chart fixed by the section beta with
// divisor (-q) - (0): a nonzero multiplicative coordinate over a point of
// E away from the divisor.
struct GPoint {
    Cplx delta;
    CPoint ep;
};

// Vector in Lie G = C^2.
struct GLog {
    Cplx t, z;
};

// Betti presentation (a, b1, b2): U = a pi_0 + b1 pi_1 + b2 pi_2.
struct GBetti {
    Cplx a;
    Real b1, b2;
};

// g(u, v) = log(sigma(u+v) / (sigma(u) sigma(v))), principal branch.
Cplx green(const Lattice &L, const Cplx &u, const Cplx &v);

// Green's function continued along a path: principal value at the first
// point, nearest-2-pi-i-translate continuation afterwards.
Cplx green_continued(const Lattice &L, const Cplx &u, const Cplx &v,
                     const std::optional<Cplx> &prev);

// exp_G: (t, z) -> (f_v(z) e^t, wp(z)) with
// f_v(z) = sigma(v+z)/(sigma(v) sigma(z)) e^{-zeta(v) z}.
GPoint g_exp(const GExtension &ext, const Cplx &t, const Cplx &z);

// log_G(s) = (-g(u, v) + zeta(v) u + log delta_s, u) at the determination
// u_hint of the elliptic logarithm of the E-part.
GLog g_log(const GExtension &ext, const GPoint &s, const Cplx &u_hint);

GBetti betti_g(const GExtension &ext, const GLog &U);

// Least m <= m_max with all three Betti coordinates in (1/m)Z; requires
// |Im a| below tolerance before the real recognition.
std::optional<long> g_torsion_test(const GExtension &ext, const GPoint &s,
                                   const Cplx &u_det, long m_max);

// The sigma 2-cocycle carrying the group law of the chart:
// c(z1, z2) = sigma(z1+z2+v) sigma(z1) sigma(z2) sigma(v) /
//             (sigma(z1+z2) sigma(z1+v) sigma(z2+v)).
Cplx g_cocycle(const GExtension &ext, const Cplx &z1, const Cplx &z2);

// Group law in the chart via the cocycle.
GPoint g_mul(const GExtension &ext, const GPoint &s1, const Cplx &u1, const GPoint &s2,
             const Cplx &u2);

} // namespace torsionlab

#endif

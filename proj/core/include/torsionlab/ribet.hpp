#ifndef TORSIONLAB_RIBET_HPP
#define TORSIONLAB_RIBET_HPP

#include "torsionlab/gext.hpp"

namespace torsionlab {

// Certified CM detection: integer relation A tau^2 + B tau + C = 0 of
// height <= bound, verified at full precision.
struct CMData {
    long A = 0, B = 0, C = 0;
};
CMData cm_detect(const Lattice &L, long height_bound = 1000000);

// The CM weight-2 constant: eta2 - s2 omega2 = conj(tau) (eta1 - s2 omega1).
Cplx s2_value(const Lattice &L);

// theta(z) = sigma(z) exp(-s2 z^2 / 2).
Cplx theta_cm(const Lattice &L, const Cplx &s2, const Cplx &z);

// Enumerates the nonzero e in E[gamma] (gamma a CM multiplier), as points
// of the fundamental cell.
std::vector<Cplx> torsion_kernel(const Lattice &L, const Cplx &gamma);

// Residual of (theta(gamma z)/theta(z)^N(gamma))^2 = gamma^2 prod (wp(z)-wp(e)).
Real theta_identity_residual(const Lattice &L, const Cplx &gamma, const Cplx &z);

// delta for the analytic Ribet section at u (v = alpha u):
// delta = sigma(u+v)/(sigma(u) sigma(v)) e^{-s2 u v};
// the logarithm of the section is (zeta(v) u - s2 u v, u).
struct RibetDelta {
    Cplx delta;
    GLog log;
    Cplx s2;
};
RibetDelta ribet_delta(const Lattice &L, const Cplx &alpha, const Cplx &u);

// Torsion order of the Ribet section at the exact n-torsion logarithm
// u = (k1 omega1 + k2 omega2)/n, gcd(k1, k2, n) = 1.
struct RibetOrder {
    long m = 0;
    bool divides_n2 = false;
    GBetti betti{Cplx(), Real(), Real()};
    bool used_ray_limit = false;
};
RibetOrder ribet_order_check(const Lattice &L, const Cplx &alpha, long k1, long k2,
                             long n, long recognize_cap_factor = 4);

// alpha as integer coordinates in the (1, tau) basis; AlphaParity /
// AlphaNotAntisymmetric guards live here.
void check_alpha(const Lattice &L, const Cplx &alpha);

} // namespace torsionlab

#endif

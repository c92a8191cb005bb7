#include "torsionlab/gext.hpp"

#include <numeric>

#include "torsionlab/recognize.hpp"

namespace torsionlab {

namespace {

void check_not_lattice(const Lattice &L, const Cplx &z, const char *who) {
    long m = 0, n = 0;
    Cplx z0 = reduce_to_cell(L, z, m, n);
    Real tol = Real::pow10(-L.digits / 2, L.bits()) * L.min_period();
    if (abs(z0) < tol)
        throw PoleProximity(std::string(who) + ": argument lies on the lattice");
}

} // namespace

GExtension extension_make(std::shared_ptr<const Lattice> L, const Cplx &v) {
    {
        long m = 0, n = 0;
        Cplx v0 = reduce_to_cell(*L, v, m, n);
        Real tol = Real::pow10(-L->digits / 2, L->bits()) * L->min_period();
        if (abs(v0) < tol)
            throw TorsionZeroQ("v lies on the lattice: q degenerates to the origin");
    }
    GExtension ext;
    ext.v = v;
    ext.zeta_v = wzeta(*L, v);
    ext.kappa1 = ext.zeta_v * L->omega1 - L->eta1 * v;
    ext.kappa2 = ext.zeta_v * L->omega2 - L->eta2 * v;
    ext.L = std::move(L);
    return ext;
}

Cplx green(const Lattice &L, const Cplx &u, const Cplx &v) {
    check_not_lattice(L, u, "green(u)");
    check_not_lattice(L, v, "green(v)");
    check_not_lattice(L, u + v, "green(u+v)");
    return log(wsigma(L, u + v) / (wsigma(L, u) * wsigma(L, v)));
}

Cplx green_continued(const Lattice &L, const Cplx &u, const Cplx &v,
                     const std::optional<Cplx> &prev) {
    Cplx g = green(L, u, v);
    if (!prev) return g;
    const Cplx tpi{Real(L.bits()), mul_2si(Real::pi(L.bits()), 1)};
    Real k = round((prev->im - g.im) / tpi.im);
    return g + Cplx{k, Real(L.bits())} * tpi;
}

GPoint g_exp(const GExtension &ext, const Cplx &t, const Cplx &z) {
    const Lattice &L = *ext.L;
    check_not_lattice(L, z, "g_exp(z)");
    check_not_lattice(L, z + ext.v, "g_exp(z+v)");
    Cplx fv = wsigma(L, ext.v + z) / (wsigma(L, ext.v) * wsigma(L, z)) *
              exp(-(ext.zeta_v * z));
    auto [px, py] = wp(L, z);
    return {fv * exp(t), CPoint::affine(px, py)};
}

GLog g_log(const GExtension &ext, const GPoint &s, const Cplx &u_hint) {
    const Lattice &L = *ext.L;
    if (s.delta.is_zero()) throw PoleProximity("g_log: delta vanishes (chart divisor)");
    // the hint must be a logarithm of the E-part
    auto [px, py] = wp(L, u_hint);
    Real scale = max(Real::from_long(1, L.bits()), abs(px));
    if (!s.ep.infinity &&
        !(abs(px - s.ep.x) + abs(py - s.ep.y) <
          Real::pow10(-L.digits / 2, L.bits()) * scale * scale))
        throw PointNotOnCurve("g_log: u_hint is not a logarithm of the E-part");
    Cplx t = -green(L, u_hint, ext.v) + ext.zeta_v * u_hint + log(s.delta);
    return {t, u_hint};
}

GBetti betti_g(const GExtension &ext, const GLog &U) {
    EBetti b = betti_e(*ext.L, U.z);
    Cplx rest = U.t - Cplx{b.b1, Real(ext.bits())} * ext.kappa1 -
                Cplx{b.b2, Real(ext.bits())} * ext.kappa2;
    Cplx a = rest / ext.two_pi_i();
    return {a, b.b1, b.b2};
}

std::optional<long> g_torsion_test(const GExtension &ext, const GPoint &s,
                                   const Cplx &u_det, long m_max) {
    if (m_max < 1) throw UsageError("g_torsion_test needs m_max >= 1");
    GLog U = g_log(ext, s, u_det);
    GBetti B = betti_g(ext, U);
    const Lattice &L = *ext.L;
    Real tol = Real::pow10(-L.digits / 2, L.bits());
    if (!(abs(B.a.im) < tol)) return std::nullopt;
    auto ra = rational_recognize(B.a.re, m_max, tol);
    auto r1 = rational_recognize(B.b1, m_max, tol);
    auto r2 = rational_recognize(B.b2, m_max, tol);
    if (!ra || !r1 || !r2) return std::nullopt;
    long m = std::lcm(std::lcm(ra->second, r1->second), r2->second);
    if (m > m_max) return std::nullopt;
    return m;
}

Cplx g_cocycle(const GExtension &ext, const Cplx &z1, const Cplx &z2) {
    const Lattice &L = *ext.L;
    Cplx num = wsigma(L, z1 + z2 + ext.v) * wsigma(L, z1) * wsigma(L, z2) *
               wsigma(L, ext.v);
    Cplx den = wsigma(L, z1 + z2) * wsigma(L, z1 + ext.v) * wsigma(L, z2 + ext.v);
    if (den.is_zero()) throw PoleProximity("cocycle denominator vanishes");
    return num / den;
}

GPoint g_mul(const GExtension &ext, const GPoint &s1, const Cplx &u1, const GPoint &s2,
             const Cplx &u2) {
    const Lattice &L = *ext.L;
    Cplx delta = s1.delta * s2.delta * g_cocycle(ext, u1, u2);
    auto [px, py] = wp(L, u1 + u2);
    return {delta, CPoint::affine(px, py)};
}

} // namespace torsionlab

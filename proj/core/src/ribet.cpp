#include "torsionlab/ribet.hpp"

#include <numeric>

#include "torsionlab/recognize.hpp"

namespace torsionlab {

namespace {

// coordinates of x in the real basis (1, tau)
std::pair<Real, Real> tau_coords(const Lattice &L, const Cplx &x) {
    Real a = x.re - x.im * L.tau.re / L.tau.im;
    Real b = x.im / L.tau.im;
    return {a, b};
}

bool near_integer(const Real &x, const Real &tol, long &out) {
    Real r = round(x);
    if (!(abs(x - r) < tol)) return false;
    out = r.to_long();
    return true;
}

} // namespace

CMData cm_detect(const Lattice &L, long height_bound) {
    const mpfr_prec_t bits = L.bits();
    const Real tol = Real::pow10(-L.digits + 14, bits);
    Real x = L.tau.re, y = L.tau.im;
    // A tau^2 + B tau + C = 0 with B = -2Ax, C = A(x^2+y^2)
    auto rx = rational_recognize(mul_2si(x, 1), height_bound, tol);
    auto rn = rational_recognize(x * x + y * y, height_bound, tol);
    if (!rx || !rn) throw NotCM("no small integer relation for tau");
    long A = std::lcm(rx->second, rn->second);
    if (A > height_bound) throw NotCM("relation height exceeds the bound");
    Real Ar = Real::from_long(A, bits);
    long B = 0, C = 0;
    if (!near_integer(-(mul_2si(x, 1) * Ar), tol * Ar, B) ||
        !near_integer((x * x + y * y) * Ar, tol * Ar, C))
        throw NotCM("candidate relation is not integral");
    // verify at full precision
    Cplx resid = Cplx{Real::from_long(A, bits), Real(bits)} * L.tau * L.tau +
                 Cplx{Real::from_long(B, bits), Real(bits)} * L.tau +
                 Cplx{Real::from_long(C, bits), Real(bits)};
    if (!(abs(resid) < Real::pow10(-L.digits + 12, bits) * Real::from_long(A + std::abs(B) + std::abs(C), bits)))
        throw NotCM("integer relation fails at full precision");
    long g = std::gcd(std::gcd(A, std::abs(B)), std::abs(C));
    if (g > 1) {
        A /= g;
        B /= g;
        C /= g;
    }
    if (std::max({A, std::abs(B), std::abs(C)}) > height_bound)
        throw NotCM("reduced relation exceeds the height bound");
    return {A, B, C};
}

Cplx s2_value(const Lattice &L) {
    (void)cm_detect(L); // throws NotCM otherwise
    Cplx tbar = conj(L.tau);
    Cplx den = L.omega2 - tbar * L.omega1;
    if (abs(den) < Real::pow10(-L.digits, L.bits()) * abs(L.omega1))
        throw IllConditioned("omega2 - conj(tau) omega1 vanishes");
    return (L.eta2 - tbar * L.eta1) / den;
}

Cplx theta_cm(const Lattice &L, const Cplx &s2, const Cplx &z) {
    return wsigma(L, z) * exp(-mul_2si(s2 * z * z, -1));
}

std::vector<Cplx> torsion_kernel(const Lattice &L, const Cplx &gamma) {
    const mpfr_prec_t bits = L.bits();
    Real n2 = abs(gamma) * abs(gamma);
    long N = round(n2).to_long();
    if (N < 1 || !(abs(n2 - Real::from_long(N, bits)) < Real::pow10(-L.digits / 2, bits)))
        throw AlphaParity("gamma has non-integral norm; not a CM multiplier");
    std::vector<Cplx> reps;
    std::vector<std::pair<long, long>> seen;
    for (long a = 0; a < N && static_cast<long>(reps.size()) < N - 1; ++a) {
        for (long b = 0; b < N && static_cast<long>(reps.size()) < N - 1; ++b) {
            if (a == 0 && b == 0) continue;
            Cplx w = Cplx::from_long(a, 0, bits) * L.omega1 +
                     Cplx::from_long(b, 0, bits) * L.omega2;
            Cplx e = w / gamma;
            // class of e modulo the lattice
            EBetti bb = betti_e(L, e);
            Real f1 = bb.b1 - floor(bb.b1), f2 = bb.b2 - floor(bb.b2);
            long key1 = round(f1 * Real::from_long(2 * N * N, bits)).to_long();
            long key2 = round(f2 * Real::from_long(2 * N * N, bits)).to_long();
            key1 %= 2 * N * N;
            key2 %= 2 * N * N;
            if (key1 == 0 && key2 == 0) continue; // the zero class
            bool dup = false;
            for (auto &[k1, k2] : seen)
                if (k1 == key1 && k2 == key2) dup = true;
            if (dup) continue;
            seen.emplace_back(key1, key2);
            reps.push_back(Cplx{f1, Real(bits)} * L.omega1 + Cplx{f2, Real(bits)} * L.omega2);
        }
    }
    return reps;
}

Real theta_identity_residual(const Lattice &L, const Cplx &gamma, const Cplx &z) {
    const mpfr_prec_t bits = L.bits();
    Cplx s2 = s2_value(L);
    long N = round(abs(gamma) * abs(gamma)).to_long();
    Cplx lhs = theta_cm(L, s2, gamma * z) / theta_cm(L, s2, z).pow_long(N);
    lhs = lhs * lhs;
    Cplx rhs = gamma * gamma;
    auto [pz, ppz] = wp(L, z);
    for (const Cplx &e : torsion_kernel(L, gamma)) {
        auto [pe, ppe] = wp(L, e);
        rhs *= (pz - pe);
    }
    return abs(lhs - rhs) / max(Real::from_long(1, bits), abs(rhs));
}

void check_alpha(const Lattice &L, const Cplx &alpha) {
    const Real tol = Real::pow10(-L.digits / 2, L.bits());
    if (abs(alpha) < tol) throw AlphaNotAntisymmetric("alpha vanishes");
    if (!(abs(alpha.re) < tol * abs(alpha)))
        throw AlphaNotAntisymmetric("alpha is not purely imaginary");
    // alpha/2 must be a lattice multiplier: coordinates in (1, tau) integral
    auto [a, b] = tau_coords(L, mul_2si(alpha, -1));
    long ai = 0, bi = 0;
    if (!near_integer(a, tol, ai) || !near_integer(b, tol, bi))
        throw AlphaParity("alpha is not divisible by 2 in the CM order");
    // and alpha tau/2 stays in the order
    auto [c, d] = tau_coords(L, mul_2si(alpha * L.tau, -1));
    long ci = 0, di = 0;
    if (!near_integer(c, tol, ci) || !near_integer(d, tol, di))
        throw AlphaParity("alpha/2 does not multiply the lattice into itself");
}

RibetDelta ribet_delta(const Lattice &L, const Cplx &alpha, const Cplx &u) {
    check_alpha(L, alpha);
    Cplx s2 = s2_value(L);
    Cplx v = alpha * u;
    Cplx g = green(L, u, v); // PoleProximity guards u, v, u+v
    RibetDelta out{exp(g - s2 * u * v), {wzeta(L, v) * u - s2 * u * v, u}, s2};
    return out;
}

namespace {

struct BettiTriple {
    Cplx a;
    Real b1, b2;
};

// direct evaluation of the Ribet-log Betti data at u (v = alpha u away
// from the lattice)
BettiTriple ribet_betti_at(std::shared_ptr<const Lattice> Lp, const Cplx &alpha,
                           const Cplx &s2, const Cplx &u) {
    Cplx v = alpha * u;
    GExtension ext = extension_make(Lp, v);
    Cplx t = ext.zeta_v * u - s2 * u * v;
    GBetti B = betti_g(ext, GLog{t, u});
    return {B.a, B.b1, B.b2};
}

} // namespace

RibetOrder ribet_order_check(const Lattice &L, const Cplx &alpha, long k1, long k2,
                             long n, long recognize_cap_factor) {
    if (n < 1) throw UsageError("ribet_order_check needs n >= 1");
    if (std::gcd(std::gcd(std::labs(k1), std::labs(k2)), n) != 1)
        throw UsageError("(k1, k2, n) must be coprime (primitive torsion)");
    const mpfr_prec_t bits = L.bits();
    check_alpha(L, alpha);
    Cplx s2 = s2_value(L);
    auto Lp = std::make_shared<const Lattice>(L);
    Cplx u = (Cplx::from_long(k1, 0, bits) * L.omega1 +
              Cplx::from_long(k2, 0, bits) * L.omega2) /
             Cplx::from_long(n, 0, bits);
    if (n == 1)
        throw PoleProximity("u lies on the lattice (n = 1): sigma(u) = 0");

    RibetOrder out;
    // is v = alpha u on the lattice? then the direct formula degenerates
    bool v_degenerate = false;
    {
        long mm = 0, nn = 0;
        Cplx v0 = reduce_to_cell(L, alpha * u, mm, nn);
        v_degenerate = abs(v0) < Real::pow10(-L.digits / 2, bits) * L.min_period();
    }
    BettiTriple B{Cplx(bits), Real(bits), Real(bits)};
    if (!v_degenerate) {
        B = ribet_betti_at(Lp, alpha, s2, u);
    } else {
        // Evaluate along the ray u(1 - eps). The Betti coordinates are
        // polynomial of degree <= 2 in eps (the zeta(v') pole cancels
        // against the kappa terms), so quadratic extrapolation to eps = 0
        // is exact; two extrapolants from overlapping node triples must
        // agree.
        out.used_ray_limit = true;
        std::vector<Real> eps;
        std::vector<BettiTriple> vals;
        for (int e = 4; e <= 7; ++e) {
            eps.push_back(Real::pow10(-e, bits));
            Cplx ue = u * (Cplx::from_long(1, 0, bits) - Cplx{eps.back(), Real(bits)});
            vals.push_back(ribet_betti_at(Lp, alpha, s2, ue));
        }
        // Neville evaluation at 0 over the nodes [lo, lo+3)
        auto neville = [&](std::size_t lo, auto get) {
            std::vector<Cplx> p;
            for (std::size_t i = 0; i < 3; ++i) p.push_back(get(vals[lo + i]));
            for (std::size_t level = 1; level < 3; ++level)
                for (std::size_t i = 0; i < 3 - level; ++i) {
                    const Real &xi = eps[lo + i];
                    const Real &xj = eps[lo + i + level];
                    Cplx num = Cplx{xi, Real(bits)} * p[i + 1] -
                               Cplx{xj, Real(bits)} * p[i];
                    p[i] = num / Cplx{xi - xj, Real(bits)};
                }
            return p[0];
        };
        auto geta = [](const BettiTriple &t) { return t.a; };
        auto getb1 = [bits](const BettiTriple &t) { return Cplx{t.b1, Real(bits)}; };
        auto getb2 = [bits](const BettiTriple &t) { return Cplx{t.b2, Real(bits)}; };
        Cplx a1 = neville(0, geta), a2 = neville(1, geta);
        if (!(abs(a1 - a2) < Real::pow10(-L.digits / 3, bits)))
            throw PrecisionExhausted("ray extrapolants disagree at the torsion point");
        B.a = a2;
        B.b1 = neville(1, getb1).re;
        B.b2 = neville(1, getb2).re;
    }
    const Real tol = Real::pow10(-L.digits / 3, bits);
    if (!(abs(B.a.im) < tol))
        throw RecognitionFailed("Gm-coordinate has a non-real Betti value");
    long cap = recognize_cap_factor * n * n;
    auto ra = rational_recognize(B.a.re, cap, tol);
    auto r1 = rational_recognize(B.b1, cap, tol);
    auto r2 = rational_recognize(B.b2, cap, tol);
    if (!ra || !r1 || !r2)
        throw RecognitionFailed("Betti coordinates not recognized at denominator <= " +
                                std::to_string(cap));
    out.m = std::lcm(std::lcm(ra->second, r1->second), r2->second);
    out.divides_n2 = (n * n) % out.m == 0;
    out.betti = GBetti{B.a, B.b1, B.b2};
    return out;
}

} // namespace torsionlab

#include "torsionlab/lattice.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "torsionlab/roots.hpp"

namespace torsionlab {

namespace {

// Optimal AGM (right square-root choice at every step): the common limit
// used by the period formulas.
Cplx agm(Cplx a, Cplx b) {
    const mpfr_prec_t bits = std::min(a.bits(), b.bits());
    const Real stop = mul_2si(Real::from_long(1, bits), -static_cast<long>(bits - 8));
    for (int i = 0; i < 4 * 64 && !(abs(a - b) <= stop * abs(a)); ++i) {
        Cplx a1 = mul_2si(a + b, -1);
        Cplx b1 = sqrt(a * b);
        if (abs(a1 - b1) > abs(a1 + b1)) b1 = -b1;
        a = a1;
        b = b1;
    }
    return a;
}

struct Eisenstein {
    Cplx e2, e4, e6;
};

// E2, E4, E6 at tau via q-series in q = exp(2 pi i tau); converges fast
// for tau in the fundamental domain.
Eisenstein eisenstein(const Cplx &tau, long digits) {
    const mpfr_prec_t bits = tau.bits();
    const Cplx one = Cplx::from_long(1, 0, bits);
    Cplx q = exp(Cplx{-mul_2si(Real::pi(bits), 1) * tau.im,
                      mul_2si(Real::pi(bits), 1) * tau.re});
    Cplx qn = q;
    Cplx s2(bits), s4(bits), s6(bits);
    const Real eps = Real::pow10(-digits - 15, bits);
    for (long n = 1; n < 4000; ++n) {
        Cplx nq = Cplx::from_long(n, 0, bits) * qn / (one - qn);
        Cplx n2q = mul_si(nq, n);
        s2 += nq;
        s4 += mul_si(n2q, n);
        s6 += mul_si(mul_si(mul_si(n2q, n), n), n);
        Real n5 = pow_si(Real::from_long(n, bits), 5);
        if (abs(qn) * (n5 + Real::from_long(1, bits)) < eps) break;
        qn *= q;
    }
    Eisenstein E;
    E.e2 = one - mul_si(s2, 24);
    E.e4 = one + mul_si(s4, 240);
    E.e6 = one - mul_si(s6, 504);
    return E;
}

struct ThetaSums {
    Cplx t1, t1p, t1pp; // theta_1 and u-derivatives at u
};

// theta_1(u | tau) = 2 sum (-1)^n q^((n+1/2)^2) sin((2n+1)u), q = e^{i pi tau}
ThetaSums theta1(const Cplx &u, const Cplx &tau, long digits) {
    const mpfr_prec_t bits = u.bits();
    const Real eps = Real::pow10(-digits - 12, bits);
    const Real pi = Real::pi(bits);
    Cplx q14 = exp(Cplx{-pi * tau.im / Real::from_long(4, bits),
                        pi * tau.re / Real::from_long(4, bits)});
    Cplx q2 = exp(Cplx{-mul_2si(pi * tau.im, 1), mul_2si(pi * tau.re, 1)}); // q^2
    Cplx s = sin(u), c = cos(u);
    Cplx s2u = mul_2si(s * c, 1);          // sin 2u
    Cplx c2u = c * c - s * s;              // cos 2u
    Cplx qpow = q14;                       // q^((n+1/2)^2)
    Cplx qstep = q2;                       // multiply into qpow: q^(2n+2)
    ThetaSums T{Cplx(bits), Cplx(bits), Cplx(bits)};
    int settle = 0;
    for (long n = 0; n < 4000; ++n) {
        const long k = 2 * n + 1;
        Cplx term = qpow * s;
        Cplx termp = mul_si(qpow * c, k);
        Cplx termpp = mul_si(qpow * s, -k * k);
        if (n % 2 == 1) {
            term = -term;
            termp = -termp;
            termpp = -termpp;
        }
        T.t1 += term;
        T.t1p += termp;
        T.t1pp += termpp;
        Real size = abs(qpow) * (abs(s) + abs(c)) * Real::from_long(k * k + 1, bits);
        if (size < eps * (Real::from_long(1, bits) + abs(T.t1p))) {
            if (++settle >= 2) break;
        } else {
            settle = 0;
        }
        // advance sin/cos((k+2)u) and the q exponent
        Cplx sn = s * c2u + c * s2u;
        Cplx cn = c * c2u - s * s2u;
        s = std::move(sn);
        c = std::move(cn);
        qpow *= qstep;
        qstep *= q2;
    }
    T.t1 = mul_2si(T.t1, 1);
    T.t1p = mul_2si(T.t1p, 1);
    T.t1pp = mul_2si(T.t1pp, 1);
    return T;
}

Cplx theta1_prime0(const Cplx &tau, long digits, mpfr_prec_t bits) {
    ThetaSums T = theta1(Cplx(bits), tau, digits);
    return T.t1p;
}

} // namespace

Cplx Lattice::nome() const {
    const Real pi = Real::pi(bits());
    return exp(Cplx{-pi * tau.im, pi * tau.re});
}

Real Lattice::min_period() const {
    Real m = min(abs(omega1), abs(omega2));
    m = min(m, abs(omega1 + omega2));
    return min(m, abs(omega1 - omega2));
}

Lattice periods(const Cplx &g2in, const Cplx &g3in, long digits) {
    if (digits < 15) throw UsageError("periods needs prec >= 15 digits");
    const mpfr_prec_t bits = bits_for_digits(digits + 25);
    const Cplx g2 = g2in.at_bits(bits);
    const Cplx g3 = g3in.at_bits(bits);
    const Real one = Real::from_long(1, bits);
    Real scale = max(one, max(abs(g2), abs(g3)));
    Cplx disc = g2 * g2 * g2 - mul_si(g3 * g3, 27);
    if (abs(disc) < Real::pow10(-digits, bits) * scale * scale * scale)
        throw DegenerateCurve("g2^3 - 27 g3^2 vanishes at working precision");

    // roots of 4 z^3 - g2 z - g3
    std::vector<Cplx> cubic = {-g3, -g2, Cplx(bits), Cplx::from_long(4, 0, bits)};
    std::vector<Cplx> roots = aberth_roots(cubic);
    if (roots.size() != 3) throw InternalCheckFailed("cubic solve lost roots");

    const Real pi = Real::pi(bits);
    const Cplx i_pi = Cplx{Real(bits), pi};
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    Lattice best;
    Real best_err = Real::from_long(-1, bits);
    Real best_imw1 = Real(bits);
    for (const auto &perm : perms) {
        const Cplx &e1 = roots[perm[0]];
        const Cplx &e2r = roots[perm[1]];
        const Cplx &e3 = roots[perm[2]];
        Cplx w1, w2;
        try {
            Cplx m13 = sqrt(e1 - e3);
            Cplx m12 = sqrt(e1 - e2r);
            Cplx m23 = sqrt(e2r - e3);
            if (m13.is_zero() || m12.is_zero() || m23.is_zero()) continue;
            w1 = Cplx{pi, Real(bits)} / agm(m13, m12);
            w2 = i_pi / agm(m13, m23);
        } catch (const Error &) {
            continue;
        }
        Cplx tau = w2 / w1;
        if (tau.im.sign() == 0) continue;
        if (tau.im.sign() < 0) {
            w2 = -w2;
            tau = -tau;
        }
        // reduce tau to the fundamental domain, carrying the basis along
        for (int it = 0; it < 512; ++it) {
            Real n = round(tau.re);
            if (!n.is_zero()) {
                w2 -= Cplx{n, Real(bits)} * w1;
                tau = w2 / w1;
            }
            if (abs(tau) < one - Real::pow10(-digits, bits)) {
                Cplx nw1 = -w2;
                w2 = w1;
                w1 = std::move(nw1);
                tau = w2 / w1;
            } else {
                break;
            }
        }
        // canonical sign: real part of omega1 positive (imaginary part as
        // the tie-break)
        if (w1.re.sign() < 0 || (w1.re.is_zero() && w1.im.sign() < 0)) {
            w1 = -w1;
            w2 = -w2;
        }
        // certify by Eisenstein reconstruction
        Eisenstein E = eisenstein(tau, digits);
        Cplx pi4 = Cplx{pow_si(pi, 4), Real(bits)};
        Cplx pi6 = Cplx{pow_si(pi, 6), Real(bits)};
        Cplx g2c = pi4 * E.e4 * Cplx::from_rational(rat(4, 3), bits) / w1.pow_long(4);
        Cplx g3c = pi6 * E.e6 * Cplx::from_rational(rat(8, 27), bits) / w1.pow_long(6);
        Real err = (abs(g2c - g2) + abs(g3c - g3)) / scale;
        if (!(err < Real::pow10(-digits + 6, bits))) continue;
        // prefer a real omega1 among certified bases, then the smaller error
        Real im_rel = abs(w1.im) / abs(w1);
        bool better = best_err.sign() < 0 ||
                      im_rel < best_imw1 - Real::pow10(-8, bits) ||
                      (!(im_rel > best_imw1 + Real::pow10(-8, bits)) && err < best_err);
        if (better) {
            best_err = err;
            best_imw1 = im_rel;
            best.g2 = g2;
            best.g3 = g3;
            best.omega1 = w1;
            best.omega2 = w2;
            best.tau = tau;
            best.digits = digits;
            Cplx eta1 = Cplx{pow_si(pi, 2) / Real::from_long(3, bits), Real(bits)} *
                        E.e2 / w1;
            best.eta1 = eta1;
            best.eta2 = (eta1 * w2 - Cplx{Real(bits), mul_2si(pi, 1)}) / w1;
        }
    }
    if (best_err.sign() < 0)
        throw PrecisionExhausted("period search failed Eisenstein certification");
    return best;
}

Cplx reduce_to_cell(const Lattice &L, const Cplx &z, long &m, long &n) {
    EBetti b = betti_e(L, z);
    m = round(b.b1).to_long();
    n = round(b.b2).to_long();
    return z - Cplx{Real::from_long(m, L.bits()), Real(L.bits())} * L.omega1 -
           Cplx{Real::from_long(n, L.bits()), Real(L.bits())} * L.omega2;
}

EBetti betti_e(const Lattice &L, const Cplx &u) {
    const mpfr_prec_t bits = std::min(u.bits(), L.bits());
    Real det = L.omega1.re * L.omega2.im - L.omega1.im * L.omega2.re;
    Real sc = abs(L.omega1) * abs(L.omega2);
    if (abs(det) < Real::pow10(-L.digits + 6, bits) * sc)
        throw IllConditioned("period basis is numerically degenerate");
    Real b1 = (u.re * L.omega2.im - u.im * L.omega2.re) / det;
    Real b2 = (u.im * L.omega1.re - u.re * L.omega1.im) / det;
    return {b1, b2};
}

namespace {

// sigma at a point already inside the centered cell
Cplx sigma_in_cell(const Lattice &L, const Cplx &z0) {
    const mpfr_prec_t bits = L.bits();
    if (z0.is_zero()) return Cplx(bits);
    ThetaSums T = theta1(Cplx{Real::pi(bits), Real(bits)} * z0 / L.omega1, L.tau, L.digits);
    Cplx t1p0 = theta1_prime0(L.tau, L.digits, bits);
    Cplx expf = exp(L.eta1 * z0 * z0 / mul_2si(L.omega1, 1));
    return L.omega1 * expf * T.t1 / (Cplx{Real::pi(bits), Real(bits)} * t1p0);
}

Cplx sigma_unreduce(const Lattice &L, const Cplx &sig0, const Cplx &z0, long m, long n) {
    if (m == 0 && n == 0) return sig0;
    const mpfr_prec_t bits = L.bits();
    Cplx omega = Cplx{Real::from_long(m, bits), Real(bits)} * L.omega1 +
                 Cplx{Real::from_long(n, bits), Real(bits)} * L.omega2;
    Cplx eta = Cplx{Real::from_long(m, bits), Real(bits)} * L.eta1 +
               Cplx{Real::from_long(n, bits), Real(bits)} * L.eta2;
    Cplx fac = exp(eta * (z0 + mul_2si(omega, -1)));
    long sign = ((m + n + m * n) % 2 == 0) ? 1 : -1;
    return mul_si(fac * sig0, sign);
}

void check_pole(const Lattice &L, const Cplx &z0, const char *who) {
    Real tol = Real::pow10(-L.digits / 2, L.bits()) * L.min_period();
    if (abs(z0) < tol)
        throw PoleProximity(std::string(who) + ": z is too close to a lattice point");
}

} // namespace

Cplx wsigma(const Lattice &L, const Cplx &z) {
    long m = 0, n = 0;
    Cplx z0 = reduce_to_cell(L, z, m, n);
    return sigma_unreduce(L, sigma_in_cell(L, z0), z0, m, n);
}

Cplx wzeta(const Lattice &L, const Cplx &z) {
    const mpfr_prec_t bits = L.bits();
    long m = 0, n = 0;
    Cplx z0 = reduce_to_cell(L, z, m, n);
    check_pole(L, z0, "zeta");
    const Real pi = Real::pi(bits);
    ThetaSums T = theta1(Cplx{pi, Real(bits)} * z0 / L.omega1, L.tau, L.digits);
    Cplx val = L.eta1 * z0 / L.omega1 + Cplx{pi, Real(bits)} / L.omega1 * (T.t1p / T.t1);
    return val + Cplx{Real::from_long(m, bits), Real(bits)} * L.eta1 +
           Cplx{Real::from_long(n, bits), Real(bits)} * L.eta2;
}

std::pair<Cplx, Cplx> wp(const Lattice &L, const Cplx &z) {
    const mpfr_prec_t bits = L.bits();
    long m = 0, n = 0;
    Cplx z0 = reduce_to_cell(L, z, m, n);
    check_pole(L, z0, "wp");
    const Real pi = Real::pi(bits);
    ThetaSums T = theta1(Cplx{pi, Real(bits)} * z0 / L.omega1, L.tau, L.digits);
    Cplx lq = T.t1p / T.t1;
    Cplx fac = Cplx{pi, Real(bits)} / L.omega1;
    Cplx p = -(L.eta1 / L.omega1) - fac * fac * (T.t1pp / T.t1 - lq * lq);
    // p' = -sigma(2z)/sigma(z)^4
    long m2 = 0, n2 = 0;
    Cplx dz = mul_2si(z0, 1);
    Cplx dz0 = reduce_to_cell(L, dz, m2, n2);
    Cplx s2 = sigma_unreduce(L, sigma_in_cell(L, dz0), dz0, m2, n2);
    Cplx s1 = sigma_in_cell(L, z0);
    Cplx pp = -(s2 / (s1 * s1 * s1 * s1));
    return {p, pp};
}

Cplx nearest_translate(const Lattice &L, const Cplx &z, const Cplx &prev) {
    EBetti d = betti_e(L, prev - z);
    long m = round(d.b1).to_long();
    long n = round(d.b2).to_long();
    const mpfr_prec_t bits = L.bits();
    return z + Cplx{Real::from_long(m, bits), Real(bits)} * L.omega1 +
           Cplx{Real::from_long(n, bits), Real(bits)} * L.omega2;
}

Cplx elog(const Lattice &L, const CPoint &P) {
    const mpfr_prec_t bits = L.bits();
    if (P.infinity) return Cplx(bits);
    const Real one = Real::from_long(1, bits);
    // membership in the y^2 = 4x^3 - g2 x - g3 model
    Cplx lhs = P.y * P.y;
    Cplx rhs = (mul_si(P.x * P.x, 4) - L.g2) * P.x - L.g3;
    Real ms = max(one, abs(P.x));
    if (!(abs(lhs - rhs) < Real::pow10(-L.digits + 12, bits) * ms * ms * ms))
        throw PointNotOnCurve("elog input fails its curve equation");

    // drive toward the pole by halving
    Cplx x = P.x, y = P.y;
    const Real thresh = pow_si(Real::from_long(8, bits) / L.min_period(), 2);
    int k = 0;
    const Cplx g2 = L.g2, g3 = L.g3;
    while (abs(x) < thresh && k < 80) {
        // 4 xh^4 - 16 x xh^3 + 2 g2 xh^2 + (4 g2 x + 8 g3) xh + (g2^2/4 + 4 g3 x) = 0
        std::vector<Cplx> quart = {
            mul_2si(g2 * g2, -2) + mul_si(g3 * x, 4), mul_si(g2 * x, 4) + mul_si(g3, 8),
            mul_2si(g2, 1), mul_si(x, -16), Cplx::from_long(4, 0, bits)};
        std::vector<Cplx> cands = aberth_roots(quart);
        bool advanced = false;
        std::sort(cands.begin(), cands.end(), [](const Cplx &a, const Cplx &b) {
            return abs(a) > abs(b);
        });
        for (const Cplx &xh : cands) {
            Cplx yh2 = (mul_si(xh * xh, 4) - g2) * xh - g3;
            if (abs(yh2) < Real::pow10(-L.digits, bits)) continue; // 2-torsion half
            Cplx yh = sqrt(yh2);
            // tangent-line doubling of (xh, yh) must reproduce (x, y);
            // negating yh negates the doubled y, so the sign is forced
            Cplx slope = (mul_si(xh * xh, 12) - g2) / mul_2si(yh, 1);
            Cplx x2 = mul_2si(slope * slope, -2) - mul_2si(xh, 1);
            if (!(abs(x2 - x) < Real::pow10(-L.digits / 2, bits) * max(one, abs(x))))
                continue;
            Cplx y2 = -(slope * (x2 - xh) + yh);
            if (abs(y2 - y) > abs(y2 + y)) yh = -yh;
            x = xh;
            y = yh;
            ++k;
            advanced = true;
            break;
        }
        if (!advanced)
            throw PrecisionExhausted("elog halving found no admissible preimage");
    }

    // local inversion near the pole, then Newton against wp
    Cplx z = inv(sqrt(x));
    {
        Cplx w = mul_si(inv(z * z * z), -2);
        if (abs(w - y) > abs(w + y)) z = -z;
    }
    for (int it = 0; it < 64; ++it) {
        auto [pv, pd] = wp(L, z);
        Cplx step = (pv - x) / pd;
        z -= step;
        if (abs(step) < Real::pow10(-L.digits - 5, bits) * max(one, abs(z))) break;
    }
    {
        auto [pv, pd] = wp(L, z);
        if (abs(pd - y) > abs(pd + y)) z = -z;
    }
    // scale back and reduce to the [0,1)^2 parallelogram
    z = mul_2si(z, k);
    EBetti b = betti_e(L, z);
    Real f1 = floor(b.b1), f2 = floor(b.b2);
    z = z - Cplx{f1, Real(bits)} * L.omega1 - Cplx{f2, Real(bits)} * L.omega2;

    // round trip certificate
    auto [px, py] = wp(L, z);
    Real scale = max(one, abs(P.x)) * max(one, abs(P.x));
    if (!(abs(px - P.x) + abs(py - P.y) < Real::pow10(-L.digits + 14, bits) * scale))
        throw PrecisionExhausted("elog round trip failed its certificate");
    return z;
}

Cplx elog_continued(const Lattice &L, const CPoint &P, const Cplx &prev) {
    Cplx z = nearest_translate(L, elog(L, P), prev);
    if (abs(z - prev) > mul_2si(L.min_period(), -2))
        throw BranchJump("continuation step jumped by more than a quarter period");
    return z;
}

std::shared_ptr<const Lattice> lattice_cached(const Cplx &g2, const Cplx &g3, long digits) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const Lattice>> cache;
    std::string key = g2.str(digits) + "|" + g3.str(digits) + "|" + std::to_string(digits);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto L = std::make_shared<Lattice>(periods(g2, g3, digits));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, L);
    return L;
}

} // namespace torsionlab

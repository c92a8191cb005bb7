#include "torsionlab/roots.hpp"

#include <algorithm>

namespace torsionlab {

namespace {

// Horner evaluation of p and p' at z.
void eval_with_derivative(const std::vector<Cplx> &c, const Cplx &z, Cplx &p, Cplx &dp) {
    const mpfr_prec_t bits = z.bits();
    p = Cplx(bits);
    dp = Cplx(bits);
    for (std::size_t i = c.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
}

// Squarefree split of f over Q by repeated gcd: returns (gi, i) with
// f ~ prod gi^i and gi squarefree.
std::vector<std::pair<Poly<Rational>, int>> squarefree_split(const Poly<Rational> &f) {
    std::vector<std::pair<Poly<Rational>, int>> parts;
    Poly<Rational> g = poly_gcd(f, f.derivative());
    if (g.degree() <= 0) {
        parts.emplace_back(f.monic(), 1);
        return parts;
    }
    Poly<Rational> w = poly_quo(f, g).monic();
    int i = 1;
    while (w.degree() > 0) {
        Poly<Rational> y = poly_gcd(w, g);
        Poly<Rational> z = poly_quo(w, y);
        if (z.degree() > 0) parts.emplace_back(z.monic(), i);
        w = std::move(y);
        g = poly_quo(g, w);
        ++i;
        if (i > 1024) throw InternalCheckFailed("squarefree split runaway");
    }
    return parts;
}

} // namespace

std::vector<Cplx> aberth_roots(const std::vector<Cplx> &coeffs_in) {
    std::vector<Cplx> c = coeffs_in;
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
    const std::size_t n = c.size() - 1;
    if (n == 0) return {};
    const mpfr_prec_t bits = c[0].bits();
    std::vector<Cplx> z;
    z.reserve(n);
    // initial guesses on a circle sized by the Cauchy bound
    Real radius = Real::from_long(0, bits);
    for (std::size_t i = 0; i < n; ++i) {
        Real q = abs(c[i] / c[n]);
        radius = max(radius, q);
    }
    radius = Real::from_double(0.8, bits) * (Real::from_long(1, bits) + radius);
    const Real pi = Real::pi(bits);
    for (std::size_t k = 0; k < n; ++k) {
        Real ang = mul_2si(pi, 1) * Real::from_double((k + 0.354) / double(n), bits) +
                   Real::from_double(0.11, bits);
        z.push_back({radius * cos(ang), radius * sin(ang)});
    }
    const Real eps = mul_2si(Real::from_long(1, bits), -static_cast<long>(bits - 10));
    const int max_iters = 400;
    for (int it = 0; it < max_iters; ++it) {
        Real worst = Real::from_long(0, bits);
        for (std::size_t i = 0; i < n; ++i) {
            Cplx p(bits), dp(bits);
            eval_with_derivative(c, z[i], p, dp);
            if (p.is_zero()) continue;
            Cplx newton = dp.is_zero() ? Cplx::from_long(0, 0, bits) : p / dp;
            if (dp.is_zero()) {
                // nudge off a critical point
                z[i] += Cplx{eps + eps, eps};
                worst = max(worst, Real::from_long(1, bits));
                continue;
            }
            Cplx s(bits);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                Cplx d = z[i] - z[j];
                if (d.is_zero()) {
                    d = Cplx{eps, eps};
                }
                s += inv(d);
            }
            Cplx denom = Cplx::from_long(1, 0, bits) - newton * s;
            Cplx corr = denom.is_zero() ? newton : newton / denom;
            z[i] -= corr;
            worst = max(worst, abs(corr) / (Real::from_long(1, bits) + abs(z[i])));
        }
        if (worst < eps) break;
    }
    return z;
}

std::vector<Cplx> complex_roots(const Poly<Rational> &f, long prec_digits) {
    if (f.is_zero()) throw DivideByZeroPoly("complex_roots of the zero polynomial");
    if (prec_digits < 15) throw UsageError("complex_roots needs prec >= 15");
    if (f.degree() == 0) return {};

    Real max_coeff = Real::from_long(0, bits_for_digits(prec_digits));
    for (const Rational &q : f.coeffs())
        max_coeff = max(max_coeff, abs(Real::from_rational(q, max_coeff.bits())));

    for (int ladder = 1; ladder <= 4; ladder *= 2) {
        const long work_digits = 2 * prec_digits * ladder + 20;
        const mpfr_prec_t wb = bits_for_digits(work_digits);
        std::vector<Cplx> roots;
        for (const auto &[part, mult] : squarefree_split(f)) {
            std::vector<Cplx> pc;
            pc.reserve(part.size());
            for (const Rational &q : part.coeffs())
                pc.push_back(Cplx::from_rational(q, wb));
            std::vector<Cplx> rs = aberth_roots(pc);
            for (const Cplx &r : rs)
                for (int m = 0; m < mult; ++m) roots.push_back(r);
        }
        // certification against the original polynomial
        const Real bound = Real::pow10(-prec_digits + 10, wb) * max(Real::from_long(1, wb), max_coeff);
        bool ok = roots.size() == static_cast<std::size_t>(f.degree());
        for (const Cplx &r : roots) {
            if (!ok) break;
            Cplx v = f.eval_map(r, [&](const Rational &q) { return Cplx::from_rational(q, wb); });
            if (!(abs(v) < bound)) ok = false;
        }
        if (ok) {
            std::sort(roots.begin(), roots.end(), [](const Cplx &a, const Cplx &b) {
                int c = cmp(a.re, b.re);
                if (c != 0) return c < 0;
                return cmp(a.im, b.im) < 0;
            });
            return roots;
        }
    }
    throw PrecisionExhausted("complex_roots: certification failed after retry ladder");
}

} // namespace torsionlab

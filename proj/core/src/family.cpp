#include "torsionlab/family.hpp"

#include <map>
#include <mutex>

#include "torsionlab/fields.hpp"
#include "torsionlab/roots.hpp"

namespace torsionlab {

namespace {

using QP = Poly<Rational>;

QP qp(std::vector<Rational> c) { return QP::from_coeffs(std::move(c)); }

// f_k(0) ladder over Q[lambda] for a = -4 lambda, b = 1; the divisor
// recurrences close at x = 0 because every product sits at the same x and
// g(0) = b = 1 kills the 16 g^2 factor's x-dependence.
std::vector<QP> condition_ladder(int n) {
    std::vector<QP> f;
    f.reserve(static_cast<std::size_t>(n) + 1);
    f.push_back(qp({Rational(0)}));             // f_0
    f.push_back(qp({Rational(1)}));             // f_1
    f.push_back(qp({Rational(1)}));             // f_2
    f.push_back(qp({Rational(0), Rational(0), Rational(-16)})); // f_3(0) = -a^2
    f.push_back(qp({Rational(-16), Rational(0), Rational(0), Rational(128)}));
    // f_4(0) = 2(-8 b^2 - a^3) = 128 lambda^3 - 16
    for (int k = 5; k <= n; ++k) {
        if (k % 2 == 1) {
            int m = (k - 1) / 2;
            QP t1 = f[m + 2] * f[m] * f[m] * f[m];
            QP t2 = f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
            QP sixteen = qp({Rational(16)});
            f.push_back(m % 2 == 0 ? sixteen * t1 - t2 : t1 - sixteen * t2);
        } else {
            int m = k / 2;
            f.push_back(f[m] * (f[m + 2] * f[m - 1] * f[m - 1] - f[m - 2] * f[m + 1] * f[m + 1]));
        }
    }
    return f;
}

std::mutex g_cache_mutex;
std::map<int, QP> g_condition_cache;

} // namespace

Poly<Rational> torsion_condition(int n) {
    if (n < 1) throw UsageError("torsion_condition needs n >= 1");
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_condition_cache.find(n);
    if (it != g_condition_cache.end()) return it->second;
    auto ladder = condition_ladder(n);
    for (int k = 0; k <= n; ++k) g_condition_cache.emplace(k, ladder[k]);
    return ladder[static_cast<std::size_t>(n)];
}

Poly<Rational> torsion_condition_exact_order(int n) {
    QP cond = torsion_condition(n);
    if (cond.is_zero())
        throw DegenerateFamily("order condition is identically zero in lambda");
    for (int d = 2; d < n; ++d) {
        if (n % d != 0) continue;
        QP lower = torsion_condition(d);
        if (lower.degree() < 1) continue;
        for (;;) {
            QP g = poly_gcd(cond, lower);
            if (g.degree() < 1) break;
            cond = poly_quo(cond, g);
        }
        if (cond.degree() < 1) break;
    }
    if (cond.degree() < 1) return cond;
    return poly_radical(cond).monic();
}

bool certified_non_torsion(const Rational &lambda) {
    auto E = family_curve<Rational>(lambda);
    auto P = family_point<Rational>(lambda);
    // rational torsion orders are bounded by 12, so an exhaustive exact
    // scan up to 12 is conclusive for lambda in Q
    return !torsion_order(E, P, 12).has_value();
}

bool torsion_order_matches_numeric(const Cplx &lambda, int n, long digits) {
    const mpfr_prec_t bits = bits_for_digits(digits);
    auto E = family_curve<Cplx>(lambda);
    auto P = family_point<Cplx>(lambda);
    if (n == 1) return false; // P = (0,-1) is never the origin
    ECPoint<Cplx> W = ec_mul(E, n - 1, P, false);
    if (W.infinity) return false;
    Real tol = Real::pow10(-digits / 2, bits);
    Real scale = Real::from_long(1, bits) + abs(W.x) + abs(W.y);
    return abs(W.x - P.x) < tol * scale && abs(W.y + P.y) < tol * scale;
}

std::vector<TorsionParam> torsion_parameters(int n, long digits) {
    if (n < 2) throw UsageError("torsion_parameters needs n >= 2");
    std::vector<TorsionParam> out;
    QP cond = torsion_condition_exact_order(n);
    if (cond.degree() < 1) return out; // empty level (n = 2: y == -1 never vanishes)

    // exact rational parameters first
    QP rest = cond;
    for (const Rational &r : rational_roots(cond)) {
        TorsionParam tp;
        tp.order = n;
        tp.is_rational = true;
        tp.rational_value = r;
        auto E = family_curve<Rational>(r);
        auto P = family_point<Rational>(r);
        auto ord = torsion_order(E, P, n);
        tp.verified = ord.has_value() && *ord == n;
        tp.embeddings.push_back(Cplx::from_rational(r, bits_for_digits(digits)));
        if (tp.verified) out.push_back(std::move(tp));
        QP lin = qp({-r, Rational(1)});
        auto [q, rem] = poly_divrem(rest, lin);
        if (rem.is_zero()) rest = q;
    }

    if (rest.degree() >= 1) {
        TorsionParam tp;
        tp.order = n;
        tp.is_rational = false;
        tp.field = NumberField::make(rest);
        tp.conditional = !tp.field->certified_irreducible();
        tp.embeddings = tp.field->embeddings(digits);
        tp.verified = true;
        for (const Cplx &lam : tp.embeddings)
            if (!torsion_order_matches_numeric(lam, n, digits)) tp.verified = false;
        out.push_back(std::move(tp));
    }
    return out;
}

} // namespace torsionlab

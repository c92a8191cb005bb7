#ifndef TORSIONLAB_PELL_HPP
#define TORSIONLAB_PELL_HPP

#include <optional>
#include <string>
#include <vector>

#include "torsionlab/poly.hpp"

namespace torsionlab {

inline constexpr int k_default_cf_steps = 512;
inline constexpr std::size_t k_default_coeff_bit_cap = std::size_t(1) << 20;

template <class F>
struct PellSolution {
    Poly<F> X, Y;
};

// Continued-fraction expansion of sqrt(D) in K(x): complete quotients
// (P_i + sqrt(D))/Q_i with P_0 = 0, Q_0 = 1 and
//   a_i = poly part, P_{i+1} = a_i Q_i - P_i, Q_{i+1} = (D - P_{i+1}^2)/Q_i.
// Periodicity is declared at the first nonzero constant Q_i, i >= 1. A
// non-periodic run halts at max_steps or at the coefficient bit cap, and
// says which in halt_reason ("periodic" / "max_steps" / "coeff_bit_cap").
template <class F>
struct CFExpansion {
    Poly<F> D;
    std::vector<Poly<F>> partial_quotients;
    std::vector<std::pair<Poly<F>, Poly<F>>> pq_track; // (P_i, Q_i), i = 0..steps
    bool periodic = false;
    std::optional<int> period_start;
    std::optional<int> period_length;
    int steps_used = 0;
    std::string halt_reason;

    explicit CFExpansion(Poly<F> d) : D(std::move(d)) {}
};

namespace detail {

template <class F>
void cf_check_preconditions(const Poly<F> &D) {
    if (D.degree() < 2 || D.degree() % 2 != 0)
        throw OddDegree("cf_expand needs even degree >= 2");
    if (!poly_is_squarefree(D))
        throw NotSquarefree("cf_expand needs a squarefree discriminant");
}

} // namespace detail

// One CF step. Returns false (without advancing) if the bit cap is hit.
template <class F>
bool cf_step(const Poly<F> &D, const Poly<F> &A, Poly<F> &P, Poly<F> &Q, Poly<F> &a,
             std::size_t bit_cap) {
    a = poly_quo(P + A, Q);
    Poly<F> Pn = a * Q - P;
    auto [Qn, rem] = poly_divrem(D - Pn * Pn, Q);
    if (!rem.is_zero())
        throw InternalCheckFailed("CF invariant broken: Q_i does not divide D - P_{i+1}^2");
    if (Pn.max_coeff_bits() > bit_cap || Qn.max_coeff_bits() > bit_cap ||
        a.max_coeff_bits() > bit_cap)
        return false;
    P = std::move(Pn);
    Q = std::move(Qn);
    return true;
}

template <class F>
CFExpansion<F> cf_expand(const Poly<F> &D, int max_steps,
                         std::size_t bit_cap = k_default_coeff_bit_cap) {
    if (max_steps < 1) throw UsageError("cf_expand needs max_steps >= 1");
    detail::cf_check_preconditions(D);
    const Poly<F> A = poly_sqrt_floor(D); // throws on odd degree / non-square lc
    CFExpansion<F> e(D);
    Poly<F> P = Poly<F>::zero(D.sample());
    Poly<F> Q = Poly<F>::one(D.sample());
    e.pq_track.emplace_back(P, Q);
    for (int i = 0; i < max_steps; ++i) {
        Poly<F> a = Poly<F>::zero(D.sample());
        if (!cf_step(D, A, P, Q, a, bit_cap)) {
            e.halt_reason = "coeff_bit_cap";
            return e;
        }
        e.partial_quotients.push_back(a);
        e.pq_track.emplace_back(P, Q);
        e.steps_used = i + 1;
        if (Q.is_constant() && !Q.is_zero()) {
            e.periodic = true;
            e.period_start = 1;
            e.period_length = i + 1;
            e.halt_reason = "periodic";
            return e;
        }
    }
    e.halt_reason = "max_steps";
    return e;
}

// Fundamental solution of X^2 - D Y^2 = 1, if the expansion closes within
// the budget. At a constant Q_r the convergent (p_{r-1}, q_{r-1}) has norm
// kappa = (-1)^r Q_r; kappa = 1 finishes, a square kappa rescales, and
// otherwise the expansion continues to the next constant. After several
// constants the norm-1 unit is assembled algebraically from the kappa-unit.
template <class F>
std::optional<PellSolution<F>> pell_fundamental(
    const Poly<F> &D, int max_steps = k_default_cf_steps,
    std::size_t bit_cap = k_default_coeff_bit_cap) {
    detail::cf_check_preconditions(D);
    const Poly<F> A = poly_sqrt_floor(D);
    const F one = FieldTraits<F>::one(D.sample());
    Poly<F> P = Poly<F>::zero(D.sample());
    Poly<F> Q = Poly<F>::one(D.sample());
    Poly<F> pm1 = Poly<F>::one(D.sample()), pm2 = Poly<F>::zero(D.sample());
    Poly<F> qm1 = Poly<F>::zero(D.sample()), qm2 = Poly<F>::one(D.sample());
    // convergent p_i = a_i p_{i-1} + p_{i-2}; pm1 tracks p_{i-1}
    int constants_seen = 0;
    for (int i = 0; i < max_steps; ++i) {
        Poly<F> a = Poly<F>::zero(D.sample());
        if (!cf_step(D, A, P, Q, a, bit_cap)) return std::nullopt;
        Poly<F> p = a * pm1 + pm2;
        Poly<F> q = a * qm1 + qm2;
        // now p, q are the convergent at step i; Q is Q_{i+1}
        if (Q.is_constant() && !Q.is_zero()) {
            ++constants_seen;
            F kappa = Q.constant();
            if ((i + 1) % 2 != 0) kappa = FieldTraits<F>::zero(kappa) - kappa;
            auto check = [&](const Poly<F> &X, const Poly<F> &Y) {
                return (X * X - D * Y * Y - Poly<F>::one(D.sample())).is_zero();
            };
            if (FieldTraits<F>::is_zero(kappa - one)) {
                if (!check(p, q))
                    throw InternalCheckFailed("assembled Pell pair fails its identity");
                return PellSolution<F>{p, q};
            }
            if (auto s = FieldTraits<F>::sqrt(kappa)) {
                F inv_s = one / *s;
                PellSolution<F> sol{inv_s * p, inv_s * q};
                if (!check(sol.X, sol.Y))
                    throw InternalCheckFailed("rescaled Pell pair fails its identity");
                return sol;
            }
            if (constants_seen >= 3) {
                // (p + q sqrt(D))^2 / kappa has norm 1 exactly
                F inv_k = one / kappa;
                PellSolution<F> sol{inv_k * (p * p + D * q * q),
                                    (inv_k + inv_k) * (p * q)};
                if (!check(sol.X, sol.Y))
                    throw InternalCheckFailed("squared Pell pair fails its identity");
                return sol;
            }
        }
        pm2 = std::move(pm1);
        pm1 = std::move(p);
        qm2 = std::move(qm1);
        qm1 = std::move(q);
    }
    return std::nullopt;
}

// (X_n, Y_n) with X_n + Y_n sqrt(D) = (X + Y sqrt(D))^n, exact.
template <class F>
PellSolution<F> pell_power(const PellSolution<F> &sol, const Poly<F> &D, int n) {
    if (n < 1) throw UsageError("pell_power needs n >= 1");
    Poly<F> RX = Poly<F>::one(D.sample());
    Poly<F> RY = Poly<F>::zero(D.sample());
    Poly<F> BX = sol.X, BY = sol.Y;
    int k = n;
    while (k) {
        if (k & 1) {
            Poly<F> nx = RX * BX + D * (RY * BY);
            RY = RX * BY + RY * BX;
            RX = std::move(nx);
        }
        k >>= 1;
        if (!k) break;
        Poly<F> bx = BX * BX + D * (BY * BY);
        BY = (BX * BY) + (BX * BY);
        BX = std::move(bx);
    }
    if (!(RX * RX - D * RY * RY - Poly<F>::one(D.sample())).is_zero())
        throw InternalCheckFailed("pell_power result fails the Pell identity");
    return {RX, RY};
}

// Least n in [1, n_max] with Y_n(rho) = 0, i.e. solvability of
// X^2 - (x-rho)^2 Q(x) Y^2 = 1 within the power budget. The values Y_n(rho)
// are produced by the norm-form recurrence in the coefficient field, not by
// expanding polynomial powers.
template <class F>
std::optional<int> pell_square_factor(const F &rho, const Poly<F> &Q, int n_max,
                                      int cf_steps = k_default_cf_steps,
                                      std::size_t bit_cap = k_default_coeff_bit_cap) {
    if (n_max < 1) throw UsageError("pell_square_factor needs n_max >= 1");
    F qr = Q(rho);
    if (FieldTraits<F>::is_zero(qr))
        throw RhoOnCurveBranch("rho is a root of Q; the squared factor meets the curve");
    auto fund = pell_fundamental(Q, cf_steps, bit_cap);
    if (!fund)
        throw PellUnsolvable("no fundamental solution for Q within budget");
    const F u1 = fund->X(rho);
    const F w1 = fund->Y(rho);
    F u = u1, w = w1;
    for (int n = 1; n <= n_max; ++n) {
        if (FieldTraits<F>::is_zero(w)) return n;
        F un = u1 * u + qr * (w1 * w);
        F wn = u1 * w + w1 * u;
        u = std::move(un);
        w = std::move(wn);
    }
    return std::nullopt;
}

} // namespace torsionlab

#endif

#include "torsionlab/recognize.hpp"

#include <vector>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

BigInt rat_floor(const Rational &q) {
    BigInt z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z;
}

BigInt rat_ceil(const Rational &q) {
    BigInt z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z;
}

} // namespace

Rational simplest_fraction_between(const Rational &lo_in, const Rational &hi_in) {
    Rational lo = lo_in, hi = hi_in;
    if (lo > hi) std::swap(lo, hi);
    // Continued-fraction walk; the partial quotients shared by lo and hi
    // are forced, and the first place they differ admits an integer.
    std::vector<BigInt> quots;
    while (true) {
        BigInt c = rat_ceil(lo);
        if (Rational(c) <= hi) {
            quots.push_back(c);
            break;
        }
        BigInt fl = rat_floor(lo);
        quots.push_back(fl);
        Rational lo2 = Rational(1) / (hi - Rational(fl));
        Rational hi2 = Rational(1) / (lo - Rational(fl));
        lo = lo2;
        hi = hi2;
    }
    Rational acc(quots.back());
    for (std::size_t i = quots.size() - 1; i-- > 0;) {
        acc = Rational(quots[i]) + Rational(1) / acc;
    }
    acc.canonicalize();
    return acc;
}

std::optional<std::pair<BigInt, long>> rational_recognize(const Real &x, long m_max,
                                                          const Real &tol) {
    if (m_max < 1) throw UsageError("rational_recognize needs m_max >= 1");
    if (tol.sign() <= 0) throw UsageError("rational_recognize needs tol > 0");
    if (!x.is_finite()) return std::nullopt;
    const Rational xr = x.to_rational();
    Rational tr = tol.to_rational();
    for (int attempt = 0; attempt < 2; ++attempt) {
        Rational best = simplest_fraction_between(xr - tr, xr + tr);
        BigInt den = best.get_den();
        if (den > BigInt(m_max)) return std::nullopt;
        long m = static_cast<long>(den.get_si());
        // nearest k at the minimal denominator
        Rational scaled = xr * Rational(m);
        BigInt k = rat_floor(scaled);
        Rational frac = scaled - Rational(k);
        if (frac * 2 >= 1) k += 1;
        Rational err = xr - Rational(k, m);
        if (abs(err) < tol.to_rational()) return std::make_pair(k, m);
        // the closed-interval hit sat exactly on the boundary; shrink and
        // retry so the strict inequality decides
        tr = tr * Rational(1048575, 1048576);
    }
    return std::nullopt;
}

} // namespace torsionlab

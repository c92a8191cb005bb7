#ifndef TORSIONLAB_RATIONAL_HPP
#define TORSIONLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>

#include "torsionlab/errors.hpp"

namespace torsionlab {

// Exact rationals are GMP-backed; mpq_class keeps the canonical form
// (gcd(num, den) = 1, den > 0) that the Rational contract requires.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long n, long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline bool rat_is_zero(const Rational &q) { return sgn(q) == 0; }

inline BigInt rat_num(const Rational &q) { return q.get_num(); }
inline BigInt rat_den(const Rational &q) { return q.get_den(); }

// Total size in bits of numerator and denominator; used by the
// coefficient blow-up guard.
inline std::size_t rat_bits(const Rational &q) {
    return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

inline bool is_square(const BigInt &z) {
    return sgn(z) >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

// Exact square root in Q, if one exists.
inline std::optional<Rational> rat_sqrt(const Rational &q) {
    if (sgn(q) < 0) return std::nullopt;
    BigInt n = q.get_num(), d = q.get_den();
    if (!is_square(n) || !is_square(d)) return std::nullopt;
    BigInt rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rational &q) { return q.get_str(); }

// Parses "p", "-p/q", "p/q" with optional whitespace.
Rational parse_rational(const std::string &text);

} // namespace torsionlab

#endif

#ifndef TORSIONLAB_RECOGNIZE_HPP
#define TORSIONLAB_RECOGNIZE_HPP

#include <optional>
#include <utility>

#include "torsionlab/real.hpp"

namespace torsionlab {

// Fraction with the smallest denominator in the closed interval [lo, hi].
Rational simplest_fraction_between(const Rational &lo, const Rational &hi);

// Smallest m <= m_max admitting k with |x - k/m| < tol; among equal
// denominators the nearest k wins. Total function: nullopt when no
// denominator within the bound fits.
std::optional<std::pair<BigInt, long>> rational_recognize(const Real &x, long m_max,
                                                          const Real &tol);

} // namespace torsionlab

#endif

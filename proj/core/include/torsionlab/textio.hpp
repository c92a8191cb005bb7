#ifndef TORSIONLAB_TEXTIO_HPP
#define TORSIONLAB_TEXTIO_HPP

#include <string>

#include "torsionlab/numberfield.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

// Repo-wide polynomial text format: exact fractional coefficients, e.g.
// "x^4+x+1/4" or "-3/2*x^2+x-1". `var` is the accepted variable letter.
Poly<Rational> parse_poly(const std::string &text, char var = 'x');
std::string poly_str(const Poly<Rational> &p, char var = 'x');

// Number-field elements as "minpoly-in-t : poly-in-t", e.g.
// "t^2+1 : 2*t+1/3"; '@' is accepted as a separator synonym.
NFElem parse_nf_elem(const std::string &text);
std::string nf_elem_str(const NFElem &e);

std::string poly_str_nf(const Poly<NFElem> &p, char var = 'x');

} // namespace torsionlab

#endif

#ifndef TORSIONLAB_NUMBERFIELD_HPP
#define TORSIONLAB_NUMBERFIELD_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "torsionlab/cplx.hpp"
#include "torsionlab/poly.hpp"

namespace torsionlab {

class NFElem;

// Absolute number field Q[t]/(m(t)) presented by a monic polynomial over Q.
// Irreducibility is certified by a rational-root sieve plus irreducibility
// mod small good primes; when no certificate is found the field is kept as
// "presentation only" and downstream results are flagged conditional.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    static std::shared_ptr<NumberField> make(Poly<Rational> min_poly);

    const Poly<Rational> &min_poly() const { return m_min_poly; }
    std::size_t degree() const { return static_cast<std::size_t>(m_min_poly.degree()); }
    bool certified_irreducible() const { return m_certified; }

    // Complex roots of the minimal polynomial at >= `digits` accuracy,
    // in a deterministic order (sorted by real, then imaginary part).
    const std::vector<Cplx> &embeddings(long digits) const;

    NFElem gen() const;                 // the class of t
    NFElem from_rational(const Rational &q) const;
    NFElem element(std::vector<Rational> coords) const;

private:
    explicit NumberField(Poly<Rational> mp) : m_min_poly(std::move(mp)) {}
    Poly<Rational> m_min_poly;
    bool m_certified = false;
    mutable std::mutex m_mutex;
    mutable std::vector<Cplx> m_embeddings;
    mutable long m_embedding_digits = 0;
};

using NFPtr = std::shared_ptr<NumberField>;

// Element of a NumberField in the power basis 1, t, ..., t^(deg-1).
class NFElem {
public:
    NFElem(NFPtr parent, std::vector<Rational> coords);

    const NFPtr &parent() const { return m_parent; }
    const std::vector<Rational> &coords() const { return m_coords; }
    bool is_zero() const;
    bool is_rational() const;
    Rational rational_part() const { return m_coords[0]; }

    friend NFElem operator+(const NFElem &a, const NFElem &b);
    friend NFElem operator-(const NFElem &a, const NFElem &b);
    friend NFElem operator*(const NFElem &a, const NFElem &b);
    friend NFElem operator/(const NFElem &a, const NFElem &b);
    friend bool operator==(const NFElem &a, const NFElem &b);
    NFElem operator-() const;

    NFElem inverse() const;

    // Image under the parent's k-th embedding.
    Cplx embed(long digits, std::size_t embedding_index = 0) const;

    std::size_t bit_size() const;

private:
    NFPtr m_parent;
    std::vector<Rational> m_coords;
    static void check_same(const NFElem &a, const NFElem &b);
};

template <>
struct FieldTraits<NFElem> {
    static constexpr bool exact = true;
    static NFElem zero(const NFElem &s) { return s.parent()->from_rational(Rational(0)); }
    static NFElem one(const NFElem &s) { return s.parent()->from_rational(Rational(1)); }
    static bool is_zero(const NFElem &x) { return x.is_zero(); }
    // Square roots are only extracted from the rational subfield; that is
    // all the monic discriminants in this project need.
    static std::optional<NFElem> sqrt(const NFElem &x) {
        if (!x.is_rational()) return std::nullopt;
        auto r = rat_sqrt(x.rational_part());
        if (!r) return std::nullopt;
        return x.parent()->from_rational(*r);
    }
    static std::size_t bits(const NFElem &x) { return x.bit_size(); }
};

// Rational roots of a Q-polynomial (exact sieve over integer divisors),
// with multiplicity one each (call on a squarefree input for root sets).
std::vector<Rational> rational_roots(const Poly<Rational> &f);

// True if f (squarefree, deg >= 1) is irreducible mod p for some good
// prime among the first `tries` candidates; false means "not certified".
bool irreducible_mod_small_primes(const Poly<Rational> &f, int tries = 8);

} // namespace torsionlab

#endif

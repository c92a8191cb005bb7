#include "torsionlab/numberfield.hpp"

#include <algorithm>

#include "torsionlab/recognize.hpp"
#include "torsionlab/roots.hpp"

namespace torsionlab {

namespace {

// --- tiny GF(p) polynomial kit for the irreducibility certificate ---

using GFPoly = std::vector<long>; // lowest first, entries in [0, p)

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = a % p;
    if (nr < 0) nr += p;
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return t < 0 ? t + p : t;
}

void gf_trim(GFPoly &a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

GFPoly gf_mul(const GFPoly &a, const GFPoly &b, long p) {
    if (a.empty() || b.empty()) return {};
    GFPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    gf_trim(r);
    return r;
}

GFPoly gf_mod(GFPoly a, const GFPoly &m, long p) {
    gf_trim(a);
    long linv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        long c = a.back() * linv % p;
        std::size_t sh = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i)
            a[i + sh] = ((a[i + sh] - c * m[i]) % p + p) % p;
        gf_trim(a);
        if (a.empty()) break;
    }
    return a;
}

GFPoly gf_gcd(GFPoly a, GFPoly b, long p) {
    gf_trim(a);
    gf_trim(b);
    while (!b.empty()) {
        GFPoly r = gf_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

GFPoly gf_powmod_x(long e_base_p, long iterations, const GFPoly &m, long p) {
    // computes x^(p^iterations) mod m by repeated exponentiation by p
    GFPoly x = {0, 1};
    GFPoly acc = gf_mod(x, m, p);
    for (long it = 0; it < iterations; ++it) {
        // acc <- acc^p mod m by square and multiply on exponent p
        GFPoly result = {1};
        GFPoly base = acc;
        long e = e_base_p;
        while (e) {
            if (e & 1) result = gf_mod(gf_mul(result, base, p), m, p);
            base = gf_mod(gf_mul(base, base, p), m, p);
            e >>= 1;
        }
        acc = std::move(result);
    }
    return acc;
}

bool gf_irreducible(const GFPoly &f, long p) {
    const long n = static_cast<long>(f.size()) - 1;
    if (n <= 0) return false;
    if (n == 1) return true;
    // x^(p^n) == x mod f, and gcd(x^(p^(n/q)) - x, f) = 1 for primes q | n
    GFPoly xpn = gf_powmod_x(p, n, f, p);
    GFPoly x = gf_mod({0, 1}, f, p);
    GFPoly diff(std::max(xpn.size(), x.size()), 0);
    for (std::size_t i = 0; i < diff.size(); ++i) {
        long a = i < xpn.size() ? xpn[i] : 0;
        long b = i < x.size() ? x[i] : 0;
        diff[i] = ((a - b) % p + p) % p;
    }
    gf_trim(diff);
    if (!diff.empty()) return false;
    for (long q = 2; q <= n; ++q) {
        if (n % q != 0) continue;
        bool isprime = true;
        for (long d = 2; d * d <= q; ++d)
            if (q % d == 0) isprime = false;
        if (!isprime) continue;
        GFPoly xe = gf_powmod_x(p, n / q, f, p);
        GFPoly d2(std::max(xe.size(), std::size_t(2)), 0);
        for (std::size_t i = 0; i < d2.size(); ++i) {
            long a = i < xe.size() ? xe[i] : 0;
            long b = i == 1 ? 1 : 0;
            d2[i] = ((a - b) % p + p) % p;
        }
        gf_trim(d2);
        GFPoly g = gf_gcd(f, d2, p);
        if (static_cast<long>(g.size()) - 1 != 0) return false;
    }
    return true;
}

// Reduce a Q-polynomial mod p after clearing denominators; nullopt when p
// divides a denominator or the leading coefficient (a "bad" prime).
std::optional<GFPoly> reduce_mod(const Poly<Rational> &f, long p) {
    GFPoly r;
    r.reserve(f.size());
    for (const Rational &c : f.coeffs()) {
        BigInt den = rat_den(c);
        if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p)))
            return std::nullopt;
        long num = static_cast<long>(mpz_fdiv_ui(rat_num(c).get_mpz_t(),
                                                 static_cast<unsigned long>(p)));
        long dinv = inv_mod(static_cast<long>(
                                mpz_fdiv_ui(den.get_mpz_t(), static_cast<unsigned long>(p))),
                            p);
        r.push_back(num * dinv % p);
    }
    if (r.back() == 0) return std::nullopt;
    return r;
}

} // namespace

bool irreducible_mod_small_primes(const Poly<Rational> &f, int tries) {
    static const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    int used = 0;
    for (long p : primes) {
        if (used >= tries) break;
        auto fp = reduce_mod(f, p);
        if (!fp) continue;
        if (static_cast<long>(fp->size()) - 1 != f.degree()) continue;
        ++used;
        if (gf_irreducible(*fp, p)) return true;
    }
    return false;
}

std::vector<Rational> rational_roots(const Poly<Rational> &f) {
    if (f.is_zero()) throw DivideByZeroPoly("rational_roots of the zero polynomial");
    std::vector<Rational> out;
    if (f.degree() < 1) return out;
    // Locate roots numerically, recognize near-rational candidates of
    // bounded height, then certify by exact evaluation. A rational root of
    // height beyond the bound simply stays in the algebraic remainder.
    const long digits = 40;
    Real tol = Real::pow10(-25, bits_for_digits(digits));
    for (const Cplx &r : complex_roots(poly_radical(f), digits)) {
        if (abs(r.im) > tol) continue;
        auto rec = rational_recognize(r.re, 1000000, tol);
        if (!rec) continue;
        Rational cand(rec->first, rec->second);
        cand.canonicalize();
        if (std::find(out.begin(), out.end(), cand) != out.end()) continue;
        if (rat_is_zero(f(cand))) out.push_back(cand);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<NumberField> NumberField::make(Poly<Rational> min_poly) {
    if (min_poly.degree() < 1)
        throw DegenerateFamily("number field needs a minimal polynomial of degree >= 1");
    if (!rat_is_zero(min_poly.lc() - Rational(1)))
        min_poly = min_poly.monic();
    auto nf = std::shared_ptr<NumberField>(new NumberField(std::move(min_poly)));
    const auto &mp = nf->m_min_poly;
    if (mp.degree() == 1) {
        nf->m_certified = true;
    } else if (!rational_roots(mp).empty()) {
        nf->m_certified = false; // has a rational factor; keep as presentation
    } else if (mp.degree() <= 3) {
        nf->m_certified = true; // no rational root certifies degree 2 and 3
    } else {
        nf->m_certified = irreducible_mod_small_primes(mp);
    }
    return nf;
}

const std::vector<Cplx> &NumberField::embeddings(long digits) const {
    std::lock_guard<std::mutex> lock(m_mutex);
    if (m_embeddings.empty() || m_embedding_digits < digits) {
        m_embeddings = complex_roots(m_min_poly, std::max(digits, 30L));
        std::sort(m_embeddings.begin(), m_embeddings.end(),
                  [](const Cplx &a, const Cplx &b) {
                      int c = cmp(a.re, b.re);
                      if (c != 0) return c < 0;
                      return cmp(a.im, b.im) < 0;
                  });
        m_embedding_digits = std::max(digits, 30L);
    }
    return m_embeddings;
}

NFElem NumberField::gen() const {
    std::vector<Rational> c(degree(), Rational(0));
    if (degree() == 1) {
        // t = -constant term of the (monic, linear) minimal polynomial
        c[0] = -m_min_poly.constant();
    } else {
        c[1] = Rational(1);
    }
    return NFElem(std::const_pointer_cast<NumberField>(shared_from_this()), std::move(c));
}

NFElem NumberField::from_rational(const Rational &q) const {
    std::vector<Rational> c(degree(), Rational(0));
    c[0] = q;
    return NFElem(std::const_pointer_cast<NumberField>(shared_from_this()), std::move(c));
}

NFElem NumberField::element(std::vector<Rational> coords) const {
    coords.resize(degree(), Rational(0));
    return NFElem(std::const_pointer_cast<NumberField>(shared_from_this()), std::move(coords));
}

NFElem::NFElem(NFPtr parent, std::vector<Rational> coords)
    : m_parent(std::move(parent)), m_coords(std::move(coords)) {
    if (m_coords.size() != m_parent->degree())
        throw InternalCheckFailed("NFElem coordinate length mismatch");
}

void NFElem::check_same(const NFElem &a, const NFElem &b) {
    if (a.m_parent == b.m_parent) return;
    if (a.m_parent->min_poly() == b.m_parent->min_poly()) return;
    throw FieldMismatch("operands live in different number fields");
}

bool NFElem::is_zero() const {
    return std::all_of(m_coords.begin(), m_coords.end(), rat_is_zero);
}

bool NFElem::is_rational() const {
    for (std::size_t i = 1; i < m_coords.size(); ++i)
        if (!rat_is_zero(m_coords[i])) return false;
    return true;
}

NFElem operator+(const NFElem &a, const NFElem &b) {
    NFElem::check_same(a, b);
    std::vector<Rational> c(a.coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords()[i];
    return NFElem(a.parent(), std::move(c));
}

NFElem operator-(const NFElem &a, const NFElem &b) {
    NFElem::check_same(a, b);
    std::vector<Rational> c(a.coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords()[i];
    return NFElem(a.parent(), std::move(c));
}

NFElem NFElem::operator-() const {
    std::vector<Rational> c(m_coords);
    for (auto &x : c) x = -x;
    return NFElem(m_parent, std::move(c));
}

NFElem operator*(const NFElem &a, const NFElem &b) {
    NFElem::check_same(a, b);
    const std::size_t n = a.parent()->degree();
    std::vector<Rational> prod(2 * n - 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (rat_is_zero(a.coords()[i])) continue;
        for (std::size_t j = 0; j < n; ++j)
            prod[i + j] += a.coords()[i] * b.coords()[j];
    }
    // reduce mod the monic minimal polynomial
    const auto &mp = a.parent()->min_poly().coeffs();
    for (std::size_t k = prod.size(); k-- > n;) {
        Rational c = prod[k];
        if (rat_is_zero(c)) continue;
        prod[k] = 0;
        for (std::size_t i = 0; i < n; ++i) prod[k - n + i] -= c * mp[i];
    }
    prod.resize(n);
    return NFElem(a.parent(), std::move(prod));
}

NFElem NFElem::inverse() const {
    if (is_zero()) throw DivideByZeroPoly("inverse of zero in number field");
    // extended Euclid in Q[t] against the minimal polynomial
    using P = Poly<Rational>;
    P m = m_parent->min_poly();
    P a = P::from_coeffs(m_coords);
    P r0 = m, r1 = a;
    P s0 = P::zero(Rational(0)), s1 = P::one(Rational(0));
    while (!r1.is_zero() && r1.degree() > 0) {
        auto [q, r] = poly_divrem(r0, r1);
        P s2 = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.is_zero())
        throw DivideByZeroPoly(
            "element is a zero divisor (minimal polynomial not irreducible)");
    // r1 is a nonzero constant: a * s1 = r1 mod m
    Rational inv_c = Rational(1) / r1.constant();
    P inv = inv_c * s1;
    std::vector<Rational> c(m_parent->degree(), Rational(0));
    for (std::size_t i = 0; i < inv.size() && i < c.size(); ++i) c[i] = inv.coeffs()[i];
    return NFElem(m_parent, std::move(c));
}

NFElem operator/(const NFElem &a, const NFElem &b) { return a * b.inverse(); }

bool operator==(const NFElem &a, const NFElem &b) { return (a - b).is_zero(); }

Cplx NFElem::embed(long digits, std::size_t embedding_index) const {
    const auto &embs = m_parent->embeddings(digits);
    if (embedding_index >= embs.size())
        throw RootSelectorInvalid("embedding index out of range");
    const mpfr_prec_t bits = bits_for_digits(digits);
    Cplx t = embs[embedding_index];
    Cplx acc(bits);
    for (std::size_t i = m_coords.size(); i-- > 0;)
        acc = acc * t + Cplx::from_rational(m_coords[i], bits);
    return acc;
}

std::size_t NFElem::bit_size() const {
    std::size_t b = 0;
    for (const auto &c : m_coords) b = std::max(b, rat_bits(c));
    return b;
}

} // namespace torsionlab

#include <algorithm>

#include "torsionlab/family.hpp"
#include "torsionlab/quartic.hpp"
#include "torsionlab/roots.hpp"

namespace torsionlab {

namespace {

template <class F, class Map, class G>
QuarticModel<G> map_model(const QuarticModel<F> &M, Map f) {
    std::vector<G> qc;
    for (const auto &c : M.Q.coeffs()) qc.push_back(f(c));
    ShortWeierstrass<G> E{f(M.E.a), f(M.E.b)};
    ECPoint<G> inf_class = M.inf_class.infinity
                               ? ECPoint<G>::at_infinity(f(M.s))
                               : ECPoint<G>::affine(f(M.inf_class.x), f(M.inf_class.y));
    return {Poly<G>::from_coeffs(std::move(qc)), std::move(E), std::move(inf_class),
            f(M.s), f(M.p), f(M.r), f(M.c1), f(M.c0), f(M.alpha)};
}

} // namespace

AJLift abel_jacobi_rational(const QuarticModel<Rational> &M, const Rational &u0, int sign,
                            bool allow_extension) {
    if (sign != 1 && sign != -1) throw UsageError("branch sign must be +1 or -1");
    Rational d = M.Q(u0);
    AJLift out;
    if (auto sr = rat_sqrt(d)) {
        out.in_base_field = true;
        Rational v0 = sign > 0 ? *sr : -*sr;
        out.point_q = aj_point(M, u0, v0);
        return out;
    }
    if (!allow_extension)
        throw BranchNotInField("sqrt(Q(u0)) is irrational and extension building is disabled");
    out.in_base_field = false;
    // w^2 = Q(u0)
    out.field = NumberField::make(
        Poly<Rational>::from_coeffs({-d, Rational(0), Rational(1)}));
    auto lift = [&](const Rational &q) { return out.field->from_rational(q); };
    auto MN = map_model<Rational, decltype(lift), NFElem>(M, lift);
    NFElem w = out.field->gen();
    NFElem v0 = sign > 0 ? w : -w;
    out.point_nf = aj_point(MN, lift(u0), v0);
    return out;
}

namespace {

// real roots first (ascending), then complex by (re, im)
std::vector<Cplx> sorted_real_first(std::vector<Cplx> roots, const Real &tol, int *n_real) {
    std::vector<Cplx> reals, rest;
    for (auto &r : roots) {
        if (abs(r.im) < tol)
            reals.push_back(Cplx{r.re, Real(r.im.bits())});
        else
            rest.push_back(r);
    }
    auto lex = [](const Cplx &a, const Cplx &b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    };
    std::sort(reals.begin(), reals.end(), lex);
    std::sort(rest.begin(), rest.end(), lex);
    if (n_real) *n_real = static_cast<int>(reals.size());
    reals.insert(reals.end(), rest.begin(), rest.end());
    return reals;
}

} // namespace

RhoCaseII rho_case_ii(const Cplx &lam, int m_choice, int e3_choice, long digits) {
    const mpfr_prec_t bits = bits_for_digits(digits + 10);
    const Real tol_real = Real::pow10(-digits / 2, bits);
    RhoCaseII out;

    // (1) m^4 - 8m + 16 lambda = 0
    std::vector<Cplx> mc = {mul_si(lam, 16), Cplx::from_long(-8, 0, bits), Cplx(bits),
                            Cplx(bits), Cplx::from_long(1, 0, bits)};
    auto mroots = sorted_real_first(aberth_roots(mc), tol_real, &out.n_real_m_roots);
    if (m_choice < 0 || m_choice >= static_cast<int>(mroots.size()))
        throw RootSelectorInvalid("m-root selector out of range");
    const Cplx m = mroots[static_cast<std::size_t>(m_choice)];
    out.m_root = m;

    // (2) half point of p_W on W_E: (m^2/8, -m^3/8 + 1/4)
    Cplx m2 = m * m, m3 = m2 * m;
    out.half_pw_x = div_si(m2, 8);
    out.half_pw_y = div_si(-m3, 8) + Cplx{Real::from_rational(rat(1, 4), bits), Real(bits)};

    // (3) 3-torsion points of W~: psi_3 = 3X^4 + 6aX^2 + 12bX - a^2, a = -4 lambda, b = 1
    Cplx a = mul_si(lam, -4);
    std::vector<Cplx> psi3 = {-(a * a), Cplx::from_long(12, 0, bits), mul_si(a, 6),
                              Cplx(bits), Cplx::from_long(3, 0, bits)};
    auto xroots = aberth_roots(psi3);
    std::vector<Cplx> e3_points;
    {
        std::vector<Cplx> real_pts, cplx_pts;
        for (const Cplx &X : xroots) {
            Cplx Y2 = X * X * X + a * X + Cplx::from_long(1, 0, bits);
            Cplx Y = sqrt(Y2);
            for (const Cplx &yy : {Y, -Y}) {
                bool is_real = abs(X.im) < tol_real && abs(yy.im) < tol_real;
                (is_real ? real_pts : cplx_pts).push_back(X);
                (is_real ? real_pts : cplx_pts).push_back(yy);
            }
        }
        // interleaved (X, Y) flat lists; stitch into point list real-first
        auto stitch = [&](std::vector<Cplx> &flat) {
            for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
                e3_points.push_back(flat[i]);
                e3_points.push_back(flat[i + 1]);
            }
        };
        out.n_real_e3_points = static_cast<int>(real_pts.size() / 2);
        stitch(real_pts);
        stitch(cplx_pts);
    }
    const int n_pts = static_cast<int>(e3_points.size() / 2);
    if (e3_choice < 0 || e3_choice >= n_pts)
        throw RootSelectorInvalid("e3 selector out of range");
    out.e3_x = e3_points[static_cast<std::size_t>(2 * e3_choice)];
    out.e3_y = e3_points[static_cast<std::size_t>(2 * e3_choice) + 1];

    // (4) add on W~ coordinates (X = 4x, Y = 4y), then return to (x, y)
    auto Et = family_curve<Cplx>(lam);
    ECPoint<Cplx> H = ECPoint<Cplx>::affine(mul_si(out.half_pw_x, 4), mul_si(out.half_pw_y, 4));
    ECPoint<Cplx> T = ECPoint<Cplx>::affine(out.e3_x, out.e3_y);
    // doubling the half point must land back on (0, -1)
    ECPoint<Cplx> D2 = ec_add(Et, H, H, false);
    Real herr = abs(D2.x) + abs(D2.y + Cplx::from_long(1, 0, bits));
    if (!(herr < Real::pow10(-digits / 3, bits)))
        throw InternalCheckFailed("half-point of p_W failed its doubling check");
    ECPoint<Cplx> S = ec_add(Et, H, T, false);
    if (S.infinity) throw DenominatorZero("1/2 p_W + e_3 is the origin");
    Cplx xs = div_si(S.x, 4), ys = div_si(S.y, 4);

    // (5) rho = (4 y - 1)/(8 x) at the summed point
    Cplx den = mul_si(xs, 8);
    if (abs(den) < tol_real)
        throw DenominatorZero("x(1/2 p_W + e_3) vanishes");
    out.rho = (mul_si(ys, 4) - Cplx::from_long(1, 0, bits)) / den;
    return out;
}

} // namespace torsionlab

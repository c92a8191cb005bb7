#include "torsionlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsionlab/family.hpp"
#include "torsionlab/pell.hpp"
#include "torsionlab/quartic.hpp"
#include "torsionlab/recognize.hpp"
#include "torsionlab/ribet.hpp"
#include "torsionlab/scan.hpp"
#include "torsionlab/textio.hpp"

namespace torsionlab::cli {

using nlohmann::json;

namespace {

struct Ctx {
    Config cfg;
    std::string config_file;
    json result;
    bool has_result = false;

    void emit(json r) {
        result = std::move(r);
        has_result = true;
    }
};

std::string print_nf_coords(const NFElem &e) {
    return poly_str(Poly<Rational>::from_coeffs(e.coords()), 't');
}

json ecq_json(const ECPoint<Rational> &P) {
    if (P.infinity) return "O";
    return {{"x", rat_str(P.x)}, {"y", rat_str(P.y)}};
}

Cplx arg_cplx(const std::string &s, long digits) {
    return parse_cplx(s, bits_for_digits(digits + 25));
}

json torsion_param_json(const TorsionParam &tp, long digits) {
    json j;
    j["order"] = tp.order;
    j["verified"] = tp.verified;
    if (tp.is_rational) {
        j["type"] = "rational";
        j["lambda"] = rat_str(tp.rational_value);
        j["minpoly"] = poly_str(
            Poly<Rational>::from_coeffs({-tp.rational_value, Rational(1)}), 't');
    } else {
        j["type"] = "algebraic";
        j["minpoly"] = poly_str(tp.field->min_poly(), 't');
        j["certified_irreducible"] = tp.field->certified_irreducible();
        j["conditional"] = tp.conditional;
    }
    json embs = json::array();
    for (const auto &e : tp.embeddings) embs.push_back(e.str(std::min(digits, 40L)));
    j["embeddings"] = embs;
    return j;
}

// the GBetti record: coordinates as decimal strings plus the joint
// rational recognition at a common denominator, when one exists
nlohmann::json gbetti_json(const GBetti &B, const Lattice &L, long m_max, long digits) {
    json j = {{"a_re", B.a.re.str(digits)},
              {"a_im", B.a.im.str(digits)},
              {"b1", B.b1.str(digits)},
              {"b2", B.b2.str(digits)},
              {"prec", digits}};
    j["recognized"] = nullptr;
    Real tol = Real::pow10(-L.digits / 2, L.bits());
    if (abs(B.a.im) < tol) {
        auto ra = rational_recognize(B.a.re, m_max, tol);
        auto r1 = rational_recognize(B.b1, m_max, tol);
        auto r2 = rational_recognize(B.b2, m_max, tol);
        if (ra && r1 && r2) {
            long m = std::lcm(std::lcm(ra->second, r1->second), r2->second);
            if (m <= m_max) {
                auto scale = [m](const std::pair<BigInt, long> &kd) {
                    return BigInt(kd.first * (m / kd.second)).get_str();
                };
                j["recognized"] = {{"m", m},
                                   {"k0", scale(*ra)},
                                   {"k1", scale(*r1)},
                                   {"k2", scale(*r2)}};
            }
        }
    }
    return j;
}

std::shared_ptr<const Lattice> lattice_from_args(const std::string &g2s,
                                                 const std::string &g3s, long digits) {
    return lattice_cached(arg_cplx(g2s, digits), arg_cplx(g3s, digits), digits);
}

void setup_commands(CLI::App &app, Ctx &ctx) {
    app.require_subcommand(1);

    // ---- pell ----
    auto *pell = app.add_subcommand("pell", "polynomial Pell equations X^2 - D Y^2 = 1");
    pell->require_subcommand(1);
    {
        auto *solve = pell->add_subcommand("solve", "fundamental solution for D");
        auto D = std::make_shared<std::string>();
        auto steps = std::make_shared<int>(0);
        solve->add_option("--D", *D, "discriminant polynomial, e.g. \"x^4+x+1/4\"")
            ->required();
        solve->add_option("--max-steps", *steps, "expansion budget (default from config)");
        solve->callback([&ctx, D, steps] {
            auto Dp = parse_poly(*D);
            int budget = *steps > 0 ? *steps : ctx.cfg.cf_max_steps;
            auto e = cf_expand(Dp, budget, ctx.cfg.coeff_bit_cap);
            json r = {{"D", poly_str(Dp)},
                      {"periodic", e.periodic},
                      {"steps_used", e.steps_used},
                      {"halt_reason", e.halt_reason}};
            if (auto sol = pell_fundamental(Dp, budget, ctx.cfg.coeff_bit_cap)) {
                r["solvable"] = true;
                r["X"] = poly_str(sol->X);
                r["Y"] = poly_str(sol->Y);
            } else {
                r["solvable"] = false;
            }
            ctx.emit(r);
        });

        auto *power = pell->add_subcommand("power", "n-th power of the fundamental solution");
        auto Dp = std::make_shared<std::string>();
        auto n = std::make_shared<int>(1);
        power->add_option("--D", *Dp)->required();
        power->add_option("--n", *n, "power")->required();
        power->callback([&ctx, Dp, n] {
            auto D = parse_poly(*Dp);
            auto sol = pell_fundamental(D, ctx.cfg.cf_max_steps, ctx.cfg.coeff_bit_cap);
            if (!sol) throw PellUnsolvable("no fundamental solution within budget");
            auto p = pell_power(*sol, D, *n);
            ctx.emit({{"D", poly_str(D)},
                      {"n", *n},
                      {"X", poly_str(p.X)},
                      {"Y", poly_str(p.Y)}});
        });

        auto *sq = pell->add_subcommand(
            "squared", "least n with Y_n(rho) = 0: X^2 - (x-rho)^2 Q Y^2 = 1");
        auto Q = std::make_shared<std::string>();
        auto rho = std::make_shared<std::string>("0");
        auto nmax = std::make_shared<int>(20);
        sq->add_option("--Q", *Q, "squarefree quartic")->required();
        sq->add_option("--rho", *rho, "rational rho (default 0)");
        sq->add_option("--n-max", *nmax);
        sq->callback([&ctx, Q, rho, nmax] {
            auto Qp = parse_poly(*Q);
            auto hit = pell_square_factor(parse_rational(*rho), Qp, *nmax,
                                          ctx.cfg.cf_max_steps, ctx.cfg.coeff_bit_cap);
            json r = {{"Q", poly_str(Qp)}, {"rho", *rho}, {"n_max", *nmax}};
            r["hit_n"] = hit ? json(*hit) : json(nullptr);
            ctx.emit(r);
        });
    }

    // ---- torsion ----
    auto *tor = app.add_subcommand("torsion", "torsion parameters of the quartic family");
    tor->require_subcommand(1);
    {
        auto *params = tor->add_subcommand("params", "all lambda with exact order n");
        auto order = std::make_shared<int>();
        params->add_option("--order", *order, "exact torsion order n >= 2")->required();
        params->callback([&ctx, order] {
            json list = json::array();
            for (const auto &tp : torsion_parameters(*order, ctx.cfg.precision_digits))
                list.push_back(torsion_param_json(tp, ctx.cfg.precision_digits));
            ctx.emit({{"order", *order},
                      {"condition", poly_str(torsion_condition_exact_order(*order), 'l')},
                      {"parameters", list}});
        });

        auto *ord = tor->add_subcommand("order", "torsion order of a point");
        auto lam = std::make_shared<std::string>();
        auto a = std::make_shared<std::string>(), b = std::make_shared<std::string>();
        auto px = std::make_shared<std::string>(), py = std::make_shared<std::string>();
        auto nmax = std::make_shared<int>(30);
        ord->add_option("--lambda", *lam, "family member Y^2 = X^3 - 4 lambda X + 1 at P = (0,-1)");
        ord->add_option("--a", *a, "curve coefficient a (with --b, --px, --py)");
        ord->add_option("--b", *b);
        ord->add_option("--px", *px);
        ord->add_option("--py", *py);
        ord->add_option("--n-max", *nmax);
        ord->callback([&ctx, lam, a, b, px, py, nmax] {
            json r;
            std::optional<int> got;
            if (!lam->empty()) {
                Rational l = parse_rational(*lam);
                got = torsion_order(family_curve<Rational>(l), family_point<Rational>(l),
                                    *nmax);
                r["lambda"] = rat_str(l);
                r["certified_non_torsion"] = !got && certified_non_torsion(l);
            } else {
                if (a->empty() || b->empty() || px->empty() || py->empty())
                    throw UsageError("need --lambda or all of --a --b --px --py");
                auto E = make_curve(parse_rational(*a), parse_rational(*b));
                auto P = ECPoint<Rational>::affine(parse_rational(*px), parse_rational(*py));
                got = torsion_order(E, P, *nmax);
            }
            r["n_max"] = *nmax;
            r["order"] = got ? json(*got) : json(nullptr);
            ctx.emit(r);
        });
    }

    // ---- quartic / jacobian ----
    auto *quart = app.add_subcommand("quartic", "quartic curve v^2 = Q(u) machinery");
    quart->require_subcommand(1);
    {
        auto *jac = quart->add_subcommand("jacobian", "Weierstrass model and divisor class");
        auto Q = std::make_shared<std::string>();
        jac->add_option("--Q", *Q, "squarefree quartic with square leading coefficient")
            ->required();
        jac->callback([&ctx, Q] {
            auto M = quartic_jacobian(parse_poly(*Q));
            ctx.emit({{"Q", poly_str(M.Q)},
                      {"a", rat_str(M.E.a)},
                      {"b", rat_str(M.E.b)},
                      {"inf_class", ecq_json(M.inf_class)}});
        });

        auto *aj = quart->add_subcommand("aj", "Abel-Jacobi image of (u0, sign*sqrt(Q(u0)))");
        auto Q2 = std::make_shared<std::string>();
        auto u0 = std::make_shared<std::string>();
        auto sign = std::make_shared<int>(1);
        aj->add_option("--Q", *Q2)->required();
        aj->add_option("--u0", *u0)->required();
        aj->add_option("--sign", *sign, "+1 or -1 branch");
        aj->callback([&ctx, Q2, u0, sign] {
            auto M = quartic_jacobian(parse_poly(*Q2));
            auto lift = abel_jacobi_rational(M, parse_rational(*u0), *sign);
            json r = {{"Q", poly_str(M.Q)}, {"u0", *u0}, {"sign", *sign}};
            if (lift.in_base_field) {
                r["field"] = "Q";
                r["point"] = ecq_json(lift.point_q);
            } else {
                r["field"] = poly_str(lift.field->min_poly(), 't');
                r["point"] = {{"x", print_nf_coords(lift.point_nf->x)},
                              {"y", print_nf_coords(lift.point_nf->y)}};
            }
            ctx.emit(r);
        });

        auto *rho = quart->add_subcommand("rho", "the squared-linear-factor rho(lambda), case ii");
        auto lam = std::make_shared<std::string>();
        auto msel = std::make_shared<int>(0), esel = std::make_shared<int>(0);
        rho->add_option("--lambda", *lam, "complex lambda, e.g. \"1/4\" or \"0.25+0i\"")
            ->required();
        rho->add_option("--m-root", *msel, "selector into the sorted m-root list");
        rho->add_option("--e3", *esel, "selector into the sorted 3-torsion list");
        rho->callback([&ctx, lam, msel, esel] {
            long digits = ctx.cfg.precision_digits;
            Cplx l = arg_cplx(*lam, digits);
            auto rc = rho_case_ii(l, *msel, *esel, digits);
            ctx.emit({{"lambda", l.str(30)},
                      {"rho", rc.rho.str(digits)},
                      {"m_root", rc.m_root.str(30)},
                      {"half_pw", {{"x", rc.half_pw_x.str(30)}, {"y", rc.half_pw_y.str(30)}}},
                      {"e3", {{"x", rc.e3_x.str(30)}, {"y", rc.e3_y.str(30)}}},
                      {"n_real_m_roots", rc.n_real_m_roots}});
        });
    }

    // ---- lattice ----
    auto *lat = app.add_subcommand("lattice", "periods and Weierstrass functions");
    lat->require_subcommand(1);
    {
        auto *per = lat->add_subcommand("periods", "periods/quasi-periods from g2, g3");
        auto g2 = std::make_shared<std::string>(), g3 = std::make_shared<std::string>();
        auto prec = std::make_shared<long>(0);
        per->add_option("--g2", *g2)->required();
        per->add_option("--g3", *g3)->required();
        per->add_option("--prec", *prec, "decimal digits");
        per->callback([&ctx, g2, g3, prec] {
            long digits = *prec > 0 ? *prec : ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            ctx.emit({{"g2", L->g2.str(digits)},
                      {"g3", L->g3.str(digits)},
                      {"omega1", L->omega1.str(digits)},
                      {"omega2", L->omega2.str(digits)},
                      {"eta1", L->eta1.str(digits)},
                      {"eta2", L->eta2.str(digits)},
                      {"tau", L->tau.str(digits)},
                      {"prec", digits}});
        });

        auto *ev = lat->add_subcommand("eval", "wp, wp', zeta, sigma at z");
        auto eg2 = std::make_shared<std::string>(), eg3 = std::make_shared<std::string>();
        auto z = std::make_shared<std::string>();
        auto eprec = std::make_shared<long>(0);
        ev->add_option("--g2", *eg2)->required();
        ev->add_option("--g3", *eg3)->required();
        ev->add_option("--z", *z)->required();
        ev->add_option("--prec", *eprec);
        ev->callback([&ctx, eg2, eg3, z, eprec] {
            long digits = *eprec > 0 ? *eprec : ctx.cfg.precision_digits;
            auto L = lattice_from_args(*eg2, *eg3, digits);
            Cplx zz = arg_cplx(*z, digits);
            auto [p, pp] = wp(*L, zz);
            ctx.emit({{"z", zz.str(digits)},
                      {"wp", p.str(digits)},
                      {"wp_prime", pp.str(digits)},
                      {"zeta", wzeta(*L, zz).str(digits)},
                      {"sigma", wsigma(*L, zz).str(digits)}});
        });

        auto *lg = lat->add_subcommand("elog", "elliptic logarithm of a point");
        auto lg2 = std::make_shared<std::string>(), lg3 = std::make_shared<std::string>();
        auto x = std::make_shared<std::string>(), y = std::make_shared<std::string>();
        auto lprec = std::make_shared<long>(0);
        lg->add_option("--g2", *lg2)->required();
        lg->add_option("--g3", *lg3)->required();
        lg->add_option("--x", *x, "x on y^2 = 4x^3 - g2 x - g3")->required();
        lg->add_option("--y", *y)->required();
        lg->add_option("--prec", *lprec);
        lg->callback([&ctx, lg2, lg3, x, y, lprec] {
            long digits = *lprec > 0 ? *lprec : ctx.cfg.precision_digits;
            auto L = lattice_from_args(*lg2, *lg3, digits);
            Cplx u = elog(*L, CPoint::affine(arg_cplx(*x, digits), arg_cplx(*y, digits)));
            EBetti b = betti_e(*L, u);
            ctx.emit({{"elog", u.str(digits)},
                      {"b1", b.b1.str(digits)},
                      {"b2", b.b2.str(digits)}});
        });
    }

    // ---- gext ----
    auto *gx = app.add_subcommand("gext", "semi-abelian extension machinery");
    gx->require_subcommand(1);
    {
        auto g2 = std::make_shared<std::string>("4"), g3 = std::make_shared<std::string>("0");
        auto addcurve = [&](CLI::App *c) {
            c->add_option("--g2", *g2, "base curve g2 (default lemniscatic)");
            c->add_option("--g3", *g3, "base curve g3");
        };

        auto *mk = gx->add_subcommand("make", "extension data from v = log_E(q)");
        auto v = std::make_shared<std::string>();
        addcurve(mk);
        mk->add_option("--v", *v)->required();
        mk->callback([&ctx, g2, g3, v] {
            long digits = ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            auto ext = extension_make(L, arg_cplx(*v, digits));
            ctx.emit({{"v", ext.v.str(digits)},
                      {"zeta_v", ext.zeta_v.str(digits)},
                      {"kappa1", ext.kappa1.str(digits)},
                      {"kappa2", ext.kappa2.str(digits)},
                      {"pi0", {"2*pi*i", "0"}},
                      {"pi1", {ext.kappa1.str(digits), L->omega1.str(digits)}},
                      {"pi2", {ext.kappa2.str(digits), L->omega2.str(digits)}}});
        });

        auto *lg = gx->add_subcommand("log", "log_G of a point (delta, (px, py))");
        auto v2 = std::make_shared<std::string>(), delta = std::make_shared<std::string>();
        auto px = std::make_shared<std::string>(), py = std::make_shared<std::string>();
        auto uhint = std::make_shared<std::string>();
        addcurve(lg);
        lg->add_option("--v", *v2)->required();
        lg->add_option("--delta", *delta)->required();
        lg->add_option("--px", *px)->required();
        lg->add_option("--py", *py)->required();
        lg->add_option("--u-hint", *uhint, "elliptic log determination (default elog)");
        lg->callback([&ctx, g2, g3, v2, delta, px, py, uhint] {
            long digits = ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            auto ext = extension_make(L, arg_cplx(*v2, digits));
            CPoint P = CPoint::affine(arg_cplx(*px, digits), arg_cplx(*py, digits));
            Cplx hint = uhint->empty() ? elog(*L, P) : arg_cplx(*uhint, digits);
            GPoint s{arg_cplx(*delta, digits), P};
            GLog U = g_log(ext, s, hint);
            GBetti B = betti_g(ext, U);
            ctx.emit({{"t", U.t.str(digits)},
                      {"z", U.z.str(digits)},
                      {"a", B.a.str(digits)},
                      {"b1", B.b1.str(digits)},
                      {"b2", B.b2.str(digits)}});
        });

        auto *bt = gx->add_subcommand("betti", "Betti presentation of (t, z)");
        auto v3 = std::make_shared<std::string>(), t = std::make_shared<std::string>(),
             z = std::make_shared<std::string>();
        auto mrec = std::make_shared<long>(64);
        addcurve(bt);
        bt->add_option("--v", *v3)->required();
        bt->add_option("--t", *t)->required();
        bt->add_option("--z", *z)->required();
        bt->add_option("--m-max", *mrec, "recognition bound for the coordinates");
        bt->callback([&ctx, g2, g3, v3, t, z, mrec] {
            long digits = ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            auto ext = extension_make(L, arg_cplx(*v3, digits));
            GBetti B = betti_g(ext, GLog{arg_cplx(*t, digits), arg_cplx(*z, digits)});
            ctx.emit(gbetti_json(B, *L, *mrec, digits));
        });

        auto *tt = gx->add_subcommand("torsion", "least m with Betti coordinates in Q_m");
        auto v4 = std::make_shared<std::string>(), delta2 = std::make_shared<std::string>();
        auto px2 = std::make_shared<std::string>(), py2 = std::make_shared<std::string>();
        auto mmax = std::make_shared<long>(50);
        addcurve(tt);
        tt->add_option("--v", *v4)->required();
        tt->add_option("--delta", *delta2)->required();
        tt->add_option("--px", *px2)->required();
        tt->add_option("--py", *py2)->required();
        tt->add_option("--m-max", *mmax);
        tt->callback([&ctx, g2, g3, v4, delta2, px2, py2, mmax] {
            long digits = ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            auto ext = extension_make(L, arg_cplx(*v4, digits));
            CPoint P = CPoint::affine(arg_cplx(*px2, digits), arg_cplx(*py2, digits));
            GPoint s{arg_cplx(*delta2, digits), P};
            auto m = g_torsion_test(ext, s, elog(*L, P), *mmax);
            ctx.emit({{"m_max", *mmax}, {"order", m ? json(*m) : json(nullptr)}});
        });
    }

    // ---- ribet ----
    auto *rb = app.add_subcommand("ribet", "Ribet section machinery");
    rb->require_subcommand(1);
    {
        auto g2 = std::make_shared<std::string>("4"), g3 = std::make_shared<std::string>("0");
        auto alpha = std::make_shared<std::string>("2i");

        auto *dl = rb->add_subcommand("delta", "delta and logarithm of the Ribet section");
        auto u = std::make_shared<std::string>();
        dl->add_option("--g2", *g2);
        dl->add_option("--g3", *g3);
        dl->add_option("--alpha", *alpha, "purely imaginary CM multiplier in 2O");
        dl->add_option("--u", *u, "base logarithm")->required();
        dl->callback([&ctx, g2, g3, alpha, u] {
            long digits = ctx.cfg.precision_digits;
            auto L = lattice_from_args(*g2, *g3, digits);
            auto rd = ribet_delta(*L, arg_cplx(*alpha, digits), arg_cplx(*u, digits));
            ctx.emit({{"delta", rd.delta.str(digits)},
                      {"s2", rd.s2.str(digits)},
                      {"log_t", rd.log.t.str(digits)},
                      {"log_z", rd.log.z.str(digits)}});
        });

        auto *ck = rb->add_subcommand("check", "n^2 law at u = (k1 w1 + k2 w2)/n");
        auto n = std::make_shared<long>(), k1 = std::make_shared<long>(),
             k2 = std::make_shared<long>();
        ck->add_option("--g2", *g2);
        ck->add_option("--g3", *g3);
        ck->add_option("--alpha", *alpha);
        ck->add_option("--n", *n)->required();
        ck->add_option("--k1", *k1)->required();
        ck->add_option("--k2", *k2)->required();
        ck->callback([&ctx, g2, g3, alpha, n, k1, k2] {
            long digits = std::max(ctx.cfg.precision_digits, 80L);
            auto L = lattice_from_args(*g2, *g3, digits);
            auto r = ribet_order_check(*L, arg_cplx(*alpha, digits), *k1, *k2, *n);
            ctx.emit({{"n", *n},
                      {"k1", *k1},
                      {"k2", *k2},
                      {"m", r.m},
                      {"divides_n2", r.divides_n2},
                      {"used_ray_limit", r.used_ray_limit},
                      {"betti", gbetti_json(r.betti, *L, 4 * *n * *n, 30)}});
        });
    }

    // ---- scans ----
    auto *scan = app.add_subcommand("scan", "reproducible experiment runners");
    scan->require_subcommand(1);
    {
        auto csv_path = std::make_shared<std::string>();
        auto emit_report = [&ctx, csv_path](const ScanReport &rep) {
            if (!csv_path->empty()) {
                std::ofstream f(*csv_path);
                if (!f) throw UsageError("cannot write CSV file: " + *csv_path);
                f << rep.to_csv();
            }
            ctx.emit(rep.to_json());
        };

        auto *pt = scan->add_subcommand("pell-torsion", "Pell <-> torsion equivalence");
        auto nmax = std::make_shared<int>(6);
        auto budget = std::make_shared<int>(0);
        pt->add_option("--n-max", *nmax);
        pt->add_option("--cf-budget", *budget);
        pt->add_option("--csv", *csv_path, "also write rows as CSV");
        pt->callback([&ctx, nmax, budget, emit_report] {
            int b = *budget > 0 ? *budget : ctx.cfg.cf_max_steps;
            emit_report(pell_torsion_scan(*nmax, b, ctx.cfg));
        });

        auto *t4 = scan->add_subcommand("theorem4", "squared-linear-factor search");
        auto cid = std::make_shared<std::string>("i");
        auto nmax2 = std::make_shared<int>(6);
        auto kmax = std::make_shared<int>(20);
        t4->add_option("--case", *cid, "i or ii");
        t4->add_option("--n-max", *nmax2);
        t4->add_option("--k-max", *kmax);
        t4->add_option("--csv", *csv_path, "also write rows as CSV");
        t4->callback([cid, nmax2, kmax, emit_report, &ctx] {
            emit_report(theorem4_scan(*cid, *nmax2, *kmax, ctx.cfg));
        });

        auto *ri = scan->add_subcommand("ribet", "n^2 law over primitive torsion");
        auto nmax3 = std::make_shared<int>(6);
        ri->add_option("--n-max", *nmax3);
        ri->add_option("--csv", *csv_path, "also write rows as CSV");
        ri->callback([nmax3, emit_report, &ctx] { emit_report(ribet_scan(*nmax3, ctx.cfg)); });

        auto *su = scan->add_subcommand("surface", "lift statistics over torsion sets");
        auto fam = std::make_shared<std::string>("lemniscatic");
        auto mmax = std::make_shared<int>(8);
        su->add_option("--family", *fam, "lemniscatic or quartic");
        su->add_option("--m-max", *mmax);
        su->add_option("--csv", *csv_path, "also write rows as CSV");
        su->callback([fam, mmax, emit_report, &ctx] {
            emit_report(surface_count(*fam, *mmax, ctx.cfg));
        });
    }

    // ---- replay ----
    auto *rp = app.add_subcommand("replay", "re-run one serialized certificate row");
    auto file = std::make_shared<std::string>();
    rp->add_option("certificate", *file, "row JSON file")->required();
    rp->callback([&ctx, file] {
        std::ifstream in(*file);
        if (!in) throw UsageError("cannot open certificate: " + *file);
        json row;
        in >> row;
        ctx.emit(replay_row(row, ctx.cfg));
    });
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Ctx ctx;

    // Load --config first so explicit flags override file values; the
    // subcommand callbacks run during parse and must see the merged config.
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size())
                ctx.cfg = load_config_file(args[i + 1], ctx.cfg);
            else if (args[i].rfind("--config=", 0) == 0)
                ctx.cfg = load_config_file(args[i].substr(9), ctx.cfg);
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"torsionlab: polynomial Pell equations, elliptic torsion parameters, "
                 "semi-abelian logarithms and the Ribet section"};
    app.set_version_flag("--version", std::string(k_code_version));

    app.add_option("--config", ctx.config_file, "flat key = value configuration file");
    app.add_option("--prec", ctx.cfg.precision_digits, "working decimal digits");
    app.add_option("--cf-max-steps", ctx.cfg.cf_max_steps);
    app.add_option("--coeff-bit-cap", ctx.cfg.coeff_bit_cap);
    app.add_option("--cache-dir", ctx.cfg.cache_dir);
    app.add_option("--seed", ctx.cfg.seed);
    app.add_option("--jobs", ctx.cfg.jobs, "worker threads for scans (0 = cores)");

    setup_commands(app, ctx);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
        ctx.cfg.validate();
    } catch (const CLI::ParseError &e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            std::stringstream ss;
            int code = app.exit(e, ss, ss);
            out << ss.str();
            return code;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        json j = {{"error",
                   {{"code", e.code()}, {"message", e.what()}, {"context", "torsionlab"}}}};
        out << j.dump(1) << "\n";
        return 1;
    } catch (const std::exception &e) {
        json j = {{"error",
                   {{"code", "Unexpected"}, {"message", e.what()}, {"context", "torsionlab"}}}};
        out << j.dump(1) << "\n";
        return 1;
    }

    if (ctx.has_result) {
        json envelope = {{"result", ctx.result},
                         {"provenance",
                          {{"config", config_json(ctx.cfg)},
                           {"code_version", k_code_version},
                           {"schema_version", k_schema_version}}}};
        out << envelope.dump(1) << "\n";
    }
    return 0;
}

} // namespace torsionlab::cli

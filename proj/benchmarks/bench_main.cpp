#include <benchmark/benchmark.h>

#include "torsionlab/family.hpp"
#include "torsionlab/pell.hpp"
#include "torsionlab/ribet.hpp"
#include "torsionlab/roots.hpp"
#include "torsionlab/textio.hpp"

using namespace torsionlab;

namespace {

std::shared_ptr<const Lattice> lem(long digits) {
    return lattice_cached(Cplx::from_long(4, 0, bits_for_digits(digits)),
                          Cplx(bits_for_digits(digits)), digits);
}

void BM_wp_eval_50(benchmark::State &state) {
    auto L = lem(50);
    Cplx z = mul_2si(L->omega1 + L->omega2, -2);
    for (auto _ : state) {
        auto v = wp(*L, z);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_wp_eval_50);

void BM_sigma_eval_80(benchmark::State &state) {
    auto L = lem(80);
    Cplx z = mul_2si(L->omega1, -2) + mul_2si(L->omega2, -3);
    for (auto _ : state) {
        auto v = wsigma(*L, z);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_sigma_eval_80);

void BM_elog_50(benchmark::State &state) {
    auto L = lem(50);
    Cplx z = mul_2si(L->omega1, -3);
    auto P = wp(*L, z);
    for (auto _ : state) {
        Cplx u = elog(*L, CPoint::affine(P.first, P.second));
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_elog_50);

void BM_cf_expand_40_steps(benchmark::State &state) {
    auto D = parse_poly("x^4+x+1/4");
    for (auto _ : state) {
        auto e = cf_expand(D, 40, std::size_t(1) << 16);
        benchmark::DoNotOptimize(e.steps_used);
    }
}
BENCHMARK(BM_cf_expand_40_steps);

void BM_pell_fundamental_order5(benchmark::State &state) {
    // a sextic-field torsion parameter: the heaviest solvable family case
    auto tps = torsion_parameters(5);
    auto D = family_quartic(tps.back().field->gen());
    for (auto _ : state) {
        auto sol = pell_fundamental(D);
        benchmark::DoNotOptimize(sol.has_value());
    }
}
BENCHMARK(BM_pell_fundamental_order5);

void BM_divpoly_ladder_12(benchmark::State &state) {
    auto E = make_curve(Rational(-4), Rational(1));
    for (auto _ : state) {
        auto f = division_poly_ladder(E, 12);
        benchmark::DoNotOptimize(f.size());
    }
}
BENCHMARK(BM_divpoly_ladder_12);

void BM_aberth_quartic_50(benchmark::State &state) {
    std::vector<Rational> c = {Rational(4), Rational(-8), Rational(0), Rational(0),
                               Rational(1)};
    auto f = Poly<Rational>::from_coeffs(c);
    for (auto _ : state) {
        auto rs = complex_roots(f, 50);
        benchmark::DoNotOptimize(rs.size());
    }
}
BENCHMARK(BM_aberth_quartic_50);

void BM_ribet_order_check_n5(benchmark::State &state) {
    auto L = lem(80);
    Cplx alpha = mul_si(Cplx::i(L->bits()), 2);
    for (auto _ : state) {
        auto r = ribet_order_check(*L, alpha, 1, 2, 5);
        benchmark::DoNotOptimize(r.m);
    }
}
BENCHMARK(BM_ribet_order_check_n5);

} // namespace

BENCHMARK_MAIN();

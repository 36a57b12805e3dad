#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"
#include "momentcone/objective.hpp"
#include "momentcone/quadrature.hpp"
#include "momentcone/solver.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include <random>

using namespace momentcone;

namespace {

DomainSpec sym_box(int n) {
    return DomainSpec::box(Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0));
}

PolyCoeffs random_poly(const BasisSpec& spec, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(basis_size(spec)));
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] = dist(rng);
    return PolyCoeffs{spec, coeffs};
}

void BM_build_box_rule(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int points = static_cast<int>(state.range(1));
    const DomainSpec box = sym_box(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_box_rule(box, points));
    }
}
BENCHMARK(BM_build_box_rule)->Args({1, 64})->Args({2, 32})->Args({3, 16});

void BM_build_sector_rule(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int order = static_cast<int>(state.range(1));
    std::vector<int> signs(static_cast<std::size_t>(dim), 0);
    signs[0] = 1;
    const DomainSpec sector = DomainSpec::sphere_sector(signs);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_sector_rule(sector, order));
    }
}
BENCHMARK(BM_build_sector_rule)->Args({2, 16})->Args({3, 16})->Args({4, 16});

void BM_context_build(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const BasisSpec spec{n, degree, BasisMode::AllDegreesUpTo};
    const QuadratureRule rule = build_box_rule(sym_box(n), default_points_per_axis(degree));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ObjectiveContext(spec, rule));
    }
}
BENCHMARK(BM_context_build)->Args({1, 8})->Args({2, 6})->Args({3, 4});

void BM_eval_grad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const BasisSpec spec{n, degree, BasisMode::AllDegreesUpTo};
    const ObjectiveContext ctx(spec, build_box_rule(sym_box(n), default_points_per_axis(degree)));
    const PolyCoeffs p = random_poly(spec, 7, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_grad(ctx, p));
    }
}
BENCHMARK(BM_eval_grad)->Args({1, 8})->Args({2, 6})->Args({3, 4});

void BM_eval_hessian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const BasisSpec spec{n, degree, BasisMode::AllDegreesUpTo};
    const ObjectiveContext ctx(spec, build_box_rule(sym_box(n), default_points_per_axis(degree)));
    const PolyCoeffs p = random_poly(spec, 8, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_hessian(ctx, p));
    }
}
BENCHMARK(BM_eval_hessian)->Args({1, 8})->Args({2, 6})->Args({3, 4});

void BM_fenchel_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const BasisSpec spec{n, degree, BasisMode::AllDegreesUpTo};
    const ObjectiveContext ctx(spec, build_box_rule(sym_box(n), default_points_per_axis(degree)));
    const MomentSequence y = eval_grad(ctx, random_poly(spec, 9, 0.8));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fenchel_solve(ctx, y));
    }
}
BENCHMARK(BM_fenchel_solve)->Args({1, 4})->Args({2, 4})->Args({1, 8});

void BM_sphere_solve(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    const BasisSpec flat{1, degree, BasisMode::AllDegreesUpTo};
    const BasisSpec spec{2, degree, BasisMode::HomogeneousExactly};
    const DomainSpec sector = build_sector_from_K(DomainSpec::full_space(1));
    const ObjectiveContext ctx(spec, build_sector_rule(sector, default_sector_order(degree)));
    const MomentSequence y = eval_grad(ctx, random_poly(spec, 10, 0.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fenchel_solve(ctx, y));
    }
}
BENCHMARK(BM_sphere_solve)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();

// Serial reference vs OpenMP kernels, plus the cost of the short-time propagators.
//
//   ./build/bench/bench_kernels --benchmark_filter=Evaluate
//   OMP_NUM_THREADS=4 ./build/bench/bench_kernels

#include <benchmark/benchmark.h>

#include <random>

#include "flucbound/kernels.hpp"
#include "flucbound/propagators.hpp"
#include "flucbound/scenario.hpp"

using namespace flucbound;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return hermitian_part(m);
}

struct Fixture {
    LindbladModel model;
    TimeDependentObservable observable;
    Trajectory trajectory;
};

Fixture make_fixture(Eigen::Index dim, double t_max) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    TimeDependentObservable h({{coeff::Constant{0.5}, random_hermitian(rng, dim)}});
    Matrix l(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) l(i, j) = 0.4 * Complex(g(rng), g(rng));
    LindbladModel model(h, {l});
    TimeDependentObservable a({{coeff::Constant{1.0}, random_hermitian(rng, dim)},
                               {coeff::Cosine{1.0, 1.3, 0.2}, random_hermitian(rng, dim)}});
    auto traj = integrate(model, DensityMatrix::maximally_mixed(dim), t_max, 1e-3);
    return {model, a, std::move(traj)};
}

const Fixture& fixture(Eigen::Index dim) {
    static const Fixture f2 = make_fixture(2, 4.0);
    static const Fixture f4 = make_fixture(4, 4.0);
    return dim == 2 ? f2 : f4;
}

EvaluationOptions all_bounds() {
    EvaluationOptions o;
    o.bounds = BoundSelection{true, true, true, true};
    return o;
}

void BM_EvaluateTrajectorySerial(benchmark::State& state) {
    const auto& f = fixture(state.range(0));
    const auto opts = all_bounds();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_trajectory_serial(f.trajectory, f.observable, opts));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.trajectory.size()));
}
BENCHMARK(BM_EvaluateTrajectorySerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvaluateTrajectoryParallel(benchmark::State& state) {
    const auto& f = fixture(state.range(0));
    const auto opts = all_bounds();
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_trajectory_parallel(f.trajectory, f.observable, opts));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.trajectory.size()));
}
BENCHMARK(BM_EvaluateTrajectoryParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepSerial(benchmark::State& state) {
    const auto spec = builtin_scenario("example2");
    const std::vector<double> values{0.5, 1.0, 1.5, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(spec, "gamma", values));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
    const auto spec = builtin_scenario("example2");
    const std::vector<double> values{0.5, 1.0, 1.5, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, "gamma", values));
}
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Integrate(benchmark::State& state) {
    const auto& f = fixture(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(f.model, DensityMatrix::maximally_mixed(f.model.dim()), 1.0, 1e-3));
}
BENCHMARK(BM_Integrate)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Propagator(benchmark::State& state) {
    const auto scheme = static_cast<PropagatorScheme>(state.range(0));
    std::mt19937_64 rng(7);
    const TimeDependentObservable h = TimeDependentObservable::constant(random_hermitian(rng, 4));
    for (auto _ : state) {
        switch (scheme) {
            case PropagatorScheme::exact: benchmark::DoNotOptimize(exact_propagator(h, 0.0, 1e-2)); break;
            case PropagatorScheme::taylor2: benchmark::DoNotOptimize(taylor_propagator(h, 0.0, 1e-2, 2)); break;
            case PropagatorScheme::dyson2: benchmark::DoNotOptimize(dyson_propagator(h, 0.0, 1e-2, 2)); break;
            default: break;
        }
    }
    state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Propagator)
    ->Arg(static_cast<int>(PropagatorScheme::exact))
    ->Arg(static_cast<int>(PropagatorScheme::taylor2))
    ->Arg(static_cast<int>(PropagatorScheme::dyson2));

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "hawkes/core_process.hpp"
#include "hawkes/edgeworth.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/simulate.hpp"

namespace {

using namespace hawkes;

const Theta kTheta{0.5, 1.0, 1.3};

EventSequence path_with(double horizon) { return simulate(kTheta, horizon, 42); }

void BM_simulate(benchmark::State& state) {
    const double horizon = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto ev = simulate(kTheta, horizon, seed++);
        benchmark::DoNotOptimize(ev.times.data());
    }
}
BENCHMARK(BM_simulate)->Arg(30)->Arg(300);

void BM_core_path(benchmark::State& state) {
    const auto ev = path_with(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto path = core_path(ev, kTheta);
        benchmark::DoNotOptimize(path.at_events.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ev.size()));
}
BENCHMARK(BM_core_path)->Arg(300)->Arg(3000);

void BM_derivatives(benchmark::State& state) {
    const auto ev = path_with(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto d = derivatives(ev, kTheta);
        benchmark::DoNotOptimize(d.value);
    }
}
BENCHMARK(BM_derivatives)->Arg(30)->Arg(300);

void BM_fit(benchmark::State& state) {
    const auto ev = path_with(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto f = fit(ev);
        benchmark::DoNotOptimize(f.theta_hat.mu);
    }
}
BENCHMARK(BM_fit)->Arg(30)->Arg(300);

void BM_q_t3(benchmark::State& state) {
    std::vector<ReplicationStats> stats(200);
    for (std::size_t i = 0; i < stats.size(); ++i)
        stats[i] = collect_replication(simulate(kTheta, 30.0, i + 1), kTheta);
    const auto coeffs = estimate_coefficients(stats, 30.0);
    const Qt3Evaluator q(coeffs);
    double z = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q(Vec3{z, 0.3, -0.2}));
        z = z < 3.0 ? z + 1e-4 : -3.0;
    }
}
BENCHMARK(BM_q_t3);

void BM_collect_replication(benchmark::State& state) {
    const auto ev = path_with(30.0);
    for (auto _ : state) {
        auto rs = collect_replication(ev, kTheta);
        benchmark::DoNotOptimize(rs.z1[0]);
    }
}
BENCHMARK(BM_collect_replication);

}  // namespace

BENCHMARK_MAIN();

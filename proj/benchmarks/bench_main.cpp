#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracobs/analysis.hpp"
#include "fracobs/grid.hpp"
#include "fracobs/kernels.hpp"
#include "fracobs/schemes.hpp"
#include "fracobs/tridiag.hpp"

namespace {

using namespace fracobs;

void bm_l1_weights(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(l1_weights(0.5, m));
    }
    state.SetComplexityN(m);
}
BENCHMARK(bm_l1_weights)->Range(8, 1 << 14)->Complexity(benchmark::oN);

void bm_cq_weights(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cq_weights(0.5, count));
    }
    state.SetComplexityN(count);
}
BENCHMARK(bm_cq_weights)->Range(8, 1 << 14)->Complexity(benchmark::oN);

void bm_thomas_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    TriDiag t;
    t.diag.resize(n);
    t.sub.resize(n - 1);
    t.sup.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        t.sub[i] = off(rng);
        t.sup[i] = off(rng);
    }
    for (int i = 0; i < n; ++i) {
        double row = 1.0 + std::fabs(off(rng));
        if (i > 0) row += std::fabs(t.sub[i - 1]);
        if (i + 1 < n) row += std::fabs(t.sup[i]);
        t.diag[i] = row;
    }
    std::vector<double> rhs(n);
    for (double& v : rhs) v = off(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(thomas_solve(t, rhs));
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_thomas_solve)->Range(16, 1 << 14)->Complexity(benchmark::oN);

ProblemSpec bench_spec(double alpha, int n_intervals, SchemeKind scheme,
                       std::int64_t m_steps) {
    const Grid1D g = make_grid(-1.0, 1.0, n_intervals);
    const double h = 2.0 / n_intervals;
    const double tau = std::pow(25.0 * h * h, 1.0 / alpha);
    const TimeGrid t = make_time_grid(tau, m_steps);
    auto u0 = [](double x) { return 0.7 - 0.7 * x * x; };
    auto psi = [](double x) { return 0.5 - 2.0 * x * x; };
    return sample_problem(alpha, g, t, u0, psi, scheme, 1e-300);
}

void bm_run_steps(benchmark::State& state, SchemeKind scheme) {
    const auto m_steps = static_cast<std::int64_t>(state.range(0));
    const ProblemSpec spec = bench_spec(0.5, 64, scheme, m_steps);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(spec));
    }
    state.SetComplexityN(m_steps);
}
void bm_run_s1(benchmark::State& state) { bm_run_steps(state, SchemeKind::S1); }
void bm_run_s2(benchmark::State& state) { bm_run_steps(state, SchemeKind::S2); }
void bm_run_s3(benchmark::State& state) { bm_run_steps(state, SchemeKind::S3); }
BENCHMARK(bm_run_s1)->Range(16, 512)->Complexity(benchmark::oNSquared);
BENCHMARK(bm_run_s2)->Range(16, 512)->Complexity(benchmark::oNSquared);
BENCHMARK(bm_run_s3)->Range(16, 512)->Complexity(benchmark::oNSquared);

void bm_psor(benchmark::State& state) {
    const int n_intervals = static_cast<int>(state.range(0));
    const Grid1D g = make_grid(-1.0, 1.0, n_intervals);
    std::vector<double> psi(g.nodes.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] = 0.5 - 2.0 * g.nodes[i] * g.nodes[i];
    }
    const TriDiag a = laplacian_stencil(g.n_nodes());
    for (auto _ : state) {
        benchmark::DoNotOptimize(psor_oracle(a, psi, 10000000));
    }
    state.SetComplexityN(n_intervals);
}
BENCHMARK(bm_psor)->Range(16, 128)->Complexity();

}  // namespace

BENCHMARK_MAIN();

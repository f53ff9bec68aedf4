#include <benchmark/benchmark.h>

#include <cmath>

#include "ppcorr/ccdf.hpp"
#include "ppcorr/frameworks.hpp"
#include "ppcorr/interference.hpp"
#include "ppcorr/simulator.hpp"

using namespace ppcorr;

namespace {

SirThresholds common(double y, const PointSet& ps, const ModelParams& p) {
    return normalize_thresholds(std::vector<double>(ps.size(), y), ps, p);
}

void BM_OverlapIntegral(benchmark::State& state) {
    const ModelParams p(1.0, 1.0, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(overlap_integral({-0.25, 0.0}, {0.25, 0.0}, p).value);
}
BENCHMARK(BM_OverlapIntegral);

void BM_CorrelationMatrix(benchmark::State& state) {
    const ModelParams p(1.0, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_correlation_matrix(ps, p));
}
BENCHMARK(BM_CorrelationMatrix)->Arg(2)->Arg(4)->Arg(6);

void BM_JointCcdfPpp(benchmark::State& state) {
    const ModelParams p(0.01, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, static_cast<std::size_t>(state.range(0)));
    const SirThresholds th = common(std::pow(10.0, 0.5), ps, p);
    for (auto _ : state) benchmark::DoNotOptimize(joint_ccdf_ppp(ps, th, p));
}
BENCHMARK(BM_JointCcdfPpp)->Arg(2)->Arg(4)->Arg(6);

void BM_JointCcdfMixture(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const ModelParams p(0.01, 1.0, 4.0);
    const MixtureWeights q = solve_mixture_weights(CorrelationMatrix::uniform(n, 0.1));
    const SirThresholds th = common(2.0, PointSet::circle(0.25, n), p);
    for (auto _ : state) benchmark::DoNotOptimize(joint_ccdf_mixture(q, th, p));
}
BENCHMARK(BM_JointCcdfMixture)->DenseRange(2, 8, 2);

void BM_SampleField(benchmark::State& state) {
    const ModelParams p(1.0, 1.0, 4.0);
    const PointSet ps = PointSet::circle(0.25, 2);
    const InterferenceSampler sampler(PppModel{}, ps, p, SimWindow{});
    std::vector<double> out(2);
    Streams s(RngSeed{1, 0}, 0);
    for (auto _ : state) {
        sampler.draw(s, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_SampleField);

void BM_SampleMixture(benchmark::State& state) {
    const ModelParams p(1.0, 1.0, 4.0);
    const MixtureWeights q = solve_mixture_weights(CorrelationMatrix::uniform(2, 0.45));
    const InterferenceSampler sampler(q, PointSet::circle(0.25, 2), p, SimWindow{});
    std::vector<double> out(2);
    Streams s(RngSeed{1, 0}, 0);
    for (auto _ : state) {
        sampler.draw(s, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_SampleMixture);

}  // namespace
BENCHMARK_MAIN();

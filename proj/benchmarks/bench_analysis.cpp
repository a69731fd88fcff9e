#include <benchmark/benchmark.h>

#include "tsforge/analysis/clustering.hpp"
#include "tsforge/analysis/features.hpp"
#include "tsforge/common/rng.hpp"
#include "tsforge/synthetic.hpp"

namespace {

using namespace tsforge;

void BM_FeatureVector(benchmark::State& state) {
    const auto series =
        synthetic::make_corpus(1, static_cast<std::size_t>(state.range(0)), 4)[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_feature_vector(series));
    }
}

void BM_Pam(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(9);
    PointMatrix points(n, std::vector<double>(kFeatureCount));
    for (auto& row : points) {
        for (auto& v : row) {
            v = rng.normal();
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(pam_cluster(points, 4));
    }
}

BENCHMARK(BM_FeatureVector)->Arg(120)->Arg(480);
BENCHMARK(BM_Pam)->Arg(50)->Arg(200);

}  // namespace

#include <benchmark/benchmark.h>

#include "tsforge/common/rng.hpp"
#include "tsforge/evaluation/ranking.hpp"

namespace {

using namespace tsforge;

MetricMatrix random_matrix(std::size_t series, std::size_t models) {
    Rng rng(3);
    MetricMatrix m;
    for (std::size_t j = 0; j < models; ++j) {
        m.models.push_back("m" + std::to_string(j));
    }
    for (std::size_t i = 0; i < series; ++i) {
        m.series.push_back("s" + std::to_string(i));
        std::vector<double> row(models);
        for (auto& v : row) {
            v = rng.uniform(0.0, 1.0);
        }
        m.values.push_back(std::move(row));
    }
    return m;
}

void BM_RankModels(benchmark::State& state) {
    const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank_models(m));
    }
}

BENCHMARK(BM_RankModels)->Arg(100)->Arg(1000);

}  // namespace

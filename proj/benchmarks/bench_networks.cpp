#include <benchmark/benchmark.h>

#include "tsforge/autodiff/ops.hpp"
#include "tsforge/common/rng.hpp"
#include "tsforge/forecasters/network.hpp"

namespace {

using namespace tsforge;

ForecasterConfig family_defaults(Family family) {
    ForecasterConfig c;
    c.family = family;
    c.input_size = 12;
    c.horizon = 3;
    return c;
}

std::vector<double> window(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.uniform(0.1, 1.1);
    }
    return v;
}

void BM_Predict(benchmark::State& state) {
    const auto family = static_cast<Family>(state.range(0));
    const NeuralNetwork net(family_defaults(family), 1);
    const auto x = window(12, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.predict_scaled(x));
    }
    state.SetLabel(to_string(family));
}

void BM_ForwardBackward(benchmark::State& state) {
    const auto family = static_cast<Family>(state.range(0));
    const NeuralNetwork net(family_defaults(family), 1);
    const auto x = window(12, 2);
    const auto y = ad::Tensor::vector(window(3, 3));
    for (auto _ : state) {
        ad::Tape tape;
        const auto out = net.forward(tape, x);
        const auto loss = ad::mape_loss(tape, out, y);
        benchmark::DoNotOptimize(tape.backward(loss));
    }
    state.SetLabel(to_string(family));
}

BENCHMARK(BM_Predict)->DenseRange(0, 2);
BENCHMARK(BM_ForwardBackward)->DenseRange(0, 2);

}  // namespace

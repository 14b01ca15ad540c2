#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dial/uncertainty.hpp"

namespace {

dial::PassStack make_stack(std::size_t points, std::size_t passes, std::size_t classes) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    std::vector<double> data;
    data.reserve(points * passes * classes);
    for (std::size_t r = 0; r < points * passes; ++r) {
        std::vector<double> row(classes);
        double sum = 0.0;
        for (auto& v : row) sum += v = unit(rng);
        for (auto& v : row) data.push_back(v / sum);
    }
    return dial::PassStack(points, passes, classes, std::move(data));
}

void BM_MutualInformation(benchmark::State& state) {
    const auto stack = make_stack(static_cast<std::size_t>(state.range(0)), 10, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::mutual_information(stack));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SoftmaxEntropy(benchmark::State& state) {
    const auto stack = make_stack(static_cast<std::size_t>(state.range(0)), 10, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::softmax_entropy(stack));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_MutualInformation)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SoftmaxEntropy)->Arg(10000);

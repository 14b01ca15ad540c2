#include <benchmark/benchmark.h>

#include <random>

#include "dial/selection.hpp"

namespace {

// Discs on a line with overlapping neighbors, the shape the loop produces.
dial::SelectionProblem line_instance(std::size_t candidates, std::size_t voxels_per_candidate,
                                     int budget) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    dial::SelectionProblem problem;
    const std::size_t stride = voxels_per_candidate / 2;
    const std::size_t voxels = candidates * stride + voxels_per_candidate;
    problem.voxel_weights.resize(voxels);
    for (auto& w : problem.voxel_weights) w = unit(rng);
    problem.masks.resize(candidates);
    for (std::uint32_t i = 0; i < candidates; ++i) {
        for (std::uint32_t j = 0; j < voxels_per_candidate; ++j) {
            problem.masks[i].push_back(static_cast<std::uint32_t>(i * stride + j));
        }
    }
    problem.budget = budget;
    return problem;
}

void BM_SolveExact(benchmark::State& state) {
    const auto problem = line_instance(static_cast<std::size_t>(state.range(0)), 40, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::solve_exact(problem));
    }
}

void BM_SolveGreedy(benchmark::State& state) {
    const auto problem = line_instance(static_cast<std::size_t>(state.range(0)), 40, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::solve_greedy(problem));
    }
}

void BM_SolveBruteforce(benchmark::State& state) {
    const auto problem = line_instance(12, 8, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::solve_bruteforce(problem));
    }
}

}  // namespace

BENCHMARK(BM_SolveExact)->Arg(25)->Arg(75)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveGreedy)->Arg(75)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveBruteforce);

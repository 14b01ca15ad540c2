#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dial/geometry.hpp"
#include "dial/voxel_grid.hpp"

namespace {

struct Cloud {
    std::vector<dial::Vec3> points;
    std::vector<double> scores;
};

Cloud make_cloud(std::size_t count) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Cloud cloud;
    for (std::size_t k = 0; k < count; ++k) {
        cloud.points.push_back({coord(rng), coord(rng), coord(rng) * 0.05});
        cloud.scores.push_back(unit(rng));
    }
    return cloud;
}

void BM_BuildGrid(benchmark::State& state) {
    const Cloud cloud = make_cloud(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::build_grid(cloud.points, cloud.scores, 0.5));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PoolMin(benchmark::State& state) {
    const Cloud cloud = make_cloud(static_cast<std::size_t>(state.range(0)));
    dial::VoxelGrid grid = dial::build_grid(cloud.points, cloud.scores, 0.5);
    for (auto _ : state) {
        dial::pool(grid, dial::PoolFn::Min);
        benchmark::DoNotOptimize(grid);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DiscMask(benchmark::State& state) {
    const Cloud cloud = make_cloud(static_cast<std::size_t>(state.range(0)));
    dial::VoxelGrid grid = dial::build_grid(cloud.points, cloud.scores, 0.5);
    const std::vector<dial::Vec3> centers = grid.voxel_centers();
    const dial::DiscCandidate disc{0, {0, 0, 0}, 50.0, -1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dial::disc_mask(disc, centers));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(centers.size()));
}

}  // namespace

BENCHMARK(BM_BuildGrid)->Arg(10000)->Arg(100000);
BENCHMARK(BM_PoolMin)->Arg(100000);
BENCHMARK(BM_DiscMask)->Arg(100000);

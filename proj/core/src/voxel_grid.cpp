#include "dial/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "dial/error.hpp"

namespace dial {

namespace {

struct IndexHash {
    std::size_t operator()(const VoxelIndex& v) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::int64_t c : {v.ix, v.iy, v.iz}) {
            h ^= static_cast<std::uint64_t>(c);
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

PoolFn pool_fn_from_name(std::string_view name) {
    if (name == "min") return PoolFn::Min;
    if (name == "max") return PoolFn::Max;
    if (name == "mean") return PoolFn::Mean;
    throw InvalidConfigError("unknown pooling function: " + std::string(name));
}

const char* to_string(PoolFn fn) noexcept {
    switch (fn) {
        case PoolFn::Min: return "min";
        case PoolFn::Max: return "max";
        case PoolFn::Mean: return "mean";
    }
    return "min";
}

VoxelIndex voxel_index_of(const Vec3& position, double voxel_length) {
    return {static_cast<std::int64_t>(std::floor(position.x / voxel_length)),
            static_cast<std::int64_t>(std::floor(position.y / voxel_length)),
            static_cast<std::int64_t>(std::floor(position.z / voxel_length))};
}

std::vector<Vec3> VoxelGrid::voxel_centers() const {
    std::vector<Vec3> centers;
    centers.reserve(voxels_.size());
    for (const Voxel& v : voxels_) centers.push_back(center_of(v.index));
    return centers;
}

std::vector<double> VoxelGrid::pooled_values() const {
    if (!pooled_) throw InvalidInputError("VoxelGrid: pooled_values() before pool()");
    std::vector<double> values;
    values.reserve(voxels_.size());
    for (const Voxel& v : voxels_) values.push_back(v.pooled);
    return values;
}

void VoxelGrid::set_scores(std::span<const double> scores) {
    if (scores.size() != point_scores_.size()) {
        throw InvalidInputError("VoxelGrid: score count does not match point count");
    }
    point_scores_.assign(scores.begin(), scores.end());
    pooled_ = false;
}

VoxelGrid build_grid(std::span<const Vec3> positions, std::span<const double> scores,
                     double voxel_length) {
    if (voxel_length <= 0.0) throw InvalidInputError("build_grid: voxel length must be > 0");
    if (positions.size() != scores.size()) {
        throw InvalidInputError("build_grid: positions and scores must have equal length");
    }
    VoxelGrid grid;
    grid.voxel_length_ = voxel_length;
    grid.point_scores_.assign(scores.begin(), scores.end());

    std::unordered_map<VoxelIndex, std::size_t, IndexHash> slot;
    slot.reserve(positions.size());
    for (std::uint32_t k = 0; k < positions.size(); ++k) {
        const Vec3& p = positions[k];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw InvalidInputError("build_grid: non-finite coordinate at point " +
                                    std::to_string(k));
        }
        const VoxelIndex idx = voxel_index_of(p, voxel_length);
        auto [it, inserted] = slot.try_emplace(idx, grid.voxels_.size());
        if (inserted) grid.voxels_.push_back({idx, {}, 0.0});
        grid.voxels_[it->second].point_ids.push_back(k);
    }
    std::sort(grid.voxels_.begin(), grid.voxels_.end(),
              [](const Voxel& a, const Voxel& b) { return a.index < b.index; });
    return grid;
}

void pool(VoxelGrid& grid, PoolFn fn) {
    for (Voxel& voxel : grid.voxels_) {
        switch (fn) {
            case PoolFn::Min: {
                double m = std::numeric_limits<double>::infinity();
                for (std::uint32_t id : voxel.point_ids) m = std::min(m, grid.point_scores_[id]);
                voxel.pooled = m;
                break;
            }
            case PoolFn::Max: {
                double m = -std::numeric_limits<double>::infinity();
                for (std::uint32_t id : voxel.point_ids) m = std::max(m, grid.point_scores_[id]);
                voxel.pooled = m;
                break;
            }
            case PoolFn::Mean: {
                // Fixed reduction order (insertion order) keeps results
                // bitwise reproducible for a given input order.
                double acc = 0.0;
                for (std::uint32_t id : voxel.point_ids) acc += grid.point_scores_[id];
                voxel.pooled = acc / static_cast<double>(voxel.point_ids.size());
                break;
            }
        }
    }
    grid.pooled_ = true;
}

std::vector<DiscScore> disc_scores(const VoxelGrid& grid,
                                   std::span<const DiscCandidate> candidates,
                                   std::span<const std::vector<std::uint8_t>> masks) {
    if (candidates.size() != masks.size()) {
        throw InvalidInputError("disc_scores: one mask per candidate required");
    }
    const std::vector<double> pooled = grid.pooled_values();
    std::vector<DiscScore> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (masks[i].size() != pooled.size()) {
            throw InvalidInputError("disc_scores: mask length does not match voxel count");
        }
        double alpha = 0.0;
        for (std::size_t j = 0; j < pooled.size(); ++j) {
            if (masks[i][j]) alpha += pooled[j];
        }
        out.push_back({candidates[i].candidate_id, alpha});
    }
    return out;
}

double baseline_disc_aggregate(std::span<const double> scores_in_disc, BaselineAggregate mode) {
    if (scores_in_disc.empty()) return 0.0;
    double sum = 0.0;
    for (double s : scores_in_disc) sum += s;
    if (mode == BaselineAggregate::Sum) return sum;
    return sum / static_cast<double>(scores_in_disc.size());
}

double baseline_disc_aggregate(std::span<const Vec3> positions, std::span<const double> scores,
                               const DiscCandidate& disc, BaselineAggregate mode,
                               DistanceMode distance) {
    if (positions.size() != scores.size()) {
        throw InvalidInputError("baseline_disc_aggregate: positions/scores length mismatch");
    }
    std::vector<double> inside;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        if (in_disc(positions[k], disc, distance)) inside.push_back(scores[k]);
    }
    return baseline_disc_aggregate(inside, mode);
}

}  // namespace dial

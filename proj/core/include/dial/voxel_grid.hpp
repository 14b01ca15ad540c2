#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dial/geometry.hpp"

namespace dial {

struct VoxelIndex {
    std::int64_t ix = 0;
    std::int64_t iy = 0;
    std::int64_t iz = 0;

    friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
    friend auto operator<=>(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Symmetric pooling function applied within a voxel.
enum class PoolFn { Min, Max, Mean };

PoolFn pool_fn_from_name(std::string_view name);
const char* to_string(PoolFn fn) noexcept;

struct Voxel {
    VoxelIndex index;
    std::vector<std::uint32_t> point_ids;  // indices into the build input
    double pooled = 0.0;                   // set by pool()
};

/// Sparse voxel grid over globally registered points. A point (x,y,z) belongs
/// to voxel (floor(x/l), floor(y/l), floor(z/l)); empty voxels are absent.
/// Voxels are kept sorted by index so every derived quantity (centers, masks,
/// disc scores, selection objectives) is deterministic.
class VoxelGrid {
public:
    VoxelGrid() = default;

    double voxel_length() const noexcept { return voxel_length_; }
    std::size_t voxel_count() const noexcept { return voxels_.size(); }
    std::size_t point_count() const noexcept { return point_scores_.size(); }
    std::span<const Voxel> voxels() const noexcept { return voxels_; }
    std::span<const double> point_scores() const noexcept { return point_scores_; }

    Vec3 center_of(const VoxelIndex& index) const {
        const double l = voxel_length_;
        return {(static_cast<double>(index.ix) + 0.5) * l,
                (static_cast<double>(index.iy) + 0.5) * l,
                (static_cast<double>(index.iz) + 0.5) * l};
    }

    /// Voxel centers in sorted-index order.
    std::vector<Vec3> voxel_centers() const;

    /// Pooled values in sorted-index order (valid after pool()).
    std::vector<double> pooled_values() const;

    /// Replaces the per-point scores (same point set) and clears pooling.
    /// Used when scores are recomputed between steps over static geometry.
    void set_scores(std::span<const double> scores);

    friend VoxelGrid build_grid(std::span<const Vec3> positions, std::span<const double> scores,
                                double voxel_length);
    friend void pool(VoxelGrid& grid, PoolFn fn);

private:
    double voxel_length_ = 0.0;
    std::vector<Voxel> voxels_;
    std::vector<double> point_scores_;
    bool pooled_ = false;
};

VoxelIndex voxel_index_of(const Vec3& position, double voxel_length);

/// Partitions points into voxels. Throws on non-finite coordinates or
/// non-positive voxel length.
VoxelGrid build_grid(std::span<const Vec3> positions, std::span<const double> scores,
                     double voxel_length);

/// Sets each voxel's pooled value to fn over its member point scores.
void pool(VoxelGrid& grid, PoolFn fn);

/// Discwise uncertainty: sum of pooled voxel values selected by the mask.
struct DiscScore {
    std::uint32_t candidate_id = 0;
    double alpha = 0.0;
};

/// alpha_i = sum_j mask[i][j] * pooled_j. Masks must come from disc_mask over
/// this grid's voxel_centers(); length mismatches throw.
std::vector<DiscScore> disc_scores(const VoxelGrid& grid,
                                   std::span<const DiscCandidate> candidates,
                                   std::span<const std::vector<std::uint8_t>> masks);

enum class BaselineAggregate { Mean, Sum };

/// Flat discwise baseline over raw pointwise scores, bypassing voxels.
/// Empty input yields 0 for both modes.
double baseline_disc_aggregate(std::span<const double> scores_in_disc, BaselineAggregate mode);

/// Convenience: gathers the scores of the points inside the disc, then
/// applies the flat baseline.
double baseline_disc_aggregate(std::span<const Vec3> positions, std::span<const double> scores,
                               const DiscCandidate& disc, BaselineAggregate mode,
                               DistanceMode distance = DistanceMode::Planar);

}  // namespace dial

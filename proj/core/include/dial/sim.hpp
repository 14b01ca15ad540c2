#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dial/geometry.hpp"
#include "dial/selection.hpp"
#include "dial/uncertainty.hpp"
#include "dial/voxel_grid.hpp"

namespace dial {

/// Synthetic sequential scene: a straight ego path with a slow dense zone
/// and a fast sparse zone, long-tailed classes, and rare classes planted in
/// compact regions. Stands in for a real drive at desk scale.
struct SceneParams {
    std::size_t frame_count = 300;
    std::size_t points_per_frame = 150;  // per-frame count at slow speed, fewer when fast
    std::vector<double> class_frequencies = {0.40, 0.24, 0.16, 0.10, 0.06, 0.04};
    std::size_t rare_region_count = 5;
    std::size_t rare_class_count = 2;      // tail classes that only occur inside regions
    double rare_region_radius = 4.0;       // meters
    double rare_region_max_lateral = 4.0;  // keep regions reachable from the path
    double rare_zone_begin = 0.45;         // fraction of the trajectory
    double rare_zone_end = 1.0;
    std::vector<double> speed_profile_mps;  // explicit per-frame speeds; empty = two-zone
    double slow_speed_mps = 12.0;
    double fast_speed_mps = 24.0;
    double slow_zone_end = 0.40;  // fraction of frames driven at slow speed
    double lidar_hz = 10.0;
    double max_point_range = 15.0;  // sensor-frame planar radius of generated points

    void validate() const;
};

struct RareRegion {
    Vec3 center;
    double radius = 0.0;
    int class_id = 0;
};

struct SyntheticScene {
    std::vector<Pose> trajectory;  // one pose per frame
    std::vector<Frame> frames;
    std::vector<std::vector<int>> labels;  // ground-truth class per frame point
    std::vector<RareRegion> rare_regions;
    std::size_t class_count = 0;
    GlobalCloud cloud;  // registered, frame-major

    std::size_t total_points() const noexcept { return cloud.points.size(); }
};

SyntheticScene generate_scene(std::uint64_t seed, const SceneParams& params);

/// Stochastic predictor standing in for a retrained network. Per-pass class
/// distributions are Dirichlet draws around the true class whose
/// concentration grows with the familiarity (labeled point count) of that
/// class, so labeling a class shrinks its dispersion and hence its mutual
/// information.
struct SurrogateParams {
    std::size_t pass_count = 10;
    double base_concentration = 6.0;
    double familiarity_halflife = 400.0;  // labeled points doubling the concentration
    double accuracy_halflife = 200.0;     // labeled points pulling the mean toward truth
    double mi_floor = 0.01;               // guaranteed MI at zero familiarity (nats)

    void validate() const;
};

class SurrogateModel {
public:
    SurrogateModel(std::uint64_t seed, std::size_t class_count, SurrogateParams params = {});

    /// Replaces the per-class labeled counts; counts may never decrease.
    void observe_labels(std::span<const std::uint64_t> labeled_per_class);

    std::span<const std::uint64_t> familiarity() const noexcept { return familiarity_; }
    const SurrogateParams& params() const noexcept { return params_; }

    /// One pass stack over the whole scene (frame-major point order).
    /// Deterministic given (seed, step).
    PassStack predict(const SyntheticScene& scene, std::uint64_t step) const;

private:
    std::uint64_t seed_;
    std::size_t class_count_;
    SurrogateParams params_;
    std::vector<std::uint64_t> familiarity_;
};

enum class Strategy { DialExact, DialGreedy, Random, Hpcs };

Strategy strategy_from_name(std::string_view name);
const char* to_string(Strategy strategy) noexcept;

/// Labeling cost model: a disc has a fixed labeling time; the equivalent
/// framewise time divides out the disc overhead (midpoint of the range
/// unless an explicit per-frame time is configured).
struct CostModel {
    double hours_per_disc = 3.5;
    double overhead_min = 0.10;
    double overhead_max = 0.80;
    double hours_per_frame = 0.0;  // 0 = derive from the overhead midpoint

    void validate() const;
    double derived_hours_per_frame() const {
        if (hours_per_frame > 0.0) return hours_per_frame;
        return hours_per_disc / (1.0 + 0.5 * (overhead_min + overhead_max));
    }
};

struct LoopConfig {
    Strategy strategy = Strategy::DialExact;
    int steps = 5;
    int discs_per_step = 5;  // N new discs per step
    double disc_radius = 5.0;
    int candidate_stride = 4;
    double voxel_length = 0.5;
    Metric metric = Metric::MutualInformation;
    PoolFn pool_fn = PoolFn::Min;
    IntersectionPolicy policy = IntersectionPolicy::Allow;
    DistanceMode distance = DistanceMode::Planar;
    std::size_t initial_disc = 25;  // candidate id of the seed disc
    std::uint64_t scene_seed = 1;
    std::uint64_t model_seed = 2;
    std::uint64_t selection_seed = 3;
    SceneParams scene;
    SurrogateParams surrogate;
    CostModel cost;

    void validate() const;
};

struct StepMetrics {
    int step = 0;  // 0 is the initial state
    std::vector<std::uint32_t> new_discs;
    double objective = 0.0;
    double labeled_point_fraction = 0.0;
    double rare_region_coverage = 0.0;  // labeled fraction of planted rare-class points
    std::vector<double> class_coverage;
    std::size_t fully_labeled_frames = 0;
    std::size_t weakly_labeled_frames = 0;
    std::size_t unlabeled_frames = 0;
    double budget_hours = 0.0;
};

struct ALState {
    int step = 0;
    std::vector<std::uint32_t> labeled_discs;  // sorted candidate ids
    std::vector<FrameLabelStatus> frame_statuses;
    std::vector<std::vector<std::uint8_t>> labeled_points;  // per frame
    std::vector<std::uint64_t> labeled_per_class;
    double budget_hours = 0.0;
    std::vector<StepMetrics> history;  // history[0] is the initial state
    bool halted = false;
    std::string halt_reason;
};

/// Runs the closed loop: predict, score, pool, select N new discs with the
/// previous selection fixed, oracle-label every point inside the new discs,
/// update familiarity, budget and metrics. On an infeasible selection the
/// loop halts with the partial history and a diagnostic.
ALState run_loop(const SyntheticScene& scene, const LoopConfig& config);

struct BudgetReport {
    std::size_t labeled_discs = 0;
    double total_hours = 0.0;
    double hours_per_frame = 0.0;
    double framewise_total_hours = 0.0;  // cost of labeling every frame individually
    double cost_fraction = 0.0;          // total_hours / framewise_total_hours
    double labeled_point_fraction = 0.0;
};

BudgetReport budget_report(const ALState& state, const CostModel& cost);

}  // namespace dial

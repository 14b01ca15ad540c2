#include "dial/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dial/error.hpp"
#include "dial/rng.hpp"

namespace dial {

void SceneParams::validate() const {
    if (frame_count == 0) throw InvalidConfigError("scene: frame count must be >= 1");
    if (points_per_frame == 0) throw InvalidConfigError("scene: points per frame must be >= 1");
    if (class_frequencies.empty()) throw InvalidConfigError("scene: need class frequencies");
    double sum = 0.0;
    for (double f : class_frequencies) {
        if (!(f >= 0.0)) throw InvalidConfigError("scene: class frequencies must be >= 0");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidConfigError("scene: class frequencies must sum to 1");
    }
    if (rare_region_count > 0) {
        if (rare_class_count == 0 || rare_class_count >= class_frequencies.size()) {
            throw InvalidConfigError("scene: rare classes must leave at least one head class");
        }
    }
    if (!(rare_region_radius > 0.0)) throw InvalidConfigError("scene: region radius must be > 0");
    if (!(rare_zone_begin >= 0.0 && rare_zone_begin <= rare_zone_end && rare_zone_end <= 1.0)) {
        throw InvalidConfigError("scene: rare zone must satisfy 0 <= begin <= end <= 1");
    }
    if (!speed_profile_mps.empty() && speed_profile_mps.size() != frame_count) {
        throw InvalidConfigError("scene: speed profile must have one entry per frame");
    }
    for (double v : speed_profile_mps) {
        if (!(v > 0.0)) throw InvalidConfigError("scene: speeds must be > 0");
    }
    if (!(slow_speed_mps > 0.0 && fast_speed_mps > 0.0)) {
        throw InvalidConfigError("scene: zone speeds must be > 0");
    }
    if (!(slow_zone_end >= 0.0 && slow_zone_end <= 1.0)) {
        throw InvalidConfigError("scene: slow zone end must be in [0,1]");
    }
    if (!(lidar_hz > 0.0)) throw InvalidConfigError("scene: lidar rate must be > 0");
    if (!(max_point_range > 0.0)) throw InvalidConfigError("scene: point range must be > 0");
}

SyntheticScene generate_scene(std::uint64_t seed, const SceneParams& params) {
    params.validate();
    std::mt19937_64 rng(mix_seed(seed, 0xd15c));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SyntheticScene scene;
    scene.class_count = params.class_frequencies.size();

    // Per-frame speed: explicit profile, or slow city zone then fast highway.
    std::vector<double> speed(params.frame_count);
    for (std::size_t k = 0; k < params.frame_count; ++k) {
        if (!params.speed_profile_mps.empty()) {
            speed[k] = params.speed_profile_mps[k];
        } else {
            const double frac = static_cast<double>(k) / static_cast<double>(params.frame_count);
            speed[k] = frac < params.slow_zone_end ? params.slow_speed_mps
                                                   : params.fast_speed_mps;
        }
    }

    // Straight ego path along +x; frame k+1 is speed/hz ahead of frame k.
    scene.trajectory.resize(params.frame_count);
    double x = 0.0;
    for (std::size_t k = 0; k < params.frame_count; ++k) {
        scene.trajectory[k].rotation = Mat3::identity();
        scene.trajectory[k].translation = {x, 0.0, 0.0};
        x += speed[k] / params.lidar_hz;
    }

    // Points in sensor coordinates: uniform planar disc around the sensor
    // with a thin vertical spread. Slow (city) frames carry more points.
    scene.frames.resize(params.frame_count);
    const double base_count = static_cast<double>(params.points_per_frame);
    for (std::size_t k = 0; k < params.frame_count; ++k) {
        Frame& frame = scene.frames[k];
        frame.frame_id = static_cast<int>(k);
        frame.pose = scene.trajectory[k];
        const double density_scale = params.slow_speed_mps / speed[k];
        const std::size_t count = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(base_count * std::min(density_scale, 1.0))));
        frame.points.reserve(count);
        for (std::size_t p = 0; p < count; ++p) {
            const double r = params.max_point_range * std::sqrt(unit(rng));
            const double theta = 2.0 * 3.14159265358979323846 * unit(rng);
            const double z = -1.5 + 2.0 * unit(rng);
            frame.points.push_back({r * std::cos(theta), r * std::sin(theta), z});
        }
    }

    scene.cloud = build_global_cloud(scene.frames);

    // Plant rare regions on anchor points inside the configured zone, close
    // enough to the path that a disc centered on it can reach them.
    const std::size_t first = static_cast<std::size_t>(
        params.rare_zone_begin * static_cast<double>(params.frame_count));
    const std::size_t last = std::max<std::size_t>(
        first + 1, static_cast<std::size_t>(params.rare_zone_end *
                                            static_cast<double>(params.frame_count)));
    for (std::size_t r = 0; r < params.rare_region_count; ++r) {
        Vec3 anchor;
        bool found = false;
        for (int attempt = 0; attempt < 64 && !found; ++attempt) {
            const std::size_t k =
                first + static_cast<std::size_t>(unit(rng) * static_cast<double>(last - first));
            const Frame& frame = scene.frames[std::min(k, params.frame_count - 1)];
            if (frame.points.empty()) continue;
            const std::size_t p =
                static_cast<std::size_t>(unit(rng) * static_cast<double>(frame.points.size()));
            const Vec3 candidate = frame.pose.apply(frame.points[std::min(p, frame.points.size() - 1)]);
            if (std::abs(candidate.y) > params.rare_region_max_lateral) continue;
            bool overlaps = false;
            for (const RareRegion& other : scene.rare_regions) {
                if ((candidate - other.center).norm() < 2.0 * params.rare_region_radius) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps && attempt < 48) continue;
            anchor = candidate;
            found = true;
        }
        if (!found) continue;  // zone too small; scene simply gets fewer regions
        const int class_id = static_cast<int>(scene.class_count - params.rare_class_count +
                                              r % params.rare_class_count);
        scene.rare_regions.push_back({anchor, params.rare_region_radius, class_id});
    }

    // Ground truth: region points take the region class; the rest draw from
    // the head-class distribution.
    const std::size_t head_classes = scene.class_count - (scene.rare_regions.empty()
                                                              ? 0
                                                              : params.rare_class_count);
    std::vector<double> head_cdf(head_classes, 0.0);
    {
        double head_sum = 0.0;
        for (std::size_t c = 0; c < head_classes; ++c) head_sum += params.class_frequencies[c];
        double acc = 0.0;
        for (std::size_t c = 0; c < head_classes; ++c) {
            acc += params.class_frequencies[c] / head_sum;
            head_cdf[c] = acc;
        }
        head_cdf.back() = 1.0;
    }
    scene.labels.resize(params.frame_count);
    std::size_t cloud_pos = 0;
    for (std::size_t k = 0; k < params.frame_count; ++k) {
        scene.labels[k].resize(scene.frames[k].points.size());
        for (std::size_t p = 0; p < scene.frames[k].points.size(); ++p, ++cloud_pos) {
            const Vec3& global = scene.cloud.points[cloud_pos].position;
            int label = -1;
            for (const RareRegion& region : scene.rare_regions) {
                if ((global - region.center).squared_norm() <= region.radius * region.radius) {
                    label = region.class_id;
                    break;
                }
            }
            if (label < 0) {
                const double u = unit(rng);
                std::size_t c = 0;
                while (c + 1 < head_classes && u > head_cdf[c]) ++c;
                label = static_cast<int>(c);
            }
            scene.labels[k][p] = label;
        }
    }
    return scene;
}

void SurrogateParams::validate() const {
    if (pass_count < 1) throw InvalidConfigError("surrogate: pass count must be >= 1");
    if (!(base_concentration > 0.0)) {
        throw InvalidConfigError("surrogate: base concentration must be > 0");
    }
    if (!(familiarity_halflife > 0.0) || !(accuracy_halflife > 0.0)) {
        throw InvalidConfigError("surrogate: halflives must be > 0");
    }
    if (!(mi_floor > 0.0)) throw InvalidConfigError("surrogate: mi floor must be > 0");
}

SurrogateModel::SurrogateModel(std::uint64_t seed, std::size_t class_count, SurrogateParams params)
    : seed_(seed), class_count_(class_count), params_(params) {
    if (class_count_ < 2) throw InvalidConfigError("surrogate: need at least 2 classes");
    params_.validate();
    familiarity_.assign(class_count_, 0);
}

void SurrogateModel::observe_labels(std::span<const std::uint64_t> labeled_per_class) {
    if (labeled_per_class.size() != class_count_) {
        throw InvalidInputError("surrogate: labeled counts must have one entry per class");
    }
    for (std::size_t c = 0; c < class_count_; ++c) {
        if (labeled_per_class[c] < familiarity_[c]) {
            throw InvalidInputError("surrogate: familiarity may not decrease");
        }
    }
    familiarity_.assign(labeled_per_class.begin(), labeled_per_class.end());
}

PassStack SurrogateModel::predict(const SyntheticScene& scene, std::uint64_t step) const {
    if (scene.class_count != class_count_) {
        throw InvalidInputError("surrogate: scene class count does not match model");
    }
    const std::size_t points = scene.total_points();
    const std::size_t passes = params_.pass_count;
    std::mt19937_64 rng(mix_seed(seed_, step));

    std::vector<double> data(points * passes * class_count_);
    std::size_t cloud_pos = 0;
    std::vector<double> alpha(class_count_);
    for (std::size_t k = 0; k < scene.frames.size(); ++k) {
        for (std::size_t p = 0; p < scene.frames[k].points.size(); ++p, ++cloud_pos) {
            const int truth = scene.labels[k][p];
            const double m = static_cast<double>(familiarity_[static_cast<std::size_t>(truth)]);
            const double accuracy = m / (m + params_.accuracy_halflife);
            const double concentration =
                params_.base_concentration * (1.0 + m / params_.familiarity_halflife);
            const double off = (1.0 - accuracy) / static_cast<double>(class_count_);
            for (std::size_t c = 0; c < class_count_; ++c) {
                const double mean =
                    off + (static_cast<int>(c) == truth ? accuracy : 0.0);
                alpha[c] = concentration * mean + 0.5;
            }
            for (std::size_t n = 0; n < passes; ++n) {
                double* row = data.data() + (cloud_pos * passes + n) * class_count_;
                double sum = 0.0;
                for (std::size_t c = 0; c < class_count_; ++c) {
                    std::gamma_distribution<double> gamma(alpha[c], 1.0);
                    row[c] = gamma(rng);
                    sum += row[c];
                }
                for (std::size_t c = 0; c < class_count_; ++c) row[c] /= sum;
            }
        }
    }
    return PassStack(points, passes, class_count_, std::move(data));
}

Strategy strategy_from_name(std::string_view name) {
    if (name == "dial-exact") return Strategy::DialExact;
    if (name == "dial-greedy") return Strategy::DialGreedy;
    if (name == "random") return Strategy::Random;
    if (name == "hpcs") return Strategy::Hpcs;
    throw InvalidConfigError("unknown strategy: " + std::string(name));
}

const char* to_string(Strategy strategy) noexcept {
    switch (strategy) {
        case Strategy::DialExact: return "dial-exact";
        case Strategy::DialGreedy: return "dial-greedy";
        case Strategy::Random: return "random";
        case Strategy::Hpcs: return "hpcs";
    }
    return "dial-exact";
}

void CostModel::validate() const {
    if (!(hours_per_disc > 0.0)) throw InvalidConfigError("cost: hours per disc must be > 0");
    if (!(overhead_min >= 0.0 && overhead_min <= overhead_max)) {
        throw InvalidConfigError("cost: overhead range must be ordered and >= 0");
    }
    if (hours_per_frame < 0.0) throw InvalidConfigError("cost: hours per frame must be >= 0");
}

void LoopConfig::validate() const {
    if (steps < 0) throw InvalidConfigError("loop: steps must be >= 0");
    if (discs_per_step < 1) throw InvalidConfigError("loop: discs per step must be >= 1");
    if (!(disc_radius > 0.0)) throw InvalidConfigError("loop: disc radius must be > 0");
    if (candidate_stride < 1) throw InvalidConfigError("loop: candidate stride must be >= 1");
    if (!(voxel_length > 0.0)) throw InvalidConfigError("loop: voxel length must be > 0");
    scene.validate();
    surrogate.validate();
    cost.validate();
}

namespace {

struct LoopWorkspace {
    std::vector<DiscCandidate> candidates;
    std::vector<std::vector<std::uint8_t>> masks;
    std::vector<Vec3> positions;       // global, frame-major
    std::vector<std::uint64_t> candidate_point_counts;
    std::vector<std::uint64_t> class_totals;
    std::vector<std::uint64_t> rare_totals;  // per class, only rare classes nonzero
};

void label_points_in_discs(const SyntheticScene& scene, const LoopConfig& config,
                           std::span<const DiscCandidate> candidates,
                           std::span<const std::uint32_t> disc_ids, ALState& state) {
    std::size_t cloud_pos = 0;
    for (std::size_t k = 0; k < scene.frames.size(); ++k) {
        for (std::size_t p = 0; p < scene.frames[k].points.size(); ++p, ++cloud_pos) {
            if (state.labeled_points[k][p]) continue;
            const Vec3& global = scene.cloud.points[cloud_pos].position;
            for (std::uint32_t id : disc_ids) {
                if (in_disc(global, candidates[id], config.distance)) {
                    state.labeled_points[k][p] = 1;
                    state.labeled_per_class[static_cast<std::size_t>(scene.labels[k][p])]++;
                    break;
                }
            }
        }
    }
}

StepMetrics collect_metrics(const SyntheticScene& scene, const LoopWorkspace& ws, ALState& state,
                            int step, std::vector<std::uint32_t> new_discs, double objective,
                            double hours_per_disc) {
    StepMetrics metrics;
    metrics.step = step;
    metrics.new_discs = std::move(new_discs);
    metrics.objective = objective;

    std::size_t labeled = 0;
    std::size_t rare_labeled = 0;
    std::size_t rare_total = 0;
    state.frame_statuses.clear();
    for (std::size_t k = 0; k < scene.frames.size(); ++k) {
        const std::size_t count = scene.frames[k].points.size();
        std::size_t frame_labeled = 0;
        for (std::size_t p = 0; p < count; ++p) {
            if (state.labeled_points[k][p]) ++frame_labeled;
        }
        labeled += frame_labeled;
        FrameLabelStatus status;
        status.frame_id = scene.frames[k].frame_id;
        if (count > 0) {
            status.labeled_point_fraction =
                static_cast<double>(frame_labeled) / static_cast<double>(count);
            if (frame_labeled == count) {
                status.status = LabelStatus::FullyLabeled;
            } else if (frame_labeled > 0) {
                status.status = LabelStatus::WeaklyLabeled;
            }
        }
        state.frame_statuses.push_back(status);
        switch (status.status) {
            case LabelStatus::FullyLabeled: ++metrics.fully_labeled_frames; break;
            case LabelStatus::WeaklyLabeled: ++metrics.weakly_labeled_frames; break;
            case LabelStatus::Unlabeled: ++metrics.unlabeled_frames; break;
        }
    }
    metrics.labeled_point_fraction =
        scene.total_points() == 0
            ? 0.0
            : static_cast<double>(labeled) / static_cast<double>(scene.total_points());

    metrics.class_coverage.assign(scene.class_count, 0.0);
    for (std::size_t c = 0; c < scene.class_count; ++c) {
        if (ws.class_totals[c] > 0) {
            metrics.class_coverage[c] = static_cast<double>(state.labeled_per_class[c]) /
                                        static_cast<double>(ws.class_totals[c]);
        }
        if (ws.rare_totals[c] > 0) {
            rare_total += ws.class_totals[c];
            rare_labeled += state.labeled_per_class[c];
        }
    }
    metrics.rare_region_coverage =
        rare_total == 0 ? 0.0
                        : static_cast<double>(rare_labeled) / static_cast<double>(rare_total);

    state.budget_hours =
        static_cast<double>(state.labeled_discs.size()) * hours_per_disc;
    metrics.budget_hours = state.budget_hours;
    return metrics;
}

}  // namespace

ALState run_loop(const SyntheticScene& scene, const LoopConfig& config) {
    config.validate();

    LoopWorkspace ws;
    ws.candidates = candidate_centers(scene.trajectory, config.candidate_stride,
                                      config.disc_radius);
    if (config.initial_disc >= ws.candidates.size()) {
        throw InvalidConfigError("loop: initial disc " + std::to_string(config.initial_disc) +
                                 " is not a candidate (have " +
                                 std::to_string(ws.candidates.size()) + ")");
    }
    ws.positions.reserve(scene.total_points());
    for (const GlobalPoint& gp : scene.cloud.points) ws.positions.push_back(gp.position);

    ws.class_totals.assign(scene.class_count, 0);
    ws.rare_totals.assign(scene.class_count, 0);
    for (std::size_t k = 0; k < scene.labels.size(); ++k) {
        for (int label : scene.labels[k]) {
            ws.class_totals[static_cast<std::size_t>(label)]++;
        }
    }
    for (const RareRegion& region : scene.rare_regions) {
        ws.rare_totals[static_cast<std::size_t>(region.class_id)] =
            ws.class_totals[static_cast<std::size_t>(region.class_id)];
    }

    ws.candidate_point_counts.reserve(ws.candidates.size());
    for (const DiscCandidate& c : ws.candidates) {
        ws.candidate_point_counts.push_back(
            scene.frames[static_cast<std::size_t>(c.source_pose)].points.size());
    }

    // Static geometry: grid membership and disc masks are built once.
    std::vector<double> zero_scores(scene.total_points(), 0.0);
    VoxelGrid grid = build_grid(ws.positions, zero_scores, config.voxel_length);
    const std::vector<Vec3> centers = grid.voxel_centers();
    ws.masks.reserve(ws.candidates.size());
    for (const DiscCandidate& c : ws.candidates) {
        ws.masks.push_back(disc_mask(c, centers, config.distance));
    }

    ALState state;
    state.labeled_discs = {static_cast<std::uint32_t>(config.initial_disc)};
    state.labeled_points.resize(scene.frames.size());
    for (std::size_t k = 0; k < scene.frames.size(); ++k) {
        state.labeled_points[k].assign(scene.frames[k].points.size(), 0);
    }
    state.labeled_per_class.assign(scene.class_count, 0);
    label_points_in_discs(scene, config, ws.candidates, state.labeled_discs, state);
    state.history.push_back(collect_metrics(scene, ws, state, 0, state.labeled_discs, 0.0,
                                            config.cost.hours_per_disc));

    SurrogateModel model(config.model_seed, scene.class_count, config.surrogate);

    for (int t = 1; t <= config.steps; ++t) {
        model.observe_labels(state.labeled_per_class);
        const PassStack stack = model.predict(scene, static_cast<std::uint64_t>(t));
        const UncertaintyField field = compute_uncertainty(stack, config.metric);
        grid.set_scores(field.scores);
        pool(grid, config.pool_fn);

        const SelectionProblem problem =
            build_problem(grid, ws.candidates, ws.masks, config.discs_per_step,
                          state.labeled_discs, config.policy);

        SelectionSolution solution;
        try {
            switch (config.strategy) {
                case Strategy::DialExact: solution = solve_exact(problem); break;
                case Strategy::DialGreedy: solution = solve_greedy(problem); break;
                case Strategy::Random:
                    solution = select_random(
                        problem, mix_seed(config.selection_seed, static_cast<std::uint64_t>(t)));
                    break;
                case Strategy::Hpcs:
                    solution = select_hpcs(problem, ws.candidate_point_counts);
                    break;
            }
        } catch (const InfeasibleError& e) {
            state.halted = true;
            state.halt_reason = "step " + std::to_string(t) + ": " + e.what();
            break;
        }

        std::vector<std::uint32_t> new_discs;
        for (std::uint32_t id : solution.chosen) {
            if (!std::binary_search(state.labeled_discs.begin(), state.labeled_discs.end(), id)) {
                new_discs.push_back(id);
            }
        }
        state.labeled_discs = solution.chosen;
        state.step = t;
        label_points_in_discs(scene, config, ws.candidates, new_discs, state);
        state.history.push_back(collect_metrics(scene, ws, state, t, std::move(new_discs),
                                                solution.objective,
                                                config.cost.hours_per_disc));
    }
    return state;
}

BudgetReport budget_report(const ALState& state, const CostModel& cost) {
    cost.validate();
    BudgetReport report;
    report.labeled_discs = state.labeled_discs.size();
    report.total_hours = static_cast<double>(report.labeled_discs) * cost.hours_per_disc;
    report.hours_per_frame = cost.derived_hours_per_frame();
    report.framewise_total_hours =
        static_cast<double>(state.frame_statuses.size()) * report.hours_per_frame;
    report.cost_fraction = report.framewise_total_hours > 0.0
                               ? report.total_hours / report.framewise_total_hours
                               : 0.0;
    if (!state.history.empty()) {
        report.labeled_point_fraction = state.history.back().labeled_point_fraction;
    }
    return report;
}

}  // namespace dial

// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. argv[1] must be the path to the dial CLI binary (used to
// exercise the command-line surface).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dial/error.hpp"
#include "dial/io.hpp"
#include "dial/rng.hpp"
#include "dial/selection.hpp"
#include "dial/sim.hpp"
#include "dial/ssl.hpp"
#include "dial/uncertainty.hpp"
#include "dial/voxel_grid.hpp"

using namespace dial;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << "\n";
    if (!ok) ++failures;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SelectionProblem random_instance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SelectionProblem problem;
    const std::size_t voxels = 2 + rng() % 199;      // <= 200
    const std::size_t candidates = 2 + rng() % 11;   // <= 12
    problem.voxel_weights.resize(voxels);
    for (auto& w : problem.voxel_weights) w = unit(rng);
    problem.masks.resize(candidates);
    const double density = 0.03 + 0.3 * unit(rng);
    for (auto& mask : problem.masks) {
        for (std::uint32_t j = 0; j < voxels; ++j) {
            if (unit(rng) < density) mask.push_back(j);
        }
    }
    problem.budget = 1 + static_cast<int>(rng() % 4);  // N in {1..4}
    if (rng() % 2 == 0) {
        const std::uint32_t f = static_cast<std::uint32_t>(rng() % candidates);
        problem.fixed = {f};
    }
    problem.policy = rng() % 2 == 0 ? IntersectionPolicy::Allow : IntersectionPolicy::Prohibit;
    if (problem.fixed.size() + static_cast<std::size_t>(problem.budget) > candidates) {
        problem.budget = static_cast<int>(candidates - problem.fixed.size());
        if (problem.budget == 0) problem.budget = 1, problem.fixed.clear();
    }
    return problem;
}

// Criteria 1 and 3 share the instance stream.
void criteria_solver_exactness_and_greedy_bound() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240817);
    const double factor = 1.0 - 1.0 / std::exp(1.0);

    // The instance stream counts a draw once the exact, brute-force and
    // greedy solvers all produce a solution; exactness is still verified on
    // every feasible draw along the way (greedy can corner itself under
    // Prohibit, which only means that draw is replaced).
    int compared = 0;
    int greedy_ok = 0;
    bool objectives_identical = true;
    bool chosen_identical = true;
    bool infeasibility_agreement = true;
    while (compared < 500) {
        const SelectionProblem problem = random_instance(rng);
        SelectionSolution exact, brute;
        bool exact_infeasible = false, brute_infeasible = false;
        try {
            exact = solve_exact(problem);
        } catch (const InfeasibleError&) {
            exact_infeasible = true;
        }
        try {
            brute = solve_bruteforce(problem);
        } catch (const InfeasibleError&) {
            brute_infeasible = true;
        }
        if (exact_infeasible != brute_infeasible) infeasibility_agreement = false;
        if (exact_infeasible || brute_infeasible) continue;
        if (exact.objective != brute.objective) objectives_identical = false;
        if (exact.chosen != brute.chosen) chosen_identical = false;

        try {
            const SelectionSolution greedy = solve_greedy(problem);
            ++compared;
            if (greedy.objective >= factor * exact.objective - 1e-9) ++greedy_ok;
        } catch (const InfeasibleError&) {
        }
    }
    const double seconds = elapsed_seconds(start);
    report(1, objectives_identical && chosen_identical && infeasibility_agreement &&
                  seconds < 60.0,
           "exact vs brute force on 500 instances, objectives " +
               std::string(objectives_identical ? "identical" : "DIFFER") + ", chosen sets " +
               std::string(chosen_identical ? "identical" : "DIFFER") + ", " +
               std::to_string(seconds).substr(0, 5) + " s");

    // disjoint-mask side condition of criterion 3
    bool disjoint_equal = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        SelectionProblem problem;
        const std::size_t candidates = 3 + rng() % 9;
        problem.voxel_weights.resize(candidates * 3);
        for (auto& w : problem.voxel_weights) w = unit(rng);
        problem.masks.resize(candidates);
        for (std::uint32_t i = 0; i < candidates; ++i) {
            problem.masks[i] = {3 * i, 3 * i + 1, 3 * i + 2};
        }
        problem.budget = 1 + static_cast<int>(rng() % 3);
        const SelectionSolution exact = solve_exact(problem);
        const SelectionSolution greedy = solve_greedy(problem);
        if (greedy.chosen != exact.chosen || greedy.objective != exact.objective) {
            disjoint_equal = false;
        }
    }
    report(3, greedy_ok == compared && disjoint_equal,
           "greedy >= (1-1/e) * exact on " + std::to_string(compared) +
               " instances, equality on disjoint masks " +
               (disjoint_equal ? "holds" : "FAILS"));
}

void criterion_argmax_collapse() {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> coord(-25.0, 25.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec3> points;
        std::vector<double> scores;
        const std::size_t n_points = 50 + rng() % 200;
        for (std::size_t k = 0; k < n_points; ++k) {
            points.push_back({coord(rng), coord(rng), coord(rng) * 0.1});
            scores.push_back(unit(rng));
        }
        VoxelGrid grid = build_grid(points, scores, 0.5);
        pool(grid, PoolFn::Min);
        const std::vector<Vec3> centers = grid.voxel_centers();

        std::vector<DiscCandidate> candidates;
        std::vector<std::vector<std::uint8_t>> masks;
        const std::size_t n_cands = 3 + rng() % 10;
        for (std::uint32_t i = 0; i < n_cands; ++i) {
            candidates.push_back({i, {coord(rng), coord(rng), 0.0}, 4.0 + 8.0 * unit(rng), -1});
            masks.push_back(disc_mask(candidates[i], centers));
        }
        const std::vector<DiscScore> alphas = disc_scores(grid, candidates, masks);
        std::uint32_t argmax = 0;
        for (std::uint32_t i = 1; i < alphas.size(); ++i) {
            if (alphas[i].alpha > alphas[argmax].alpha) argmax = i;
        }
        const SelectionProblem problem =
            build_problem(grid, candidates, masks, 1, {}, IntersectionPolicy::Allow);
        const SelectionSolution sol = solve_exact(problem);
        if (sol.chosen.size() != 1 || sol.chosen[0] != argmax) ok = false;
        if (sol.objective != alphas[argmax].alpha) ok = false;
    }
    report(2, ok, "budget-1 exact selection equals the argmax disc on 100 instances");
}

void criterion_mutual_information() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unit(0.001, 1.0);
    bool bounds_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t classes = 2 + rng() % 19;   // <= 20
        const std::size_t passes = 1 + rng() % 32;    // <= 32
        std::vector<double> data;
        for (std::size_t r = 0; r < passes; ++r) {
            std::vector<double> row(classes);
            double sum = 0.0;
            for (auto& v : row) sum += v = unit(rng);
            for (auto& v : row) data.push_back(v / sum);
        }
        const PassStack stack(1, passes, classes, std::move(data));
        const double mi = mutual_information(stack)[0];
        const double ent = softmax_entropy(stack)[0];
        const double lnc = std::log(static_cast<double>(classes));
        if (!(mi >= 0.0 && mi <= ent + 1e-10 && ent <= lnc + 1e-10)) bounds_ok = false;
    }

    bool identical_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t classes = 2 + rng() % 19;
        const std::size_t passes = 2 + rng() % 31;
        std::vector<double> row(classes);
        double sum = 0.0;
        for (auto& v : row) sum += v = unit(rng);
        for (auto& v : row) v /= sum;
        std::vector<double> data;
        for (std::size_t r = 0; r < passes; ++r) data.insert(data.end(), row.begin(), row.end());
        const PassStack stack(1, passes, classes, std::move(data));
        if (!(mutual_information(stack)[0] <= 1e-12)) identical_ok = false;
    }

    const PassStack onehot(1, 2, 2, {1.0, 0.0, 0.0, 1.0});
    const double ln2 = std::log(2.0);
    const bool ln2_ok = std::abs(mutual_information(onehot)[0] - ln2) <= 1e-12;

    const PassStack pinned(1, 2, 2, {0.8, 0.2, 0.6, 0.4});
    // mpmath, 50 digits: 0.024157256781171305261
    const bool pinned_ok = std::abs(mutual_information(pinned)[0] - 0.024157256781171305) < 1e-6;

    report(4, bounds_ok && identical_ok && ln2_ok && pinned_ok,
           std::string("MI bounds on 1000 stacks ") + (bounds_ok ? "hold" : "FAIL") +
               ", identical passes " + (identical_ok ? "zero" : "NONZERO") +
               ", one-hot pair = ln 2 " + (ln2_ok ? "exact" : "OFF") + ", pinned value " +
               (pinned_ok ? "matches" : "OFF"));
}

void criterion_density_invariance() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coord(-12.0, 12.0);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    bool pooled_invariant = true;
    bool alpha_invariant = true;
    bool sum_increases = true;

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec3> points;
        std::vector<double> scores;
        for (int k = 0; k < 250; ++k) {
            points.push_back({coord(rng), coord(rng), coord(rng) * 0.2});
            scores.push_back(unit(rng));
        }
        const DiscCandidate disc{0, {0, 0, 0}, 9.0, -1};
        const std::size_t dup = rng() % points.size();

        for (PoolFn fn : {PoolFn::Min, PoolFn::Max}) {
            VoxelGrid before = build_grid(points, scores, 0.5);
            pool(before, fn);
            std::vector<Vec3> points2 = points;
            std::vector<double> scores2 = scores;
            points2.push_back(points[dup]);
            scores2.push_back(scores[dup]);
            VoxelGrid after = build_grid(points2, scores2, 0.5);
            pool(after, fn);
            if (before.pooled_values() != after.pooled_values()) pooled_invariant = false;

            const std::vector<DiscCandidate> discs = {disc};
            const auto mask_before = std::vector<std::vector<std::uint8_t>>{
                disc_mask(disc, before.voxel_centers())};
            const auto mask_after = std::vector<std::vector<std::uint8_t>>{
                disc_mask(disc, after.voxel_centers())};
            if (disc_scores(before, discs, mask_before)[0].alpha !=
                disc_scores(after, discs, mask_after)[0].alpha) {
                alpha_invariant = false;
            }
        }

        // flat discwise sum strictly increases when duplicating a positive
        // score the disc can see
        std::size_t inside = 0;
        while (!in_disc(points[inside], disc)) ++inside;
        std::vector<Vec3> points2 = points;
        std::vector<double> scores2 = scores;
        points2.push_back(points[inside]);
        scores2.push_back(scores[inside]);
        const double flat_before =
            baseline_disc_aggregate(points, scores, disc, BaselineAggregate::Sum);
        const double flat_after =
            baseline_disc_aggregate(points2, scores2, disc, BaselineAggregate::Sum);
        if (!(flat_after > flat_before)) sum_increases = false;
    }
    report(5, pooled_invariant && alpha_invariant && sum_increases,
           std::string("min/max pooling invariant to duplication (") +
               (pooled_invariant && alpha_invariant ? "exact" : "VIOLATED") +
               "), flat sum strictly increases (" + (sum_increases ? "yes" : "NO") + ")");
}

void criterion_ssl_kernels() {
    std::vector<double> teacher = {0.0};
    const std::vector<double> student = {1.0};
    for (int k = 0; k < 100; ++k) teacher = ema_update(teacher, student, 0.99);
    // mpmath: 1 - 0.99^100 = 0.63396765872677049507
    const bool ema_ok = std::abs(teacher[0] - 0.6339676587267705) <= 1e-12;

    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> unit(0.001, 1.0);
    bool kl_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(4), t(4);
        double ss = 0.0, ts = 0.0;
        for (auto& v : s) ss += v = unit(rng);
        for (auto& v : t) ts += v = unit(rng);
        for (auto& v : s) v /= ss;
        for (auto& v : t) v /= ts;
        const double kl = kl_consistency(s, t);
        if (kl < 0.0) kl_ok = false;
        double max_diff = 0.0;
        for (std::size_t c = 0; c < 4; ++c) max_diff = std::max(max_diff, std::abs(s[c] - t[c]));
        if (max_diff < 1e-9 && kl > 1e-9) kl_ok = false;
        if (kl <= 1e-12 && max_diff > 1e-9) kl_ok = false;
        if (kl_consistency(s, s) > 1e-15) kl_ok = false;
    }

    std::vector<Vec3> points;
    for (int k = 0; k < 50; ++k) {
        points.push_back({unit(rng) * 10, unit(rng) * 10, unit(rng)});
    }
    const std::vector<Vec3> out = perturb(points, 12345, PerturbParams{});
    bool perturb_ok = out.size() == points.size();
    for (std::size_t k = 0; k < points.size() && perturb_ok; ++k) {
        perturb_ok = std::abs(out[k].x - points[k].x) <= 1e-12 &&
                     std::abs(out[k].y - points[k].y) <= 1e-12 &&
                     std::abs(out[k].z - points[k].z) <= 1e-12;
    }

    report(6, ema_ok && kl_ok && perturb_ok,
           std::string("EMA closed form ") + (ema_ok ? "within 1e-12" : "OFF") +
               ", KL sign/equality on 1000 pairs " + (kl_ok ? "hold" : "FAIL") +
               ", zero-magnitude perturbation identity " + (perturb_ok ? "holds" : "FAILS"));
}

void criterion_loop_via_cli(const std::string& cli) {
    const auto dir = std::filesystem::temp_directory_path() / "dial-acceptance";
    std::filesystem::create_directories(dir);
    const auto manifest_path = dir / "run.manifest";
    const auto metrics_path = dir / "run.metrics";
    const std::string command = cli + " simulate --steps 10 --per-step 5 --manifest " +
                                manifest_path.string() + " --metrics " + metrics_path.string() +
                                " > " + (dir / "stdout.txt").string();
    const int rc = std::system(command.c_str());
    bool ok = rc == 0;
    std::string detail = "simulate --steps 10 --per-step 5";
    if (ok) {
        const RunManifest manifest = parse_manifest(read_text_file(manifest_path));
        std::size_t discs = manifest.initial_discs.size();
        for (const auto& step : manifest.steps) discs += step.new_discs.size();
        const double budget = manifest.steps.empty() ? 0.0 : manifest.steps.back().budget_hours;
        ok = discs == 51 && manifest.steps.size() == 10 && budget == 178.5;
        detail += ": " + std::to_string(discs) + " discs, budget " + std::to_string(budget) +
                  " h (want 51 and 178.5 exactly)";
    } else {
        detail += " exited with " + std::to_string(rc);
    }
    report(7, ok, detail);
}

void criterion_selection_quality() {
    const auto start = std::chrono::steady_clock::now();
    LoopConfig config;  // default synthetic scene
    config.steps = 5;

    std::vector<double> dial_cov, random_cov, hpcs_cov;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        LoopConfig c = config;
        c.scene_seed = seed;
        c.model_seed = mix_seed(seed, 101);
        c.selection_seed = mix_seed(seed, 202);
        const SyntheticScene scene = generate_scene(c.scene_seed, c.scene);

        auto run = [&](Strategy strategy) {
            LoopConfig sc = c;
            sc.strategy = strategy;
            const ALState state = run_loop(scene, sc);
            std::cout << "  seed " << seed << " " << to_string(strategy)
                      << ": rare-coverage " << state.history.back().rare_region_coverage
                      << ", objective " << state.history.back().objective << "\n";
            return state.history.back().rare_region_coverage;
        };
        dial_cov.push_back(run(Strategy::DialExact));
        random_cov.push_back(run(Strategy::Random));
        hpcs_cov.push_back(run(Strategy::Hpcs));
    }
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double dial_mean = mean(dial_cov);
    const double random_mean = mean(random_cov);
    const double hpcs_mean = mean(hpcs_cov);
    const double seconds = elapsed_seconds(start);
    const bool ok = dial_mean > random_mean && dial_mean > hpcs_mean && seconds < 300.0;
    std::ostringstream detail;
    detail << "mean rare coverage after 5 steps over 20 seeds: dial-exact " << dial_mean
           << " vs random " << random_mean << " vs hpcs " << hpcs_mean << " ("
           << static_cast<int>(seconds) << " s)";
    report(8, ok, detail.str());
}

void criterion_determinism_roundtrip(const std::string& cli) {
    // bitwise-identical manifests for identical seeds and configs
    LoopConfig config;
    config.steps = 2;
    config.scene.frame_count = 80;
    config.scene.points_per_frame = 60;
    config.initial_disc = 5;
    const SyntheticScene scene = generate_scene(config.scene_seed, config.scene);
    const std::string a = manifest_to_text(manifest_from_run(config, run_loop(scene, config)));
    const std::string b = manifest_to_text(manifest_from_run(config, run_loop(scene, config)));
    bool ok = a == b;
    std::string detail = std::string("repeated runs bitwise identical: ") +
                         (ok ? "yes" : "NO");

    // and through the CLI, where fresh processes must agree too
    const auto dir = std::filesystem::temp_directory_path() / "dial-acceptance";
    std::filesystem::create_directories(dir);
    const auto m1 = dir / "det1.manifest";
    const auto m2 = dir / "det2.manifest";
    const std::string base = cli + " simulate --steps 2 --per-step 3 --seed 99 --manifest ";
    if (std::system((base + m1.string() + " > /dev/null").c_str()) != 0 ||
        std::system((base + m2.string() + " > /dev/null").c_str()) != 0 ||
        read_text_file(m1) != read_text_file(m2)) {
        ok = false;
        detail += ", CLI reruns differ";
    } else {
        detail += ", CLI reruns identical";
    }

    // manifest replay reproduces the recorded selections
    {
        const RunManifest recorded = parse_manifest(read_text_file(m1));
        const SyntheticScene replay_scene =
            generate_scene(recorded.config.scene_seed, recorded.config.scene);
        const ALState replayed = run_loop(replay_scene, recorded.config);
        const RunManifest again = manifest_from_run(recorded.config, replayed);
        if (manifest_to_text(again) != read_text_file(m1)) {
            ok = false;
            detail += ", replay diverges";
        } else {
            detail += ", replay reproduces selections";
        }
    }

    // 100 fuzzed round-trips per format
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    bool roundtrips_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        {  // poses
            std::vector<Pose> poses;
            for (int k = 0; k < 5; ++k) {
                poses.push_back({Mat3::rotation_z(coord(rng) * 0.01),
                                 {coord(rng), coord(rng), coord(rng)}});
            }
            const auto parsed = parse_poses(poses_to_text(poses));
            for (std::size_t k = 0; k < poses.size(); ++k) {
                if (!(parsed[k].rotation == poses[k].rotation &&
                      parsed[k].translation == poses[k].translation)) {
                    roundtrips_ok = false;
                }
            }
        }
        {  // tensor (float32 payload)
            const std::size_t classes = 2 + rng() % 6;
            const std::size_t passes = 1 + rng() % 4;
            std::vector<double> data;
            for (std::size_t r = 0; r < 3 * passes; ++r) {
                std::vector<float> row(classes);
                float sum = 0.0f;
                for (auto& v : row) sum += v = static_cast<float>(unit(rng)) + 0.01f;
                for (auto& v : row) data.push_back(static_cast<double>(v / sum));
            }
            const PassStack stack(3, passes, classes, std::move(data));
            const PassStack parsed = parse_probability_tensor(probability_tensor_to_bytes(stack));
            const auto lhs = stack.flat();
            const auto rhs = parsed.flat();
            for (std::size_t i = 0; i < lhs.size(); ++i) {
                if (static_cast<float>(lhs[i]) != static_cast<float>(rhs[i])) {
                    roundtrips_ok = false;
                }
            }
        }
        {  // scores
            std::vector<double> scores;
            for (int k = 0; k < 10; ++k) scores.push_back(coord(rng));
            if (parse_scores(scores_to_text(scores)) != scores) roundtrips_ok = false;
        }
        {  // points
            std::vector<Vec3> pts;
            for (int k = 0; k < 10; ++k) pts.push_back({coord(rng), coord(rng), coord(rng)});
            if (parse_points(points_to_text(pts)) != pts) roundtrips_ok = false;
        }
        {  // candidates
            std::vector<DiscCandidate> cands;
            for (std::uint32_t k = 0; k < 6; ++k) {
                cands.push_back({k, {coord(rng), coord(rng), 0.0}, 0.5 + unit(rng) * 60.0,
                                 static_cast<int>(rng() % 100)});
            }
            const auto parsed = parse_candidates(candidates_to_text(cands));
            for (std::size_t k = 0; k < cands.size(); ++k) {
                if (!(parsed[k].center == cands[k].center) ||
                    parsed[k].radius != cands[k].radius ||
                    parsed[k].source_pose != cands[k].source_pose) {
                    roundtrips_ok = false;
                }
            }
        }
        {  // counts
            std::vector<std::uint64_t> counts;
            for (int k = 0; k < 8; ++k) counts.push_back(rng());
            if (parse_counts(counts_to_text(counts)) != counts) roundtrips_ok = false;
        }
        {  // selection instance
            SelectionProblem problem;
            const std::size_t voxels = 2 + rng() % 30;
            problem.voxel_weights.resize(voxels);
            for (auto& w : problem.voxel_weights) w = unit(rng);
            problem.masks.resize(2 + rng() % 6);
            for (auto& mask : problem.masks) {
                for (std::uint32_t j = 0; j < voxels; ++j) {
                    if (unit(rng) < 0.3) mask.push_back(j);
                }
            }
            problem.budget = 1;
            const SelectionProblem parsed = instance_from_text(to_instance_text(problem));
            if (parsed.voxel_weights != problem.voxel_weights ||
                parsed.masks != problem.masks) {
                roundtrips_ok = false;
            }
        }
        {  // grid summary
            GridSummary summary;
            summary.voxel_length = 0.25 + unit(rng);
            for (int k = 0; k < 12; ++k) {
                summary.indices.push_back({static_cast<std::int64_t>(rng() % 100) - 50,
                                           static_cast<std::int64_t>(rng() % 100) - 50,
                                           static_cast<std::int64_t>(rng() % 10)});
                summary.point_counts.push_back(static_cast<std::uint32_t>(1 + rng() % 9));
                summary.pooled.push_back(unit(rng));
            }
            const GridSummary parsed = parse_grid(grid_to_text(summary));
            if (parsed.voxel_length != summary.voxel_length ||
                parsed.indices != summary.indices || parsed.pooled != summary.pooled ||
                parsed.point_counts != summary.point_counts) {
                roundtrips_ok = false;
            }
        }
        {  // manifest
            RunManifest manifest;
            manifest.config.steps = static_cast<int>(rng() % 10);
            manifest.config.disc_radius = unit(rng) * 60.0;
            manifest.initial_discs = {static_cast<std::uint32_t>(rng() % 50)};
            const int steps = static_cast<int>(rng() % 4);
            for (int t = 1; t <= steps; ++t) {
                manifest.steps.push_back({t,
                                          {static_cast<std::uint32_t>(rng() % 50),
                                           static_cast<std::uint32_t>(50 + rng() % 50)},
                                          coord(rng) + 100.0, 3.5 * t});
            }
            const std::string text = manifest_to_text(manifest);
            if (manifest_to_text(parse_manifest(text)) != text) roundtrips_ok = false;
        }
    }
    detail += std::string(", 100 fuzzed round-trips per format ") +
              (roundtrips_ok ? "bit-exact" : "DIVERGED");
    report(9, ok && roundtrips_ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: dial_acceptance <path-to-dial-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];

    criteria_solver_exactness_and_greedy_bound();  // criteria 1 and 3
    criterion_argmax_collapse();                   // criterion 2
    criterion_mutual_information();                // criterion 4
    criterion_density_invariance();                // criterion 5
    criterion_ssl_kernels();                       // criterion 6
    criterion_loop_via_cli(cli);                   // criterion 7
    criterion_selection_quality();                 // criterion 8
    criterion_determinism_roundtrip(cli);          // criterion 9

    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}

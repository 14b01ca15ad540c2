// dial: discwise active-learning pipeline for sequential LiDAR point clouds.
//
// Subcommands: uncertainty, aggregate, select, simulate, report. All output
// formats are documented in docs/formats.md. Errors print a machine-parsable
// category to stderr and map to distinct exit codes.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dial/error.hpp"
#include "dial/io.hpp"
#include "dial/rng.hpp"
#include "dial/selection.hpp"
#include "dial/sim.hpp"
#include "dial/text_util.hpp"
#include "dial/uncertainty.hpp"
#include "dial/voxel_grid.hpp"

namespace {

int exit_code_for(dial::ErrorCategory category) {
    switch (category) {
        case dial::ErrorCategory::InvalidConfig: return 3;
        case dial::ErrorCategory::InvalidInput: return 4;
        case dial::ErrorCategory::Parse: return 5;
        case dial::ErrorCategory::Io: return 6;
        case dial::ErrorCategory::Infeasible: return 7;
    }
    return 1;
}

struct UncertaintyArgs {
    std::string tensor_path;
    std::string metric = "mi";
    std::string output_path;
};

int run_uncertainty(const UncertaintyArgs& args) {
    const dial::PassStack stack = dial::read_probability_tensor(args.tensor_path);
    const dial::Metric metric = dial::metric_from_name(args.metric);
    const dial::UncertaintyField field = dial::compute_uncertainty(stack, metric);
    dial::write_text_file(args.output_path, dial::scores_to_text(field.scores));
    std::cout << "dial uncertainty v1\n";
    std::cout << "metric " << dial::to_string(metric) << "\n";
    std::cout << "points " << field.scores.size() << "\n";
    std::cout << "output " << args.output_path << "\n";
    return 0;
}

struct AggregateArgs {
    std::string points_path;
    std::string scores_path;
    std::string candidates_path;
    double voxel_size = 0.5;
    std::string pool = "min";
    std::string distance = "planar";
    std::string disc_aggregate = "voxel";
    std::string grid_out;
    std::string disc_scores_out;
};

dial::DistanceMode distance_from_name(const std::string& name) {
    if (name == "planar") return dial::DistanceMode::Planar;
    if (name == "3d") return dial::DistanceMode::Euclidean3d;
    throw dial::InvalidConfigError("distance must be planar or 3d");
}

int run_aggregate(const AggregateArgs& args) {
    const std::vector<dial::Vec3> points =
        dial::parse_points(dial::read_text_file(args.points_path));
    const std::vector<double> scores = dial::parse_scores(dial::read_text_file(args.scores_path));
    if (points.size() != scores.size()) {
        throw dial::InvalidInputError("points and scores must have the same length");
    }
    const dial::DistanceMode distance = distance_from_name(args.distance);

    dial::VoxelGrid grid = dial::build_grid(points, scores, args.voxel_size);
    dial::pool(grid, dial::pool_fn_from_name(args.pool));

    std::cout << "dial aggregate v1\n";
    std::cout << "points " << points.size() << "\n";
    std::cout << "voxels " << grid.voxel_count() << "\n";

    if (!args.grid_out.empty()) {
        dial::write_text_file(args.grid_out, dial::grid_to_text(dial::summarize(grid)));
        std::cout << "grid " << args.grid_out << "\n";
    }

    if (!args.candidates_path.empty()) {
        const std::vector<dial::DiscCandidate> candidates =
            dial::parse_candidates(dial::read_text_file(args.candidates_path));
        std::vector<double> alphas;
        if (args.disc_aggregate == "voxel") {
            const std::vector<dial::Vec3> centers = grid.voxel_centers();
            std::vector<std::vector<std::uint8_t>> masks;
            masks.reserve(candidates.size());
            for (const dial::DiscCandidate& c : candidates) {
                masks.push_back(dial::disc_mask(c, centers, distance));
            }
            for (const dial::DiscScore& s : dial::disc_scores(grid, candidates, masks)) {
                alphas.push_back(s.alpha);
            }
        } else {
            const dial::BaselineAggregate mode = args.disc_aggregate == "mean"
                                                     ? dial::BaselineAggregate::Mean
                                                     : dial::BaselineAggregate::Sum;
            if (args.disc_aggregate != "mean" && args.disc_aggregate != "sum") {
                throw dial::InvalidConfigError("disc-aggregate must be voxel, mean or sum");
            }
            for (const dial::DiscCandidate& c : candidates) {
                alphas.push_back(
                    dial::baseline_disc_aggregate(points, scores, c, mode, distance));
            }
        }
        if (args.disc_scores_out.empty()) {
            throw dial::InvalidConfigError("--candidates requires --disc-scores-out");
        }
        dial::write_text_file(args.disc_scores_out, dial::scores_to_text(alphas));
        std::cout << "candidates " << candidates.size() << "\n";
        std::cout << "disc-scores " << args.disc_scores_out << "\n";
    }
    return 0;
}

struct SelectArgs {
    std::string problem_path;
    std::string grid_path;
    std::string candidates_path;
    std::string counts_path;
    int budget = 1;
    std::string strategy = "exact";
    std::string fixed;
    std::string policy = "allow";
    std::uint64_t seed = 0;
    std::string distance = "planar";
    std::string solution_out;
    std::string instance_out;
};

int run_select(const SelectArgs& args) {
    dial::SelectionProblem problem;
    if (!args.problem_path.empty()) {
        problem = dial::instance_from_text(dial::read_text_file(args.problem_path));
        problem.budget = args.budget;
    } else {
        if (args.grid_path.empty() || args.candidates_path.empty()) {
            throw dial::InvalidConfigError("select needs --problem or --grid with --candidates");
        }
        const dial::GridSummary summary =
            dial::parse_grid(dial::read_text_file(args.grid_path));
        const std::vector<dial::DiscCandidate> candidates =
            dial::parse_candidates(dial::read_text_file(args.candidates_path));
        const std::vector<dial::Vec3> centers = summary.centers();
        const dial::DistanceMode distance = distance_from_name(args.distance);
        problem.voxel_weights = summary.pooled;
        for (const dial::DiscCandidate& c : candidates) {
            const std::vector<std::uint8_t> dense = dial::disc_mask(c, centers, distance);
            std::vector<std::uint32_t> sparse;
            for (std::uint32_t j = 0; j < dense.size(); ++j) {
                if (dense[j]) sparse.push_back(j);
            }
            problem.masks.push_back(std::move(sparse));
        }
        problem.budget = args.budget;
    }
    if (!args.fixed.empty()) {
        problem.fixed.clear();
        for (const std::string& tok : [](std::string s) {
                 std::vector<std::string> parts;
                 std::string::size_type start = 0;
                 while (true) {
                     const auto comma = s.find(',', start);
                     parts.push_back(s.substr(start, comma - start));
                     if (comma == std::string::npos) break;
                     start = comma + 1;
                 }
                 return parts;
             }(args.fixed)) {
            const auto id = dial::parse_int<std::uint32_t>(tok);
            if (!id) throw dial::InvalidInputError("bad fixed id '" + tok + "'");
            problem.fixed.push_back(*id);
        }
        std::sort(problem.fixed.begin(), problem.fixed.end());
    }
    problem.policy = dial::policy_from_name(args.policy);
    problem.validate();

    if (!args.instance_out.empty()) {
        dial::write_text_file(args.instance_out, dial::to_instance_text(problem));
    }

    dial::SelectionSolution solution;
    if (args.strategy == "exact") {
        solution = dial::solve_exact(problem);
    } else if (args.strategy == "greedy") {
        solution = dial::solve_greedy(problem);
    } else if (args.strategy == "bruteforce") {
        solution = dial::solve_bruteforce(problem);
    } else if (args.strategy == "random") {
        solution = dial::select_random(problem, args.seed);
    } else if (args.strategy == "hpcs") {
        if (args.counts_path.empty()) {
            throw dial::InvalidConfigError("hpcs needs --counts with per-candidate point counts");
        }
        const std::vector<std::uint64_t> counts =
            dial::parse_counts(dial::read_text_file(args.counts_path));
        solution = dial::select_hpcs(problem, counts);
    } else {
        throw dial::InvalidConfigError("unknown strategy: " + args.strategy);
    }

    const std::string text = dial::solution_to_text(solution);
    if (!args.solution_out.empty()) dial::write_text_file(args.solution_out, text);
    std::cout << "dial select v1\n" << text;
    return 0;
}

struct SimulateArgs {
    std::optional<int> steps;
    std::optional<int> per_step;
    std::optional<std::string> strategy;
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string manifest_out = "dial-run.manifest";
    std::string metrics_out;
    bool print_config = false;
};

int run_simulate(const SimulateArgs& args) {
    dial::LoopConfig config;
    if (!args.config_path.empty()) {
        config = dial::parse_config(dial::read_text_file(args.config_path));
    }
    if (args.steps) config.steps = *args.steps;
    if (args.per_step) config.discs_per_step = *args.per_step;
    if (args.strategy) config.strategy = dial::strategy_from_name(*args.strategy);
    if (args.seed) {
        config.scene_seed = *args.seed;
        config.model_seed = dial::mix_seed(*args.seed, 101);
        config.selection_seed = dial::mix_seed(*args.seed, 202);
    }
    config.validate();

    if (args.print_config) {
        std::cout << dial::config_to_text(config);
        return 0;
    }

    const dial::SyntheticScene scene = dial::generate_scene(config.scene_seed, config.scene);
    const dial::ALState state = dial::run_loop(scene, config);
    const dial::RunManifest manifest = dial::manifest_from_run(config, state);
    dial::write_text_file(args.manifest_out, dial::manifest_to_text(manifest));
    if (!args.metrics_out.empty()) {
        dial::write_text_file(args.metrics_out, dial::metrics_to_text(state));
    }

    const dial::BudgetReport budget = dial::budget_report(state, config.cost);
    std::cout << "dial simulate v1\n";
    std::cout << "strategy " << dial::to_string(config.strategy) << "\n";
    std::cout << "steps-completed " << state.step << "\n";
    std::cout << "discs " << state.labeled_discs.size() << "\n";
    std::cout << "budget-hours " << dial::format_double(budget.total_hours) << "\n";
    std::cout << "labeled-fraction " << dial::format_double(budget.labeled_point_fraction)
              << "\n";
    std::cout << "manifest " << args.manifest_out << "\n";
    if (state.halted) std::cout << "halted " << state.halt_reason << "\n";
    return 0;
}

struct ReportArgs {
    std::string manifest_path;
    std::string table_out;
};

int run_report(const ReportArgs& args) {
    const dial::RunManifest manifest =
        dial::parse_manifest(dial::read_text_file(args.manifest_path));
    if (manifest.steps.empty()) {
        throw dial::InvalidInputError("no steps recorded");
    }

    const std::size_t total_discs =
        manifest.initial_discs.size() +
        [&] {
            std::size_t n = 0;
            for (const auto& s : manifest.steps) n += s.new_discs.size();
            return n;
        }();
    const double final_objective = manifest.steps.back().objective;
    const double budget_hours = manifest.steps.back().budget_hours;
    const dial::CostModel& cost = manifest.config.cost;
    const double hours_per_frame = cost.derived_hours_per_frame();
    const double framewise_total =
        hours_per_frame * static_cast<double>(manifest.config.scene.frame_count);

    std::cout << "dial report v1\n";
    std::cout << "strategy " << dial::to_string(manifest.config.strategy) << "\n";
    std::cout << "steps " << manifest.steps.size() << "\n";
    std::cout << "initial-discs " << manifest.initial_discs.size() << "\n";
    std::cout << "total-discs " << total_discs << "\n";
    std::cout << "final-objective " << dial::format_double(final_objective) << "\n";
    std::cout << "budget-hours " << dial::format_double(budget_hours) << "\n";
    std::cout << "framewise-equivalent-hours " << dial::format_double(framewise_total) << "\n";
    std::cout << "cost-fraction "
              << dial::format_double(framewise_total > 0.0 ? budget_hours / framewise_total : 0.0)
              << "\n";
    if (manifest.halted) std::cout << "halted " << manifest.halt_reason << "\n";

    if (!args.table_out.empty()) {
        std::string table = "step\tnew_discs\ttotal_discs\tobjective\tbudget_hours\n";
        std::size_t running = manifest.initial_discs.size();
        table += "0\t0\t" + std::to_string(running) + "\t0\t" +
                 dial::format_double(static_cast<double>(running) * cost.hours_per_disc) + "\n";
        for (const auto& step : manifest.steps) {
            running += step.new_discs.size();
            table += std::to_string(step.step) + "\t" + std::to_string(step.new_discs.size()) +
                     "\t" + std::to_string(running) + "\t" +
                     dial::format_double(step.objective) + "\t" +
                     dial::format_double(step.budget_hours) + "\n";
        }
        dial::write_text_file(args.table_out, table);
        std::cout << "table " << args.table_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discwise active learning for sequential LiDAR"};
    app.require_subcommand(1);

    UncertaintyArgs uncertainty_args;
    CLI::App* uncertainty = app.add_subcommand(
        "uncertainty", "Per-point uncertainty scores from a probability tensor");
    uncertainty->add_option("--tensor", uncertainty_args.tensor_path, "Probability tensor file")
        ->required();
    uncertainty->add_option("--metric", uncertainty_args.metric, "mi|ent|conf|mar");
    uncertainty->add_option("--output", uncertainty_args.output_path, "Scores output file")
        ->required();

    AggregateArgs aggregate_args;
    CLI::App* aggregate =
        app.add_subcommand("aggregate", "Voxel-pool scores and compute disc scores");
    aggregate->add_option("--points", aggregate_args.points_path, "Global points (x y z lines)")
        ->required();
    aggregate->add_option("--scores", aggregate_args.scores_path, "Per-point scores")->required();
    aggregate->add_option("--voxel-size", aggregate_args.voxel_size, "Voxel edge length (m)");
    aggregate->add_option("--pool", aggregate_args.pool, "min|max|mean");
    aggregate->add_option("--candidates", aggregate_args.candidates_path, "Disc candidates");
    aggregate->add_option("--distance", aggregate_args.distance, "planar|3d");
    aggregate->add_option("--disc-aggregate", aggregate_args.disc_aggregate,
                          "voxel|mean|sum (flat baselines bypass the grid)");
    aggregate->add_option("--grid-out", aggregate_args.grid_out, "Write the pooled grid here");
    aggregate->add_option("--disc-scores-out", aggregate_args.disc_scores_out,
                          "Write per-candidate scores here");

    SelectArgs select_args;
    CLI::App* select = app.add_subcommand("select", "Solve the disc selection problem");
    select->add_option("--problem", select_args.problem_path, "Instance file");
    select->add_option("--grid", select_args.grid_path, "Pooled grid file");
    select->add_option("--candidates", select_args.candidates_path, "Disc candidates");
    select->add_option("--counts", select_args.counts_path, "Per-candidate point counts (hpcs)");
    select->add_option("--budget", select_args.budget, "New discs to select")->required();
    select->add_option("--strategy", select_args.strategy,
                       "exact|greedy|random|hpcs|bruteforce");
    select->add_option("--fixed", select_args.fixed, "Comma list of already-selected ids");
    select->add_option("--policy", select_args.policy, "allow|prohibit");
    select->add_option("--seed", select_args.seed, "Seed for random strategy");
    select->add_option("--distance", select_args.distance, "planar|3d");
    select->add_option("--solution-out", select_args.solution_out, "Write the solution here");
    select->add_option("--instance-out", select_args.instance_out,
                       "Write the assembled instance here");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Run the closed active-learning loop");
    int steps_flag = 0, per_step_flag = 0;
    std::string strategy_flag;
    std::uint64_t seed_flag = 0;
    simulate->add_option("--steps", steps_flag, "Loop steps");
    simulate->add_option("--per-step", per_step_flag, "New discs per step");
    simulate->add_option("--strategy", strategy_flag,
                         "dial-exact|dial-greedy|random|hpcs");
    simulate->add_option("--seed", seed_flag, "Master seed (derives all seed streams)");
    simulate->add_option("--config", simulate_args.config_path, "Config file");
    simulate->add_option("--manifest", simulate_args.manifest_out, "Manifest output path");
    simulate->add_option("--metrics", simulate_args.metrics_out, "Metrics output path");
    simulate->add_flag("--print-config", simulate_args.print_config,
                       "Print the effective config and exit");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Summarize a run manifest");
    report->add_option("--manifest", report_args.manifest_path, "Manifest file")->required();
    report->add_option("--table", report_args.table_out, "Write a tab-separated step table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*uncertainty) return run_uncertainty(uncertainty_args);
        if (*aggregate) return run_aggregate(aggregate_args);
        if (*select) return run_select(select_args);
        if (*simulate) {
            if (simulate->count("--steps")) simulate_args.steps = steps_flag;
            if (simulate->count("--per-step")) simulate_args.per_step = per_step_flag;
            if (simulate->count("--strategy")) simulate_args.strategy = strategy_flag;
            if (simulate->count("--seed")) simulate_args.seed = seed_flag;
            return run_simulate(simulate_args);
        }
        if (*report) return run_report(report_args);
    } catch (const dial::Error& e) {
        std::cerr << "error: " << dial::to_string(e.category()) << ": " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

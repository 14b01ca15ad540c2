#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dial/geometry.hpp"
#include "dial/selection.hpp"
#include "dial/sim.hpp"
#include "dial/uncertainty.hpp"
#include "dial/voxel_grid.hpp"

namespace dial {

// Every format here is documented bit-exactly in docs/formats.md. Text
// formats print doubles with shortest round-trip formatting, so parsing what
// was written restores identical bits.

// --- pose text (one 3x4 row-major [R|t] line per frame) --------------------

std::vector<Pose> parse_poses(std::string_view text);
std::string poses_to_text(std::span<const Pose> poses);

// --- probability tensor (binary) --------------------------------------------
// Header of five little-endian u64: magic "DIALPROB", version 1, point count,
// pass count, class count; then row-major float32 [point][pass][class]. Rows
// are validated as probability vectors within 1e-4.

PassStack parse_probability_tensor(std::span<const std::byte> bytes);
std::vector<std::byte> probability_tensor_to_bytes(const PassStack& stack);

// --- simple line formats -----------------------------------------------------

std::vector<double> parse_scores(std::string_view text);       // dial-scores-v1
std::string scores_to_text(std::span<const double> scores);

std::vector<Vec3> parse_points(std::string_view text);         // x y z per line
std::string points_to_text(std::span<const Vec3> points);

std::vector<DiscCandidate> parse_candidates(std::string_view text);  // dial-candidates-v1
std::string candidates_to_text(std::span<const DiscCandidate> candidates);

std::vector<std::uint64_t> parse_counts(std::string_view text);  // dial-counts-v1
std::string counts_to_text(std::span<const std::uint64_t> counts);

// --- voxel grid summary ------------------------------------------------------
// Sparse pooled grid as text: one "ix iy iz point-count pooled" line per
// voxel, in sorted index order.

struct GridSummary {
    double voxel_length = 0.0;
    std::vector<VoxelIndex> indices;
    std::vector<std::uint32_t> point_counts;
    std::vector<double> pooled;

    std::vector<Vec3> centers() const;
};

GridSummary summarize(const VoxelGrid& grid);
GridSummary parse_grid(std::string_view text);
std::string grid_to_text(const GridSummary& summary);

// --- solution text -----------------------------------------------------------

std::string solution_to_text(const SelectionSolution& solution);
SelectionSolution parse_solution(std::string_view text);

// --- run manifest -------------------------------------------------------------
// Full config snapshot plus the per-step selections and budget ledger;
// replaying the config reproduces the selections exactly.

struct RunManifest {
    int format_version = 1;
    LoopConfig config;
    std::vector<std::uint32_t> initial_discs;
    struct Step {
        int step = 0;
        std::vector<std::uint32_t> new_discs;
        double objective = 0.0;
        double budget_hours = 0.0;
    };
    std::vector<Step> steps;
    bool halted = false;
    std::string halt_reason;
};

RunManifest manifest_from_run(const LoopConfig& config, const ALState& state);
std::string manifest_to_text(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view text);

// --- per-step metrics (line-delimited records, write-only) -------------------

std::string metrics_to_text(const ALState& state);

// --- loop config --------------------------------------------------------------
// `key value` lines with '#' comments; keys match the manifest's config
// section. Unknown keys are errors. Values overlay the given base config.

LoopConfig parse_config(std::string_view text, LoopConfig base = {});
std::string config_to_text(const LoopConfig& config);

// --- file helpers --------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::vector<std::byte> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

PassStack read_probability_tensor(const std::filesystem::path& path);
void write_probability_tensor(const std::filesystem::path& path, const PassStack& stack);

}  // namespace dial

#include "dial/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "dial/error.hpp"
#include "dial/text_util.hpp"

namespace dial {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

double require_double(const std::string& token, std::size_t line_no, const char* what) {
    const auto value = parse_double(token);
    if (!value) throw ParseError(std::string("bad ") + what + " '" + token + "'", line_no);
    return *value;
}

template <typename Int>
Int require_int(const std::string& token, std::size_t line_no, const char* what) {
    const auto value = parse_int<Int>(token);
    if (!value) throw ParseError(std::string("bad ") + what + " '" + token + "'", line_no);
    return *value;
}

/// Comma-joined list; "-" encodes the empty list.
template <typename T, typename Format>
std::string join_list(std::span<const T> values, Format format) {
    if (values.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += format(values[i]);
    }
    return out;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    if (text == "-") return out;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, std::size_t line_no,
                                      const char* what) {
    std::vector<double> out;
    for (const std::string& tok : split_commas(text)) {
        out.push_back(require_double(tok, line_no, what));
    }
    return out;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& text, std::size_t line_no,
                                          const char* what) {
    std::vector<std::uint32_t> out;
    for (const std::string& tok : split_commas(text)) {
        out.push_back(require_int<std::uint32_t>(tok, line_no, what));
    }
    return out;
}

std::string u32_list_to_text(std::span<const std::uint32_t> values) {
    return join_list(values, [](std::uint32_t v) { return std::to_string(v); });
}

std::string double_list_to_text(std::span<const double> values) {
    return join_list(values, [](double v) { return format_double(v); });
}

}  // namespace

// ---------------------------------------------------------------------------
// Poses

std::vector<Pose> parse_poses(std::string_view text) {
    std::vector<Pose> poses;
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 12) {
            throw ParseError("pose line needs 12 fields, got " + std::to_string(tokens.size()),
                             line_no);
        }
        Pose pose;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                const double v = require_double(tokens[static_cast<std::size_t>(4 * r + c)],
                                                line_no, "pose value");
                if (c == 3) {
                    (r == 0 ? pose.translation.x : r == 1 ? pose.translation.y
                                                          : pose.translation.z) = v;
                } else {
                    pose.rotation.at(r, c) = v;
                }
            }
        }
        if (!pose.is_valid(1e-4)) {
            throw ParseError("rotation is not orthonormal within 1e-4", line_no);
        }
        poses.push_back(pose);
    }
    return poses;
}

std::string poses_to_text(std::span<const Pose> poses) {
    std::string out;
    for (const Pose& pose : poses) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (r != 0 || c != 0) out += " ";
                const double v = c == 3 ? (r == 0   ? pose.translation.x
                                           : r == 1 ? pose.translation.y
                                                    : pose.translation.z)
                                        : pose.rotation.at(r, c);
                out += format_double(v);
            }
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Probability tensor

namespace {

constexpr std::uint64_t kTensorMagic = 0x424f52504c414944ull;  // "DIALPROB" LE
constexpr std::uint64_t kTensorVersion = 1;
constexpr std::uint64_t kMaxTensorValues = 1ull << 33;

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_u64(std::span<const std::byte> bytes, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(bytes[offset + i]))
             << (8 * i);
    }
    return v;
}

void validate_tensor_row(std::span<const float> row, std::size_t point) {
    double sum = 0.0;
    for (float v : row) {
        if (!(v >= -1e-4f && v <= 1.0f + 1e-4f)) {
            throw ParseError("probability outside [0,1] at point " + std::to_string(point));
        }
        sum += static_cast<double>(v);
    }
    if (std::abs(sum - 1.0) > 1e-4) {
        throw ParseError("simplex violation at point " + std::to_string(point));
    }
}

}  // namespace

PassStack parse_probability_tensor(std::span<const std::byte> bytes) {
    if (bytes.size() < 40) throw ParseError("tensor: truncated header");
    if (get_u64(bytes, 0) != kTensorMagic) throw ParseError("tensor: magic mismatch");
    if (get_u64(bytes, 8) != kTensorVersion) throw ParseError("tensor: unsupported version");
    const std::uint64_t points = get_u64(bytes, 16);
    const std::uint64_t passes = get_u64(bytes, 24);
    const std::uint64_t classes = get_u64(bytes, 32);
    if (points == 0 || passes == 0 || classes < 2) {
        throw ParseError("tensor: need points >= 1, passes >= 1, classes >= 2");
    }
    if (points > kMaxTensorValues / passes / classes) {
        throw ParseError("tensor: dimensions overflow sanity cap");
    }
    const std::uint64_t values = points * passes * classes;
    if (bytes.size() != 40 + values * 4) {
        throw ParseError("tensor: payload length mismatch, expected " +
                         std::to_string(values * 4) + " bytes, got " +
                         std::to_string(bytes.size() - 40));
    }

    std::vector<float> payload(values);
    std::memcpy(payload.data(), bytes.data() + 40, values * 4);
    for (std::uint64_t p = 0; p < points; ++p) {
        for (std::uint64_t n = 0; n < passes; ++n) {
            validate_tensor_row(
                std::span<const float>(payload.data() + (p * passes + n) * classes, classes), p);
        }
    }
    std::vector<double> data(payload.begin(), payload.end());
    return PassStack(points, passes, classes, std::move(data));
}

std::vector<std::byte> probability_tensor_to_bytes(const PassStack& stack) {
    if (stack.point_count() == 0 || stack.pass_count() == 0 || stack.class_count() < 2) {
        throw InvalidInputError("tensor: need points >= 1, passes >= 1, classes >= 2");
    }
    std::vector<float> payload;
    payload.reserve(stack.flat().size());
    for (double v : stack.flat()) payload.push_back(static_cast<float>(v));
    for (std::size_t p = 0; p < stack.point_count(); ++p) {
        for (std::size_t n = 0; n < stack.pass_count(); ++n) {
            validate_tensor_row(
                std::span<const float>(
                    payload.data() + (p * stack.pass_count() + n) * stack.class_count(),
                    stack.class_count()),
                p);
        }
    }
    std::vector<std::byte> out;
    out.reserve(40 + payload.size() * 4);
    put_u64(out, kTensorMagic);
    put_u64(out, kTensorVersion);
    put_u64(out, stack.point_count());
    put_u64(out, stack.pass_count());
    put_u64(out, stack.class_count());
    const std::size_t offset = out.size();
    out.resize(offset + payload.size() * 4);
    std::memcpy(out.data() + offset, payload.data(), payload.size() * 4);
    return out;
}

// ---------------------------------------------------------------------------
// Scores, points, candidates, counts

std::vector<double> parse_scores(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(stream, line) || line != "dial-scores-v1") {
        throw ParseError("expected dial-scores-v1 header", 1);
    }
    ++line_no;
    std::vector<double> scores;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        scores.push_back(require_double(line, line_no, "score"));
    }
    return scores;
}

std::string scores_to_text(std::span<const double> scores) {
    std::string out = "dial-scores-v1\n";
    for (double s : scores) out += format_double(s) + "\n";
    return out;
}

std::vector<Vec3> parse_points(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<Vec3> points;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 3) {
            throw ParseError("point line needs 3 fields, got " + std::to_string(tokens.size()),
                             line_no);
        }
        points.push_back({require_double(tokens[0], line_no, "x"),
                          require_double(tokens[1], line_no, "y"),
                          require_double(tokens[2], line_no, "z")});
    }
    return points;
}

std::string points_to_text(std::span<const Vec3> points) {
    std::string out;
    for (const Vec3& p : points) {
        out += format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.z) + "\n";
    }
    return out;
}

std::vector<DiscCandidate> parse_candidates(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(stream, line) || line != "dial-candidates-v1") {
        throw ParseError("expected dial-candidates-v1 header", 1);
    }
    ++line_no;
    std::vector<DiscCandidate> out;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 6) {
            throw ParseError("candidate line needs 6 fields: id x y z radius source-pose",
                             line_no);
        }
        DiscCandidate c;
        c.candidate_id = require_int<std::uint32_t>(tokens[0], line_no, "candidate id");
        c.center = {require_double(tokens[1], line_no, "x"),
                    require_double(tokens[2], line_no, "y"),
                    require_double(tokens[3], line_no, "z")};
        c.radius = require_double(tokens[4], line_no, "radius");
        c.source_pose = require_int<int>(tokens[5], line_no, "source pose");
        if (c.radius <= 0.0) throw ParseError("candidate radius must be > 0", line_no);
        if (c.candidate_id != out.size()) {
            throw ParseError("candidate ids must be positional (expected " +
                                 std::to_string(out.size()) + ")",
                             line_no);
        }
        out.push_back(c);
    }
    return out;
}

std::string candidates_to_text(std::span<const DiscCandidate> candidates) {
    std::string out = "dial-candidates-v1\n";
    for (const DiscCandidate& c : candidates) {
        out += std::to_string(c.candidate_id) + " " + format_double(c.center.x) + " " +
               format_double(c.center.y) + " " + format_double(c.center.z) + " " +
               format_double(c.radius) + " " + std::to_string(c.source_pose) + "\n";
    }
    return out;
}

std::vector<std::uint64_t> parse_counts(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(stream, line) || line != "dial-counts-v1") {
        throw ParseError("expected dial-counts-v1 header", 1);
    }
    ++line_no;
    std::vector<std::uint64_t> counts;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        counts.push_back(require_int<std::uint64_t>(line, line_no, "count"));
    }
    return counts;
}

std::string counts_to_text(std::span<const std::uint64_t> counts) {
    std::string out = "dial-counts-v1\n";
    for (std::uint64_t c : counts) out += std::to_string(c) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Grid summary

std::vector<Vec3> GridSummary::centers() const {
    std::vector<Vec3> out;
    out.reserve(indices.size());
    for (const VoxelIndex& idx : indices) {
        out.push_back({(static_cast<double>(idx.ix) + 0.5) * voxel_length,
                       (static_cast<double>(idx.iy) + 0.5) * voxel_length,
                       (static_cast<double>(idx.iz) + 0.5) * voxel_length});
    }
    return out;
}

GridSummary summarize(const VoxelGrid& grid) {
    GridSummary summary;
    summary.voxel_length = grid.voxel_length();
    const std::vector<double> pooled = grid.pooled_values();
    summary.pooled = pooled;
    summary.indices.reserve(grid.voxel_count());
    summary.point_counts.reserve(grid.voxel_count());
    for (const Voxel& v : grid.voxels()) {
        summary.indices.push_back(v.index);
        summary.point_counts.push_back(static_cast<std::uint32_t>(v.point_ids.size()));
    }
    return summary;
}

GridSummary parse_grid(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    if (!std::getline(stream, line) || line != "dial-grid-v1") {
        throw ParseError("expected dial-grid-v1 header", 1);
    }
    std::size_t line_no = 1;
    GridSummary summary;
    {
        if (!std::getline(stream, line)) throw ParseError("missing voxel-length", 2);
        ++line_no;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 2 || tokens[0] != "voxel-length") {
            throw ParseError("expected 'voxel-length <l>'", line_no);
        }
        summary.voxel_length = require_double(tokens[1], line_no, "voxel length");
        if (summary.voxel_length <= 0.0) {
            throw ParseError("voxel length must be > 0", line_no);
        }
    }
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.size() != 5) {
            throw ParseError("grid line needs 5 fields: ix iy iz point-count pooled", line_no);
        }
        summary.indices.push_back({require_int<std::int64_t>(tokens[0], line_no, "ix"),
                                   require_int<std::int64_t>(tokens[1], line_no, "iy"),
                                   require_int<std::int64_t>(tokens[2], line_no, "iz")});
        summary.point_counts.push_back(
            require_int<std::uint32_t>(tokens[3], line_no, "point count"));
        summary.pooled.push_back(require_double(tokens[4], line_no, "pooled value"));
    }
    return summary;
}

std::string grid_to_text(const GridSummary& summary) {
    std::string out = "dial-grid-v1\n";
    out += "voxel-length " + format_double(summary.voxel_length) + "\n";
    for (std::size_t j = 0; j < summary.indices.size(); ++j) {
        out += std::to_string(summary.indices[j].ix) + " " +
               std::to_string(summary.indices[j].iy) + " " +
               std::to_string(summary.indices[j].iz) + " " +
               std::to_string(summary.point_counts[j]) + " " +
               format_double(summary.pooled[j]) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solution

std::string solution_to_text(const SelectionSolution& solution) {
    std::string out = "dial-solution-v1\n";
    out += "chosen " + u32_list_to_text(solution.chosen) + "\n";
    out += "objective " + format_double(solution.objective) + "\n";
    out += std::string("certificate ") + to_string(solution.certificate) + "\n";
    return out;
}

SelectionSolution parse_solution(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    if (!std::getline(stream, line) || line != "dial-solution-v1") {
        throw ParseError("expected dial-solution-v1 header", 1);
    }
    SelectionSolution sol;
    std::size_t line_no = 1;
    auto next = [&](const char* what) {
        if (!std::getline(stream, line)) {
            throw ParseError(std::string("missing ") + what, line_no + 1);
        }
        ++line_no;
        return split_ws(line);
    };
    {
        const auto tokens = next("chosen line");
        if (tokens.size() != 2 || tokens[0] != "chosen") {
            throw ParseError("expected 'chosen <ids>'", line_no);
        }
        sol.chosen = parse_u32_list(tokens[1], line_no, "chosen id");
    }
    {
        const auto tokens = next("objective line");
        if (tokens.size() != 2 || tokens[0] != "objective") {
            throw ParseError("expected 'objective <value>'", line_no);
        }
        sol.objective = require_double(tokens[1], line_no, "objective");
    }
    {
        const auto tokens = next("certificate line");
        if (tokens.size() != 2 || tokens[0] != "certificate") {
            throw ParseError("expected 'certificate <kind>'", line_no);
        }
        if (tokens[1] == "exact") {
            sol.certificate = Certificate::Exact;
        } else if (tokens[1] == "greedy") {
            sol.certificate = Certificate::Greedy;
        } else if (tokens[1] == "heuristic") {
            sol.certificate = Certificate::Heuristic;
        } else {
            throw ParseError("unknown certificate '" + tokens[1] + "'", line_no);
        }
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::vector<std::pair<std::string, std::string>> config_pairs(const LoopConfig& c) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.emplace_back("strategy", to_string(c.strategy));
    pairs.emplace_back("steps", std::to_string(c.steps));
    pairs.emplace_back("discs-per-step", std::to_string(c.discs_per_step));
    pairs.emplace_back("disc-radius", format_double(c.disc_radius));
    pairs.emplace_back("candidate-stride", std::to_string(c.candidate_stride));
    pairs.emplace_back("voxel-length", format_double(c.voxel_length));
    pairs.emplace_back("metric", to_string(c.metric));
    pairs.emplace_back("pool", to_string(c.pool_fn));
    pairs.emplace_back("policy", to_string(c.policy));
    pairs.emplace_back("distance", c.distance == DistanceMode::Planar ? "planar" : "3d");
    pairs.emplace_back("initial-disc", std::to_string(c.initial_disc));
    pairs.emplace_back("scene-seed", std::to_string(c.scene_seed));
    pairs.emplace_back("model-seed", std::to_string(c.model_seed));
    pairs.emplace_back("selection-seed", std::to_string(c.selection_seed));
    pairs.emplace_back("scene.frame-count", std::to_string(c.scene.frame_count));
    pairs.emplace_back("scene.points-per-frame", std::to_string(c.scene.points_per_frame));
    pairs.emplace_back("scene.class-frequencies",
                       double_list_to_text(c.scene.class_frequencies));
    pairs.emplace_back("scene.rare-region-count", std::to_string(c.scene.rare_region_count));
    pairs.emplace_back("scene.rare-class-count", std::to_string(c.scene.rare_class_count));
    pairs.emplace_back("scene.rare-region-radius", format_double(c.scene.rare_region_radius));
    pairs.emplace_back("scene.rare-region-max-lateral",
                       format_double(c.scene.rare_region_max_lateral));
    pairs.emplace_back("scene.rare-zone-begin", format_double(c.scene.rare_zone_begin));
    pairs.emplace_back("scene.rare-zone-end", format_double(c.scene.rare_zone_end));
    pairs.emplace_back("scene.speed-profile", double_list_to_text(c.scene.speed_profile_mps));
    pairs.emplace_back("scene.slow-speed", format_double(c.scene.slow_speed_mps));
    pairs.emplace_back("scene.fast-speed", format_double(c.scene.fast_speed_mps));
    pairs.emplace_back("scene.slow-zone-end", format_double(c.scene.slow_zone_end));
    pairs.emplace_back("scene.lidar-hz", format_double(c.scene.lidar_hz));
    pairs.emplace_back("scene.max-point-range", format_double(c.scene.max_point_range));
    pairs.emplace_back("surrogate.pass-count", std::to_string(c.surrogate.pass_count));
    pairs.emplace_back("surrogate.base-concentration",
                       format_double(c.surrogate.base_concentration));
    pairs.emplace_back("surrogate.familiarity-halflife",
                       format_double(c.surrogate.familiarity_halflife));
    pairs.emplace_back("surrogate.accuracy-halflife",
                       format_double(c.surrogate.accuracy_halflife));
    pairs.emplace_back("surrogate.mi-floor", format_double(c.surrogate.mi_floor));
    pairs.emplace_back("cost.hours-per-disc", format_double(c.cost.hours_per_disc));
    pairs.emplace_back("cost.overhead-min", format_double(c.cost.overhead_min));
    pairs.emplace_back("cost.overhead-max", format_double(c.cost.overhead_max));
    pairs.emplace_back("cost.hours-per-frame", format_double(c.cost.hours_per_frame));
    return pairs;
}

void apply_config_entry(LoopConfig& c, const std::string& key, const std::string& value,
                        std::size_t line_no) {
    try {
        if (key == "strategy") {
            c.strategy = strategy_from_name(value);
        } else if (key == "steps") {
            c.steps = require_int<int>(value, line_no, "steps");
        } else if (key == "discs-per-step") {
            c.discs_per_step = require_int<int>(value, line_no, "discs per step");
        } else if (key == "disc-radius") {
            c.disc_radius = require_double(value, line_no, "disc radius");
        } else if (key == "candidate-stride") {
            c.candidate_stride = require_int<int>(value, line_no, "stride");
        } else if (key == "voxel-length") {
            c.voxel_length = require_double(value, line_no, "voxel length");
        } else if (key == "metric") {
            c.metric = metric_from_name(value);
        } else if (key == "pool") {
            c.pool_fn = pool_fn_from_name(value);
        } else if (key == "policy") {
            c.policy = policy_from_name(value);
        } else if (key == "distance") {
            if (value == "planar") {
                c.distance = DistanceMode::Planar;
            } else if (value == "3d") {
                c.distance = DistanceMode::Euclidean3d;
            } else {
                throw ParseError("distance must be planar or 3d", line_no);
            }
        } else if (key == "initial-disc") {
            c.initial_disc = require_int<std::size_t>(value, line_no, "initial disc");
        } else if (key == "scene-seed") {
            c.scene_seed = require_int<std::uint64_t>(value, line_no, "seed");
        } else if (key == "model-seed") {
            c.model_seed = require_int<std::uint64_t>(value, line_no, "seed");
        } else if (key == "selection-seed") {
            c.selection_seed = require_int<std::uint64_t>(value, line_no, "seed");
        } else if (key == "scene.frame-count") {
            c.scene.frame_count = require_int<std::size_t>(value, line_no, "frame count");
        } else if (key == "scene.points-per-frame") {
            c.scene.points_per_frame = require_int<std::size_t>(value, line_no, "points");
        } else if (key == "scene.class-frequencies") {
            c.scene.class_frequencies = parse_double_list(value, line_no, "frequency");
        } else if (key == "scene.rare-region-count") {
            c.scene.rare_region_count = require_int<std::size_t>(value, line_no, "region count");
        } else if (key == "scene.rare-class-count") {
            c.scene.rare_class_count = require_int<std::size_t>(value, line_no, "class count");
        } else if (key == "scene.rare-region-radius") {
            c.scene.rare_region_radius = require_double(value, line_no, "radius");
        } else if (key == "scene.rare-region-max-lateral") {
            c.scene.rare_region_max_lateral = require_double(value, line_no, "lateral");
        } else if (key == "scene.rare-zone-begin") {
            c.scene.rare_zone_begin = require_double(value, line_no, "zone begin");
        } else if (key == "scene.rare-zone-end") {
            c.scene.rare_zone_end = require_double(value, line_no, "zone end");
        } else if (key == "scene.speed-profile") {
            c.scene.speed_profile_mps = parse_double_list(value, line_no, "speed");
        } else if (key == "scene.slow-speed") {
            c.scene.slow_speed_mps = require_double(value, line_no, "speed");
        } else if (key == "scene.fast-speed") {
            c.scene.fast_speed_mps = require_double(value, line_no, "speed");
        } else if (key == "scene.slow-zone-end") {
            c.scene.slow_zone_end = require_double(value, line_no, "zone end");
        } else if (key == "scene.lidar-hz") {
            c.scene.lidar_hz = require_double(value, line_no, "rate");
        } else if (key == "scene.max-point-range") {
            c.scene.max_point_range = require_double(value, line_no, "range");
        } else if (key == "surrogate.pass-count") {
            c.surrogate.pass_count = require_int<std::size_t>(value, line_no, "pass count");
        } else if (key == "surrogate.base-concentration") {
            c.surrogate.base_concentration = require_double(value, line_no, "concentration");
        } else if (key == "surrogate.familiarity-halflife") {
            c.surrogate.familiarity_halflife = require_double(value, line_no, "halflife");
        } else if (key == "surrogate.accuracy-halflife") {
            c.surrogate.accuracy_halflife = require_double(value, line_no, "halflife");
        } else if (key == "surrogate.mi-floor") {
            c.surrogate.mi_floor = require_double(value, line_no, "floor");
        } else if (key == "cost.hours-per-disc") {
            c.cost.hours_per_disc = require_double(value, line_no, "hours");
        } else if (key == "cost.overhead-min") {
            c.cost.overhead_min = require_double(value, line_no, "overhead");
        } else if (key == "cost.overhead-max") {
            c.cost.overhead_max = require_double(value, line_no, "overhead");
        } else if (key == "cost.hours-per-frame") {
            c.cost.hours_per_frame = require_double(value, line_no, "hours");
        } else {
            throw ParseError("unknown config key '" + key + "'", line_no);
        }
    } catch (const InvalidConfigError& e) {
        throw ParseError(e.what(), line_no);
    }
}

}  // namespace

LoopConfig parse_config(std::string_view text, LoopConfig base) {
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2) {
            throw ParseError("expected 'key value'", line_no);
        }
        apply_config_entry(base, tokens[0], tokens[1], line_no);
    }
    return base;
}

std::string config_to_text(const LoopConfig& config) {
    std::string out;
    for (const auto& [key, value] : config_pairs(config)) {
        out += key + " " + value + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Manifest

RunManifest manifest_from_run(const LoopConfig& config, const ALState& state) {
    RunManifest manifest;
    manifest.config = config;
    if (!state.history.empty()) {
        manifest.initial_discs = state.history.front().new_discs;
    }
    for (std::size_t i = 1; i < state.history.size(); ++i) {
        const StepMetrics& m = state.history[i];
        manifest.steps.push_back({m.step, m.new_discs, m.objective, m.budget_hours});
    }
    manifest.halted = state.halted;
    manifest.halt_reason = state.halt_reason;
    return manifest;
}

std::string manifest_to_text(const RunManifest& manifest) {
    std::string out = "dial-manifest-v1\n";
    for (const auto& [key, value] : config_pairs(manifest.config)) {
        out += key + " " + value + "\n";
    }
    out += "init discs " + u32_list_to_text(manifest.initial_discs) + "\n";
    for (const RunManifest::Step& step : manifest.steps) {
        out += "step " + std::to_string(step.step) + " new " + u32_list_to_text(step.new_discs) +
               " objective " + format_double(step.objective) + " budget-hours " +
               format_double(step.budget_hours) + "\n";
    }
    out += "halted " + std::string(manifest.halted ? "1" : "0");
    if (manifest.halted && !manifest.halt_reason.empty()) out += " " + manifest.halt_reason;
    out += "\n";
    return out;
}

RunManifest parse_manifest(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    if (!std::getline(stream, line) || line != "dial-manifest-v1") {
        throw ParseError("expected dial-manifest-v1 header", 1);
    }
    RunManifest manifest;
    std::size_t line_no = 1;
    bool seen_init = false;
    bool seen_halted = false;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (seen_halted) throw ParseError("content after halted line", line_no);
        if (tokens[0] == "init") {
            if (tokens.size() != 3 || tokens[1] != "discs") {
                throw ParseError("expected 'init discs <ids>'", line_no);
            }
            manifest.initial_discs = parse_u32_list(tokens[2], line_no, "disc id");
            seen_init = true;
        } else if (tokens[0] == "step") {
            if (!seen_init) throw ParseError("step before init line", line_no);
            if (tokens.size() != 8 || tokens[2] != "new" || tokens[4] != "objective" ||
                tokens[6] != "budget-hours") {
                throw ParseError(
                    "expected 'step <t> new <ids> objective <v> budget-hours <h>'", line_no);
            }
            RunManifest::Step step;
            step.step = require_int<int>(tokens[1], line_no, "step");
            step.new_discs = parse_u32_list(tokens[3], line_no, "disc id");
            step.objective = require_double(tokens[5], line_no, "objective");
            step.budget_hours = require_double(tokens[7], line_no, "budget hours");
            manifest.steps.push_back(std::move(step));
        } else if (tokens[0] == "halted") {
            if (tokens.size() < 2) throw ParseError("expected 'halted 0|1 [reason]'", line_no);
            manifest.halted = tokens[1] == "1";
            if (manifest.halted) {
                const auto pos = line.find(tokens[1]);
                const auto rest = line.find_first_not_of(" \t", pos + tokens[1].size());
                if (rest != std::string::npos) manifest.halt_reason = line.substr(rest);
            }
            seen_halted = true;
        } else {
            if (seen_init) throw ParseError("config key after init line", line_no);
            if (tokens.size() != 2) throw ParseError("expected 'key value'", line_no);
            apply_config_entry(manifest.config, tokens[0], tokens[1], line_no);
        }
    }
    if (!seen_init) throw ParseError("manifest missing init line", line_no);
    if (!seen_halted) throw ParseError("manifest missing halted line", line_no);
    return manifest;
}

// ---------------------------------------------------------------------------
// Metrics

std::string metrics_to_text(const ALState& state) {
    std::string out = "dial-metrics-v1\n";
    for (const StepMetrics& m : state.history) {
        out += "step " + std::to_string(m.step);
        out += " new " + u32_list_to_text(m.new_discs);
        out += " objective " + format_double(m.objective);
        out += " labeled-fraction " + format_double(m.labeled_point_fraction);
        out += " rare-coverage " + format_double(m.rare_region_coverage);
        out += " class-coverage " + double_list_to_text(m.class_coverage);
        out += " frames " + std::to_string(m.fully_labeled_frames) + "/" +
               std::to_string(m.weakly_labeled_frames) + "/" +
               std::to_string(m.unlabeled_frames);
        out += " budget-hours " + format_double(m.budget_hours);
        out += "\n";
    }
    if (state.halted) out += "halted 1 " + state.halt_reason + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path.string());
}

std::vector<std::byte> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::vector<std::byte> bytes(buf.size());
    std::memcpy(bytes.data(), buf.data(), buf.size());
    return bytes;
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

PassStack read_probability_tensor(const std::filesystem::path& path) {
    return parse_probability_tensor(read_binary_file(path));
}

void write_probability_tensor(const std::filesystem::path& path, const PassStack& stack) {
    write_binary_file(path, probability_tensor_to_bytes(stack));
}

}  // namespace dial

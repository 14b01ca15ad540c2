#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dial/geometry.hpp"
#include "dial/voxel_grid.hpp"

namespace dial {

enum class IntersectionPolicy { Allow, Prohibit };

IntersectionPolicy policy_from_name(std::string_view name);
const char* to_string(IntersectionPolicy policy) noexcept;

/// Budgeted maximum-coverage instance over pooled voxel weights:
///
///     maximize  sum_j w_j v_j
///     s.t.      sum_i x_i = |fixed| + budget
///               v_j <= sum_i z_{j,i} x_i          0 <= v_j <= 1
///               x_i in {0,1},  x_i = 1 for fixed i
///
/// plus, under Prohibit, x_a + x_b <= 1 for every intersecting candidate
/// pair. `budget` counts NEW discs; previously selected discs are pinned via
/// `fixed`. Candidates are positional: mask k belongs to candidate id k.
struct SelectionProblem {
    std::vector<double> voxel_weights;                // w_j >= 0, finite
    std::vector<std::vector<std::uint32_t>> masks;    // sorted voxel ids per candidate
    int budget = 0;                                   // new discs this step
    std::vector<std::uint32_t> fixed;                 // sorted candidate ids
    IntersectionPolicy policy = IntersectionPolicy::Allow;

    std::size_t candidate_count() const noexcept { return masks.size(); }
    std::size_t voxel_count() const noexcept { return voxel_weights.size(); }

    /// Throws InvalidInputError on malformed instances (bad ids, unsorted
    /// masks, negative or non-finite weights, budget overflow).
    void validate() const;
};

enum class Certificate { Exact, Greedy, Heuristic };

const char* to_string(Certificate certificate) noexcept;

struct SelectionSolution {
    std::vector<std::uint32_t> chosen;  // sorted, includes fixed
    double objective = 0.0;             // weight of the union of chosen masks
    Certificate certificate = Certificate::Exact;
};

/// Canonical objective: weight of the union of the chosen candidates' masks,
/// summed in ascending voxel order. Every solver reports objectives through
/// this one function so equal unions compare bitwise equal.
double union_weight(const SelectionProblem& problem, std::span<const std::uint32_t> chosen);

/// All candidate pairs (a < b) whose masks share at least one voxel; the
/// pairwise constraints materialized by the Prohibit policy.
std::vector<std::pair<std::uint32_t, std::uint32_t>> intersecting_pairs(
    const SelectionProblem& problem);

/// Assembles the instance from a pooled grid and dense disc masks.
/// Candidate ids must be positional (0..I-1).
SelectionProblem build_problem(const VoxelGrid& grid, std::span<const DiscCandidate> candidates,
                               std::span<const std::vector<std::uint8_t>> masks, int budget,
                               std::span<const std::uint32_t> fixed, IntersectionPolicy policy);

/// Exact solver: depth-first branch and bound on the x variables. Upper
/// bounds combine a top-k marginal bound with the LP relaxation (x in [0,1])
/// solved by the bounded-variable simplex in lp.hpp; interchangeable voxels
/// are merged by coverage signature first. Ties between optimal sets break
/// toward the lexicographically smallest chosen-id set. Throws
/// InfeasibleError naming the binding constraint when no feasible set exists.
SelectionSolution solve_exact(const SelectionProblem& problem);

/// Standard marginal-gain greedy (ties toward the lowest candidate id).
/// Under Prohibit it skips candidates intersecting the current selection and
/// throws InfeasibleError when stuck before reaching the budget.
SelectionSolution solve_greedy(const SelectionProblem& problem);

/// Exhaustive enumeration oracle; guards against instances with more than
/// 25 candidates. Identical tie-breaking contract as solve_exact.
SelectionSolution solve_bruteforce(const SelectionProblem& problem);

/// Uniform sample of `budget` candidates without replacement, rejecting any
/// candidate that intersects an already-chosen or fixed disc (the baseline
/// protocol always prohibits intersections). Deterministic given `seed`.
SelectionSolution select_random(const SelectionProblem& problem, std::uint64_t seed);

/// Highest-point-count sampling: takes the `budget` candidates with the most
/// frame points (ties toward the lowest id), skipping intersecting ones.
SelectionSolution select_hpcs(const SelectionProblem& problem,
                              std::span<const std::uint64_t> point_counts);

/// Line-oriented instance serialization; doubles use shortest round-trip
/// formatting so write/read is bit-exact.
std::string to_instance_text(const SelectionProblem& problem);
SelectionProblem instance_from_text(std::string_view text);

}  // namespace dial

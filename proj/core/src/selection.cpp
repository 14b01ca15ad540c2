#include "dial/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "dial/error.hpp"
#include "dial/lp.hpp"
#include "dial/text_util.hpp"

namespace dial {

namespace {

bool masks_intersect(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

std::vector<std::uint32_t> sorted_union(std::span<const std::uint32_t> fixed,
                                        std::span<const std::uint32_t> picks) {
    std::vector<std::uint32_t> out(fixed.begin(), fixed.end());
    out.insert(out.end(), picks.begin(), picks.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool is_fixed(const SelectionProblem& problem, std::uint32_t id) {
    return std::binary_search(problem.fixed.begin(), problem.fixed.end(), id);
}

/// Per-candidate adjacency of intersecting candidates, ascending.
std::vector<std::vector<std::uint32_t>> conflict_lists(const SelectionProblem& problem) {
    const std::size_t n = problem.candidate_count();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) {
            if (masks_intersect(problem.masks[a], problem.masks[b])) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }
    }
    return adj;
}

}  // namespace

IntersectionPolicy policy_from_name(std::string_view name) {
    if (name == "allow") return IntersectionPolicy::Allow;
    if (name == "prohibit") return IntersectionPolicy::Prohibit;
    throw InvalidConfigError("unknown intersection policy: " + std::string(name));
}

const char* to_string(IntersectionPolicy policy) noexcept {
    return policy == IntersectionPolicy::Allow ? "allow" : "prohibit";
}

const char* to_string(Certificate certificate) noexcept {
    switch (certificate) {
        case Certificate::Exact: return "exact";
        case Certificate::Greedy: return "greedy";
        case Certificate::Heuristic: return "heuristic";
    }
    return "heuristic";
}

void SelectionProblem::validate() const {
    for (double w : voxel_weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidInputError("selection: voxel weights must be finite and >= 0");
        }
    }
    for (const auto& mask : masks) {
        for (std::size_t k = 0; k < mask.size(); ++k) {
            if (mask[k] >= voxel_weights.size()) {
                throw InvalidInputError("selection: mask references voxel " +
                                        std::to_string(mask[k]) + " beyond voxel count");
            }
            if (k > 0 && mask[k] <= mask[k - 1]) {
                throw InvalidInputError("selection: masks must be sorted and duplicate-free");
            }
        }
    }
    if (budget < 0) throw InvalidInputError("selection: budget must be >= 0");
    for (std::size_t k = 0; k < fixed.size(); ++k) {
        if (fixed[k] >= candidate_count()) {
            throw InvalidInputError("selection: fixed id " + std::to_string(fixed[k]) +
                                    " is not a candidate");
        }
        if (k > 0 && fixed[k] <= fixed[k - 1]) {
            throw InvalidInputError("selection: fixed ids must be sorted and duplicate-free");
        }
    }
    if (fixed.size() + static_cast<std::size_t>(budget) > candidate_count()) {
        throw InvalidInputError("selection: budget " + std::to_string(budget) + " plus " +
                                std::to_string(fixed.size()) + " fixed discs exceeds " +
                                std::to_string(candidate_count()) + " candidates");
    }
}

double union_weight(const SelectionProblem& problem, std::span<const std::uint32_t> chosen) {
    std::vector<std::uint8_t> covered(problem.voxel_count(), 0);
    for (std::uint32_t id : chosen) {
        for (std::uint32_t j : problem.masks.at(id)) covered[j] = 1;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < covered.size(); ++j) {
        if (covered[j]) total += problem.voxel_weights[j];
    }
    return total;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> intersecting_pairs(
    const SelectionProblem& problem) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    const std::size_t n = problem.candidate_count();
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) {
            if (masks_intersect(problem.masks[a], problem.masks[b])) pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

SelectionProblem build_problem(const VoxelGrid& grid, std::span<const DiscCandidate> candidates,
                               std::span<const std::vector<std::uint8_t>> masks, int budget,
                               std::span<const std::uint32_t> fixed, IntersectionPolicy policy) {
    if (candidates.size() != masks.size()) {
        throw InvalidInputError("build_problem: one mask per candidate required");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].candidate_id != i) {
            throw InvalidInputError("build_problem: candidate ids must be positional (0..I-1)");
        }
    }
    SelectionProblem problem;
    problem.voxel_weights = grid.pooled_values();
    problem.masks.reserve(masks.size());
    for (const auto& dense : masks) {
        if (dense.size() != problem.voxel_weights.size()) {
            throw InvalidInputError("build_problem: mask length does not match voxel count");
        }
        std::vector<std::uint32_t> sparse;
        for (std::uint32_t j = 0; j < dense.size(); ++j) {
            if (dense[j]) sparse.push_back(j);
        }
        problem.masks.push_back(std::move(sparse));
    }
    problem.budget = budget;
    problem.fixed.assign(fixed.begin(), fixed.end());
    std::sort(problem.fixed.begin(), problem.fixed.end());
    problem.policy = policy;
    problem.validate();
    return problem;
}

// ---------------------------------------------------------------------------
// Greedy

SelectionSolution solve_greedy(const SelectionProblem& problem) {
    problem.validate();
    const std::size_t n = problem.candidate_count();
    const bool prohibit = problem.policy == IntersectionPolicy::Prohibit;

    std::vector<std::uint8_t> covered(problem.voxel_count(), 0);
    std::vector<std::uint8_t> blocked(n, 0);
    for (std::uint32_t f : problem.fixed) {
        blocked[f] = 1;
        for (std::uint32_t j : problem.masks[f]) covered[j] = 1;
    }
    if (prohibit) {
        for (std::size_t a = 0; a < problem.fixed.size(); ++a) {
            for (std::size_t b = a + 1; b < problem.fixed.size(); ++b) {
                if (masks_intersect(problem.masks[problem.fixed[a]],
                                    problem.masks[problem.fixed[b]])) {
                    throw InfeasibleError("intersection prohibition: fixed discs " +
                                          std::to_string(problem.fixed[a]) + " and " +
                                          std::to_string(problem.fixed[b]) + " intersect");
                }
            }
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            if (blocked[i]) continue;
            for (std::uint32_t f : problem.fixed) {
                if (masks_intersect(problem.masks[i], problem.masks[f])) {
                    blocked[i] = 1;
                    break;
                }
            }
        }
    }

    std::vector<std::uint32_t> picks;
    for (int step = 0; step < problem.budget; ++step) {
        double best_gain = -1.0;
        std::uint32_t best_id = 0;
        bool found = false;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (blocked[i]) continue;
            double gain = 0.0;
            for (std::uint32_t j : problem.masks[i]) {
                if (!covered[j]) gain += problem.voxel_weights[j];
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_id = i;
                found = true;
            }
        }
        if (!found) {
            throw InfeasibleError(
                "intersection prohibition: greedy selection stuck after " +
                std::to_string(picks.size()) + " of " + std::to_string(problem.budget) +
                " discs");
        }
        picks.push_back(best_id);
        blocked[best_id] = 1;
        for (std::uint32_t j : problem.masks[best_id]) covered[j] = 1;
        if (prohibit) {
            for (std::uint32_t i = 0; i < n; ++i) {
                if (!blocked[i] && masks_intersect(problem.masks[i], problem.masks[best_id])) {
                    blocked[i] = 1;
                }
            }
        }
    }

    SelectionSolution sol;
    sol.chosen = sorted_union(problem.fixed, picks);
    sol.objective = union_weight(problem, sol.chosen);
    sol.certificate = Certificate::Greedy;
    return sol;
}

// ---------------------------------------------------------------------------
// Brute force

SelectionSolution solve_bruteforce(const SelectionProblem& problem) {
    problem.validate();
    if (problem.candidate_count() > 25) {
        throw InvalidInputError("solve_bruteforce: more than 25 candidates");
    }
    const bool prohibit = problem.policy == IntersectionPolicy::Prohibit;
    const auto adj = conflict_lists(problem);
    if (prohibit) {
        for (std::size_t a = 0; a < problem.fixed.size(); ++a) {
            for (std::size_t b = a + 1; b < problem.fixed.size(); ++b) {
                if (masks_intersect(problem.masks[problem.fixed[a]],
                                    problem.masks[problem.fixed[b]])) {
                    throw InfeasibleError("intersection prohibition: fixed discs " +
                                          std::to_string(problem.fixed[a]) + " and " +
                                          std::to_string(problem.fixed[b]) + " intersect");
                }
            }
        }
    }

    // Selectable pool in ascending id order; enumeration below emits new-disc
    // subsets in lexicographic order, so the first optimum found is the
    // tie-break winner.
    std::vector<std::uint32_t> pool;
    for (std::uint32_t i = 0; i < problem.candidate_count(); ++i) {
        if (is_fixed(problem, i)) continue;
        if (prohibit) {
            bool conflict = false;
            for (std::uint32_t f : problem.fixed) {
                if (masks_intersect(problem.masks[i], problem.masks[f])) {
                    conflict = true;
                    break;
                }
            }
            if (conflict) continue;
        }
        pool.push_back(i);
    }

    const std::size_t k = static_cast<std::size_t>(problem.budget);
    SelectionSolution best;
    bool have_best = false;

    if (k == 0) {
        best.chosen = problem.fixed;
        best.objective = union_weight(problem, best.chosen);
        best.certificate = Certificate::Exact;
        return best;
    }
    if (pool.size() >= k) {
        std::vector<std::size_t> comb(k);
        std::iota(comb.begin(), comb.end(), 0);
        while (true) {
            bool feasible = true;
            if (prohibit) {
                for (std::size_t a = 0; a < k && feasible; ++a) {
                    for (std::size_t b = a + 1; b < k; ++b) {
                        const auto& list = adj[pool[comb[a]]];
                        if (std::binary_search(list.begin(), list.end(), pool[comb[b]])) {
                            feasible = false;
                            break;
                        }
                    }
                }
            }
            if (feasible) {
                std::vector<std::uint32_t> picks(k);
                for (std::size_t a = 0; a < k; ++a) picks[a] = pool[comb[a]];
                std::vector<std::uint32_t> chosen = sorted_union(problem.fixed, picks);
                const double obj = union_weight(problem, chosen);
                if (!have_best || obj > best.objective) {
                    best.chosen = std::move(chosen);
                    best.objective = obj;
                    have_best = true;
                }
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && comb[i - 1] == pool.size() - k + (i - 1)) --i;
            if (i == 0) break;
            ++comb[i - 1];
            for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }

    if (!have_best) {
        if (prohibit) {
            throw InfeasibleError("intersection prohibition: no feasible set of " +
                                  std::to_string(problem.budget) +
                                  " pairwise-disjoint new discs among " +
                                  std::to_string(pool.size()) + " selectable candidates");
        }
        throw InfeasibleError("cardinality: cannot select " + std::to_string(problem.budget) +
                              " new discs from " + std::to_string(pool.size()) + " candidates");
    }
    best.certificate = Certificate::Exact;
    return best;
}

// ---------------------------------------------------------------------------
// Exact branch and bound

namespace {

struct ExactSearch {
    const SelectionProblem& problem;
    bool prohibit;
    std::vector<std::uint32_t> free_ids;                // ascending original ids
    std::vector<std::vector<std::uint32_t>> meta_mask;  // per free pos
    std::vector<double> meta_weight;
    std::vector<std::vector<std::uint32_t>> conflicts;  // per free pos (free positions)
    double base_weight = 0.0;                           // weight covered by fixed discs

    std::vector<std::int32_t> cover_count;  // per meta voxel
    std::vector<std::uint8_t> unavailable;  // per free pos
    std::vector<std::uint32_t> branch_order;
    std::vector<std::uint32_t> chosen;  // free positions, branch order
    double covered_weight = 0.0;

    double best_objective = -std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> best_chosen;  // full sorted id set
    bool have_best = false;
    std::uint64_t nodes = 0;

    explicit ExactSearch(const SelectionProblem& p) : problem(p) {
        prohibit = p.policy == IntersectionPolicy::Prohibit;
    }

    void prepare() {
        const std::size_t n = problem.candidate_count();
        std::vector<std::uint8_t> excluded(n, 0);
        for (std::uint32_t f : problem.fixed) excluded[f] = 1;
        if (prohibit) {
            for (std::size_t a = 0; a < problem.fixed.size(); ++a) {
                for (std::size_t b = a + 1; b < problem.fixed.size(); ++b) {
                    if (masks_intersect(problem.masks[problem.fixed[a]],
                                        problem.masks[problem.fixed[b]])) {
                        throw InfeasibleError("intersection prohibition: fixed discs " +
                                              std::to_string(problem.fixed[a]) + " and " +
                                              std::to_string(problem.fixed[b]) + " intersect");
                    }
                }
            }
            for (std::uint32_t i = 0; i < n; ++i) {
                if (excluded[i]) continue;
                for (std::uint32_t f : problem.fixed) {
                    if (masks_intersect(problem.masks[i], problem.masks[f])) {
                        excluded[i] = 1;
                        break;
                    }
                }
            }
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!excluded[i]) free_ids.push_back(i);
        }
        if (free_ids.size() < static_cast<std::size_t>(problem.budget)) {
            if (prohibit) {
                throw InfeasibleError("intersection prohibition: only " +
                                      std::to_string(free_ids.size()) +
                                      " candidates remain selectable, " +
                                      std::to_string(problem.budget) + " needed");
            }
            throw InfeasibleError("cardinality: cannot select " +
                                  std::to_string(problem.budget) + " new discs from " +
                                  std::to_string(free_ids.size()) + " candidates");
        }

        // Coverage state of the fixed discs, and which voxels remain in play.
        std::vector<std::uint8_t> fixed_covered(problem.voxel_count(), 0);
        for (std::uint32_t f : problem.fixed) {
            for (std::uint32_t j : problem.masks[f]) fixed_covered[j] = 1;
        }
        for (std::size_t j = 0; j < problem.voxel_count(); ++j) {
            if (fixed_covered[j]) base_weight += problem.voxel_weights[j];
        }

        // Merge interchangeable voxels: voxels covered by the same set of
        // free candidates act as one weight in every bound and in the LP.
        std::vector<std::vector<std::uint32_t>> coverers(problem.voxel_count());
        for (std::uint32_t u = 0; u < free_ids.size(); ++u) {
            for (std::uint32_t j : problem.masks[free_ids[u]]) {
                if (!fixed_covered[j]) coverers[j].push_back(u);
            }
        }
        std::map<std::vector<std::uint32_t>, std::uint32_t> signature;
        meta_mask.assign(free_ids.size(), {});
        for (std::uint32_t j = 0; j < problem.voxel_count(); ++j) {
            if (fixed_covered[j] || coverers[j].empty()) continue;
            auto [it, inserted] =
                signature.try_emplace(coverers[j], static_cast<std::uint32_t>(meta_weight.size()));
            if (inserted) {
                meta_weight.push_back(0.0);
                for (std::uint32_t u : coverers[j]) meta_mask[u].push_back(it->second);
            }
            meta_weight[it->second] += problem.voxel_weights[j];
        }

        if (prohibit) {
            conflicts.assign(free_ids.size(), {});
            for (std::uint32_t a = 0; a < free_ids.size(); ++a) {
                for (std::uint32_t b = a + 1; b < free_ids.size(); ++b) {
                    if (masks_intersect(problem.masks[free_ids[a]], problem.masks[free_ids[b]])) {
                        conflicts[a].push_back(b);
                        conflicts[b].push_back(a);
                    }
                }
            }
        }

        // Branch on strong candidates first; ids break ties for determinism.
        std::vector<double> gain(free_ids.size(), 0.0);
        for (std::uint32_t u = 0; u < free_ids.size(); ++u) {
            for (std::uint32_t mv : meta_mask[u]) gain[u] += meta_weight[mv];
        }
        branch_order.resize(free_ids.size());
        std::iota(branch_order.begin(), branch_order.end(), 0);
        std::stable_sort(branch_order.begin(), branch_order.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             if (gain[a] != gain[b]) return gain[a] > gain[b];
                             return free_ids[a] < free_ids[b];
                         });

        cover_count.assign(meta_weight.size(), 0);
        unavailable.assign(free_ids.size(), 0);
    }

    void offer(std::span<const std::uint32_t> picks_free_pos) {
        std::vector<std::uint32_t> picks;
        picks.reserve(picks_free_pos.size());
        for (std::uint32_t u : picks_free_pos) picks.push_back(free_ids[u]);
        std::vector<std::uint32_t> full = sorted_union(problem.fixed, picks);
        const double obj = union_weight(problem, full);
        if (!have_best || obj > best_objective ||
            (obj == best_objective &&
             std::lexicographical_compare(full.begin(), full.end(), best_chosen.begin(),
                                          best_chosen.end()))) {
            best_objective = obj;
            best_chosen = std::move(full);
            have_best = true;
        }
    }

    double marginal_gain(std::uint32_t u) const {
        double g = 0.0;
        for (std::uint32_t mv : meta_mask[u]) {
            if (cover_count[mv] == 0) g += meta_weight[mv];
        }
        return g;
    }

    /// covered weight + sum of the k largest marginal gains (conflicts
    /// relaxed); always an upper bound on any completion of this node.
    double cheap_bound(std::size_t pos, int k_left, std::vector<double>& scratch) const {
        scratch.clear();
        for (std::size_t p = pos; p < branch_order.size(); ++p) {
            const std::uint32_t u = branch_order[p];
            if (!unavailable[u]) scratch.push_back(marginal_gain(u));
        }
        const std::size_t k = static_cast<std::size_t>(k_left);
        if (scratch.size() > k) {
            std::nth_element(scratch.begin(), scratch.begin() + k - 1, scratch.end(),
                             std::greater<>());
            scratch.resize(k);
        }
        double bound = base_weight + covered_weight;
        for (double g : scratch) bound += g;
        return bound;
    }

    /// LP relaxation over the remaining candidates and uncovered meta voxels.
    /// Returns +inf when the LP is skipped or fails (no pruning).
    double lp_bound(std::size_t pos, int k_left) const {
        std::vector<std::uint32_t> avail;
        for (std::size_t p = pos; p < branch_order.size(); ++p) {
            const std::uint32_t u = branch_order[p];
            if (!unavailable[u]) avail.push_back(u);
        }
        std::vector<std::int32_t> meta_var(meta_weight.size(), -1);
        std::uint32_t mv_count = 0;
        for (std::uint32_t u : avail) {
            for (std::uint32_t mv : meta_mask[u]) {
                if (cover_count[mv] == 0 && meta_var[mv] < 0) {
                    meta_var[mv] = static_cast<std::int32_t>(mv_count++);
                }
            }
        }
        if (avail.size() > 400 || mv_count > 3000) {
            return std::numeric_limits<double>::infinity();
        }

        lp::Problem lp;
        lp.var_count = avail.size() + mv_count;  // x variables, then v variables
        lp.objective.assign(lp.var_count, 0.0);
        lp.upper.assign(lp.var_count, 1.0);
        for (std::uint32_t mv = 0; mv < meta_weight.size(); ++mv) {
            if (meta_var[mv] >= 0) {
                lp.objective[avail.size() + static_cast<std::size_t>(meta_var[mv])] =
                    meta_weight[mv];
            }
        }
        // v_mv - sum_u x_u <= 0
        std::vector<lp::Problem::Row> cover_rows(mv_count);
        for (std::uint32_t mv = 0; mv < meta_weight.size(); ++mv) {
            if (meta_var[mv] >= 0) {
                cover_rows[static_cast<std::size_t>(meta_var[mv])].terms.push_back(
                    {static_cast<std::uint32_t>(avail.size() + meta_var[mv]), 1.0});
            }
        }
        for (std::uint32_t a = 0; a < avail.size(); ++a) {
            for (std::uint32_t mv : meta_mask[avail[a]]) {
                if (meta_var[mv] >= 0) {
                    cover_rows[static_cast<std::size_t>(meta_var[mv])].terms.push_back({a, -1.0});
                }
            }
        }
        lp.rows = std::move(cover_rows);
        lp::Problem::Row budget_row;
        for (std::uint32_t a = 0; a < avail.size(); ++a) budget_row.terms.push_back({a, 1.0});
        budget_row.rhs = static_cast<double>(k_left);
        lp.rows.push_back(std::move(budget_row));
        if (prohibit) {
            std::size_t pair_rows = 0;
            for (std::uint32_t a = 0; a < avail.size() && pair_rows < 4000; ++a) {
                const auto& adj = conflicts[avail[a]];
                for (std::uint32_t b = a + 1; b < avail.size() && pair_rows < 4000; ++b) {
                    if (std::binary_search(adj.begin(), adj.end(), avail[b])) {
                        lp::Problem::Row row;
                        row.terms = {{a, 1.0}, {b, 1.0}};
                        row.rhs = 1.0;
                        lp.rows.push_back(std::move(row));
                        ++pair_rows;
                    }
                }
            }
        }

        const lp::Solution sol = lp::maximize(lp);
        if (sol.status != lp::SolveStatus::Optimal) {
            return std::numeric_limits<double>::infinity();
        }
        double bound = base_weight + covered_weight + sol.objective;
        bound += 1e-9 + 1e-12 * std::abs(bound);
        return bound;
    }

    void include(std::uint32_t u, std::vector<std::uint32_t>& undo_blocked) {
        chosen.push_back(u);
        for (std::uint32_t mv : meta_mask[u]) {
            if (cover_count[mv]++ == 0) covered_weight += meta_weight[mv];
        }
        if (prohibit) {
            for (std::uint32_t w : conflicts[u]) {
                if (!unavailable[w]) {
                    unavailable[w] = 1;
                    undo_blocked.push_back(w);
                }
            }
        }
    }

    // Includes nest strictly (DFS), so a count that returns to zero here was
    // raised from zero by the matching include.
    void undo_include(std::uint32_t u, const std::vector<std::uint32_t>& undo_blocked) {
        chosen.pop_back();
        for (std::uint32_t mv : meta_mask[u]) {
            if (--cover_count[mv] == 0) covered_weight -= meta_weight[mv];
        }
        for (std::uint32_t w : undo_blocked) unavailable[w] = 0;
    }

    void dfs(std::size_t pos, int k_left, std::vector<double>& scratch) {
        ++nodes;
        if (k_left == 0) {
            offer(chosen);
            return;
        }
        std::size_t avail_count = 0;
        std::size_t first_avail = branch_order.size();
        for (std::size_t p = pos; p < branch_order.size(); ++p) {
            if (!unavailable[branch_order[p]]) {
                if (first_avail == branch_order.size()) first_avail = p;
                ++avail_count;
            }
        }
        if (avail_count < static_cast<std::size_t>(k_left)) return;

        if (have_best) {
            const double margin = 1e-8 + 1e-12 * std::abs(best_objective);
            const double cheap = cheap_bound(pos, k_left, scratch);
            if (cheap <= best_objective - margin) return;
            if (avail_count >= 16 &&
                cheap - best_objective < 0.25 * (std::abs(best_objective) + 1.0)) {
                const double tight = lp_bound(pos, k_left);
                if (tight <= best_objective - margin) return;
            }
        }

        const std::uint32_t u = branch_order[first_avail];
        std::vector<std::uint32_t> undo_blocked;
        include(u, undo_blocked);
        dfs(first_avail + 1, k_left - 1, scratch);
        undo_include(u, undo_blocked);
        dfs(first_avail + 1, k_left, scratch);
    }
};

}  // namespace

SelectionSolution solve_exact(const SelectionProblem& problem) {
    problem.validate();
    ExactSearch search(problem);
    search.prepare();

    if (problem.budget == 0) {
        SelectionSolution sol;
        sol.chosen = problem.fixed;
        sol.objective = union_weight(problem, sol.chosen);
        sol.certificate = Certificate::Exact;
        return sol;
    }

    // Greedy warm start tightens pruning; ties are still re-examined because
    // equal-objective subtrees are never pruned away.
    try {
        const SelectionSolution greedy = solve_greedy(problem);
        search.best_objective = greedy.objective;
        search.best_chosen = greedy.chosen;
        search.have_best = true;
    } catch (const InfeasibleError&) {
        // Greedy can corner itself under Prohibit; the search decides.
    }

    std::vector<double> scratch;
    search.dfs(0, problem.budget, scratch);

    if (!search.have_best) {
        if (problem.policy == IntersectionPolicy::Prohibit) {
            throw InfeasibleError("intersection prohibition: no feasible set of " +
                                  std::to_string(problem.budget) +
                                  " pairwise-disjoint new discs among " +
                                  std::to_string(search.free_ids.size()) +
                                  " selectable candidates");
        }
        throw InfeasibleError("cardinality: cannot select " + std::to_string(problem.budget) +
                              " new discs from " + std::to_string(search.free_ids.size()) +
                              " candidates");
    }

    SelectionSolution sol;
    sol.chosen = search.best_chosen;
    sol.objective = search.best_objective;
    sol.certificate = Certificate::Exact;
    return sol;
}

// ---------------------------------------------------------------------------
// Baselines

SelectionSolution select_random(const SelectionProblem& problem, std::uint64_t seed) {
    problem.validate();
    std::vector<std::uint32_t> pool;
    for (std::uint32_t i = 0; i < problem.candidate_count(); ++i) {
        if (!is_fixed(problem, i)) pool.push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);

    // One pass over the shuffled pool is the bounded retry budget: each
    // candidate is drawn once and rejected if it intersects the selection.
    std::vector<std::uint32_t> picks;
    std::vector<std::uint32_t> selected(problem.fixed.begin(), problem.fixed.end());
    for (std::uint32_t i : pool) {
        if (picks.size() == static_cast<std::size_t>(problem.budget)) break;
        bool conflict = false;
        for (std::uint32_t s : selected) {
            if (masks_intersect(problem.masks[i], problem.masks[s])) {
                conflict = true;
                break;
            }
        }
        if (conflict) continue;
        picks.push_back(i);
        selected.push_back(i);
    }
    if (picks.size() < static_cast<std::size_t>(problem.budget)) {
        throw InfeasibleError("intersection prohibition: random selection exhausted retries "
                              "after picking " +
                              std::to_string(picks.size()) + " of " +
                              std::to_string(problem.budget) + " discs");
    }

    SelectionSolution sol;
    sol.chosen = sorted_union(problem.fixed, picks);
    sol.objective = union_weight(problem, sol.chosen);
    sol.certificate = Certificate::Heuristic;
    return sol;
}

SelectionSolution select_hpcs(const SelectionProblem& problem,
                              std::span<const std::uint64_t> point_counts) {
    problem.validate();
    if (point_counts.size() != problem.candidate_count()) {
        throw InvalidInputError("select_hpcs: one point count per candidate required");
    }
    std::vector<std::uint32_t> order;
    for (std::uint32_t i = 0; i < problem.candidate_count(); ++i) {
        if (!is_fixed(problem, i)) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (point_counts[a] != point_counts[b]) return point_counts[a] > point_counts[b];
        return a < b;
    });

    std::vector<std::uint32_t> picks;
    std::vector<std::uint32_t> selected(problem.fixed.begin(), problem.fixed.end());
    for (std::uint32_t i : order) {
        if (picks.size() == static_cast<std::size_t>(problem.budget)) break;
        bool conflict = false;
        for (std::uint32_t s : selected) {
            if (masks_intersect(problem.masks[i], problem.masks[s])) {
                conflict = true;
                break;
            }
        }
        if (conflict) continue;
        picks.push_back(i);
        selected.push_back(i);
    }
    if (picks.size() < static_cast<std::size_t>(problem.budget)) {
        throw InfeasibleError("intersection prohibition: highest-point-count selection ran out "
                              "of non-intersecting candidates after " +
                              std::to_string(picks.size()) + " of " +
                              std::to_string(problem.budget) + " discs");
    }

    SelectionSolution sol;
    sol.chosen = sorted_union(problem.fixed, picks);
    sol.objective = union_weight(problem, sol.chosen);
    sol.certificate = Certificate::Heuristic;
    return sol;
}

// ---------------------------------------------------------------------------
// Instance text format

std::string to_instance_text(const SelectionProblem& problem) {
    problem.validate();
    std::string out;
    out += "dial-instance-v1\n";
    out += "voxels " + std::to_string(problem.voxel_count()) + "\n";
    for (double w : problem.voxel_weights) out += format_double(w) + "\n";
    out += "candidates " + std::to_string(problem.candidate_count()) + "\n";
    for (const auto& mask : problem.masks) {
        out += "mask " + std::to_string(mask.size());
        for (std::uint32_t j : mask) out += " " + std::to_string(j);
        out += "\n";
    }
    out += "budget " + std::to_string(problem.budget) + "\n";
    out += "fixed " + std::to_string(problem.fixed.size());
    for (std::uint32_t f : problem.fixed) out += " " + std::to_string(f);
    out += "\n";
    out += std::string("policy ") + to_string(problem.policy) + "\n";
    return out;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : stream_(std::string(text)) {}

    /// Next line, or throws ParseError mentioning what was expected.
    std::string expect_line(const std::string& what) {
        std::string line;
        if (!std::getline(stream_, line)) {
            throw ParseError("unexpected end of instance, expected " + what, line_number_ + 1);
        }
        ++line_number_;
        return line;
    }

    std::size_t line_number() const noexcept { return line_number_; }

private:
    std::istringstream stream_;
    std::size_t line_number_ = 0;
};

}  // namespace

SelectionProblem instance_from_text(std::string_view text) {
    LineReader reader(text);
    if (reader.expect_line("header") != "dial-instance-v1") {
        throw ParseError("bad instance header, expected dial-instance-v1", 1);
    }

    auto expect_keyword_count = [&](const std::string& keyword) -> std::size_t {
        const std::string line = reader.expect_line(keyword + " count");
        std::istringstream ss(line);
        std::string word;
        long long count = -1;
        if (!(ss >> word >> count) || word != keyword || count < 0) {
            throw ParseError("expected '" + keyword + " <count>'", reader.line_number());
        }
        return static_cast<std::size_t>(count);
    };

    SelectionProblem problem;
    const std::size_t voxels = expect_keyword_count("voxels");
    problem.voxel_weights.reserve(voxels);
    for (std::size_t j = 0; j < voxels; ++j) {
        const std::string line = reader.expect_line("voxel weight");
        const auto value = parse_double(line);
        if (!value) throw ParseError("bad voxel weight '" + line + "'", reader.line_number());
        problem.voxel_weights.push_back(*value);
    }

    const std::size_t candidates = expect_keyword_count("candidates");
    problem.masks.reserve(candidates);
    for (std::size_t i = 0; i < candidates; ++i) {
        std::istringstream ss(reader.expect_line("mask"));
        std::string word;
        long long count = -1;
        if (!(ss >> word >> count) || word != "mask" || count < 0) {
            throw ParseError("expected 'mask <count> <ids...>'", reader.line_number());
        }
        std::vector<std::uint32_t> mask(static_cast<std::size_t>(count));
        for (auto& id : mask) {
            if (!(ss >> id)) throw ParseError("mask id list too short", reader.line_number());
        }
        std::string rest;
        if (ss >> rest) throw ParseError("trailing tokens after mask", reader.line_number());
        problem.masks.push_back(std::move(mask));
    }

    {
        std::istringstream ss(reader.expect_line("budget"));
        std::string word;
        if (!(ss >> word >> problem.budget) || word != "budget") {
            throw ParseError("expected 'budget <N>'", reader.line_number());
        }
    }
    {
        std::istringstream ss(reader.expect_line("fixed"));
        std::string word;
        long long count = -1;
        if (!(ss >> word >> count) || word != "fixed" || count < 0) {
            throw ParseError("expected 'fixed <count> <ids...>'", reader.line_number());
        }
        problem.fixed.resize(static_cast<std::size_t>(count));
        for (auto& id : problem.fixed) {
            if (!(ss >> id)) throw ParseError("fixed id list too short", reader.line_number());
        }
    }
    {
        std::istringstream ss(reader.expect_line("policy"));
        std::string word, value;
        if (!(ss >> word >> value) || word != "policy") {
            throw ParseError("expected 'policy allow|prohibit'", reader.line_number());
        }
        try {
            problem.policy = policy_from_name(value);
        } catch (const InvalidConfigError&) {
            throw ParseError("unknown policy '" + value + "'", reader.line_number());
        }
    }
    try {
        problem.validate();
    } catch (const InvalidInputError& e) {
        throw ParseError(std::string("invalid instance: ") + e.what(), reader.line_number());
    }
    return problem;
}

}  // namespace dial

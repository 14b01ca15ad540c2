#include "dial/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dial/error.hpp"

namespace dial::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-10;

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

}  // namespace

Solution maximize(const Problem& problem, int iteration_limit) {
    const std::size_t n = problem.var_count;
    const std::size_t m = problem.rows.size();
    if (problem.objective.size() != n || problem.upper.size() != n) {
        throw InvalidInputError("lp: objective/upper size mismatch");
    }
    for (const Problem::Row& row : problem.rows) {
        if (row.rhs < 0.0) throw InvalidInputError("lp: negative rhs; zero must be feasible");
    }

    const std::size_t total = n + m;  // structural + slack variables
    // Dense column access for A (rows x total), slack s_r has column n + r.
    std::vector<std::vector<double>> col(total, std::vector<double>());
    for (std::size_t j = 0; j < total; ++j) col[j].assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (const auto& [j, a] : problem.rows[r].terms) {
            if (j >= n) throw InvalidInputError("lp: row references unknown variable");
            col[j][r] += a;
        }
        col[n + r][r] = 1.0;
    }

    std::vector<double> cost(total, 0.0);
    std::vector<double> upper(total, kInf);
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = problem.objective[j];
        upper[j] = problem.upper[j];
    }

    // All-slack starting basis; structural variables at their lower bound 0.
    std::vector<std::size_t> basis(m);
    std::vector<VarStatus> status(total, VarStatus::AtLower);
    for (std::size_t r = 0; r < m; ++r) {
        basis[r] = n + r;
        status[n + r] = VarStatus::Basic;
    }
    std::vector<std::vector<double>> binv(m, std::vector<double>(m, 0.0));
    for (std::size_t r = 0; r < m; ++r) binv[r][r] = 1.0;

    std::vector<double> xb(m);  // values of basic variables
    auto recompute_basics = [&] {
        // xb = binv * (b - sum of at-upper columns at their bound).
        std::vector<double> rhs(m);
        for (std::size_t r = 0; r < m; ++r) {
            rhs[r] = problem.rows[r].rhs;
            for (std::size_t j = 0; j < total; ++j) {
                if (status[j] == VarStatus::AtUpper) rhs[r] -= col[j][r] * upper[j];
            }
        }
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += binv[r][k] * rhs[k];
            xb[r] = acc;
        }
    };
    recompute_basics();

    if (iteration_limit <= 0) {
        iteration_limit = 200 + 40 * static_cast<int>(m + n);
    }
    const int bland_after = iteration_limit / 2;

    std::vector<double> dual(m), direction(m);
    for (int iter = 0; iter < iteration_limit; ++iter) {
        // Duals: y = c_B * binv.
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t r = 0; r < m; ++r) acc += cost[basis[r]] * binv[r][k];
            dual[k] = acc;
        }

        // Pricing. sigma = +1 increases the entering variable, -1 decreases.
        const bool bland = iter >= bland_after;
        std::size_t entering = total;
        double best_score = kDualTol;
        int sigma = 0;
        for (std::size_t j = 0; j < total; ++j) {
            if (status[j] == VarStatus::Basic) continue;
            double d = cost[j];
            for (std::size_t r = 0; r < m; ++r) d -= dual[r] * col[j][r];
            double score = 0.0;
            int s = 0;
            if (status[j] == VarStatus::AtLower && d > kDualTol) {
                score = d;
                s = +1;
            } else if (status[j] == VarStatus::AtUpper && d < -kDualTol) {
                score = -d;
                s = -1;
            } else {
                continue;
            }
            if (bland) {
                entering = j;
                sigma = s;
                break;
            }
            if (score > best_score) {
                best_score = score;
                entering = j;
                sigma = s;
            }
        }
        if (entering == total) {
            // Optimal.
            Solution sol;
            sol.status = SolveStatus::Optimal;
            sol.values.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (status[j] == VarStatus::AtUpper) sol.values[j] = upper[j];
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (basis[r] < n) sol.values[basis[r]] = xb[r];
            }
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += problem.objective[j] * sol.values[j];
            sol.objective = obj;
            return sol;
        }

        // Direction through the basis: w = binv * A_entering.
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += binv[r][k] * col[entering][k];
            direction[r] = acc;
        }

        // Ratio test. Basic variable B(r) moves by -sigma * t * w_r.
        double step = upper[entering];  // bound flip distance (may be +inf)
        std::ptrdiff_t leaving_row = -1;
        bool leaving_to_upper = false;
        for (std::size_t r = 0; r < m; ++r) {
            const double delta = -static_cast<double>(sigma) * direction[r];
            if (delta < -kPivotTol) {
                const double t = xb[r] / (-delta);
                if (t < step - 1e-12) {
                    step = t;
                    leaving_row = static_cast<std::ptrdiff_t>(r);
                    leaving_to_upper = false;
                }
            } else if (delta > kPivotTol && upper[basis[r]] < kInf) {
                const double t = (upper[basis[r]] - xb[r]) / delta;
                if (t < step - 1e-12) {
                    step = t;
                    leaving_row = static_cast<std::ptrdiff_t>(r);
                    leaving_to_upper = true;
                }
            }
        }

        if (step == kInf) {
            Solution sol;
            sol.status = SolveStatus::Unbounded;
            return sol;
        }
        if (step < 0.0) step = 0.0;

        if (leaving_row < 0) {
            // Bound flip: entering moves across its full range.
            status[entering] =
                sigma > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
            recompute_basics();
            continue;
        }

        const std::size_t lr = static_cast<std::size_t>(leaving_row);
        const double pivot = direction[lr];
        if (std::abs(pivot) < kPivotTol) {
            Solution sol;
            sol.status = SolveStatus::NumericalFailure;
            return sol;
        }

        const std::size_t leaving = basis[lr];
        status[leaving] = leaving_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
        basis[lr] = entering;
        status[entering] = VarStatus::Basic;

        // binv <- E * binv with the elementary transform eliminating the
        // entering column everywhere but the pivot row.
        const double inv_pivot = 1.0 / pivot;
        for (std::size_t k = 0; k < m; ++k) binv[lr][k] *= inv_pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == lr) continue;
            const double factor = direction[r];
            if (factor == 0.0) continue;
            for (std::size_t k = 0; k < m; ++k) binv[r][k] -= factor * binv[lr][k];
        }
        recompute_basics();
    }

    Solution sol;
    sol.status = SolveStatus::IterationLimit;
    return sol;
}

}  // namespace dial::lp

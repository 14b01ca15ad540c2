#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dial::lp {

/// Linear program in the form
///     maximize  c . y
///     s.t.      a_r . y <= b_r   for every row r, with b_r >= 0
///               0 <= y_i <= u_i
/// The nonnegative right-hand sides make y = 0 feasible, so the solver can
/// start from the all-slack basis without a phase-1 step. This covers the
/// coverage-relaxation LPs built by the selection solver.
struct Problem {
    struct Row {
        std::vector<std::pair<std::uint32_t, double>> terms;  // (variable, coefficient)
        double rhs = 0.0;
    };

    std::size_t var_count = 0;
    std::vector<double> objective;  // size var_count
    std::vector<double> upper;      // size var_count; +inf for unbounded above
    std::vector<Row> rows;
};

enum class SolveStatus { Optimal, IterationLimit, Unbounded, NumericalFailure };

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> values;  // structural variables, only when Optimal
};

/// Bounded-variable primal simplex with a dense explicit basis inverse.
/// Dantzig pricing with a switch to Bland's rule near the iteration limit;
/// deterministic tie-breaking throughout. `iteration_limit` 0 picks a limit
/// from the problem size.
Solution maximize(const Problem& problem, int iteration_limit = 0);

}  // namespace dial::lp

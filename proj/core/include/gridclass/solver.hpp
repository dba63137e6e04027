#pragma once

#include <cstdint>
#include <vector>

#include "gridclass/ip_model.hpp"

namespace gridclass {

enum class SolveStatus { optimal, feasible, infeasible, timeout };

struct SolverResult {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<uint8_t> assignment;  // empty for infeasible/timeout without incumbent
    int objective = 0;                // number of active sensing cycles
    double solve_time_s = 0.0;
};

// External mixed-integer backends plug in here. Results are never trusted:
// solve() revalidates the plan and cross-checks the objective.
class SolverBackend {
  public:
    virtual ~SolverBackend() = default;
    virtual SolverResult solve(const IPInstance& instance, double time_limit_s) = 0;
};

struct SolveOptions {
    double time_limit_s = 600.0;
    bool deterministic = true;
    SolverBackend* external_backend = nullptr;  // null: use the built-in solver
};

// Built-in exact solver: iterative deepening on the cycle count. The
// objective counts active cycles and the cycle-ordering constraint makes
// them a prefix, so the first feasible cycle count is optimal.
SolverResult solve(const IPInstance& instance, const SolveOptions& options = {});

// Build, solve, return the optimal cycle count. Throws std::runtime_error on
// infeasibility or timeout without an incumbent.
int min_cycles(const PlanningProblem& problem, const SolveOptions& options = {});

}  // namespace gridclass

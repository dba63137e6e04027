#pragma once

#include <string>
#include <vector>

#include "gridclass/environment.hpp"

namespace gridclass {

struct CostMatrix {
    int n = 0;
    std::vector<double> costs;  // row-major n*n

    explicit CostMatrix(int size) : n(size), costs(size_t(size) * size, 0.0) {}
    double& at(int i, int j) { return costs[size_t(i) * n + j]; }
    double at(int i, int j) const { return costs[size_t(i) * n + j]; }
};

struct AssignmentResult {
    std::vector<int> assign;  // row i -> column assign[i]
    double total_cost = 0.0;
};

// Minimum-cost perfect matching; among optima, returns the lexicographically
// smallest row-to-column assignment.
AssignmentResult hungarian(const CostMatrix& costs);

enum class ConflictKind { vertex, swap, crossing };

struct TransitionConflict {
    ConflictKind kind;
    int agent_a = 0;
    int agent_b = 0;
    int step = 0;  // transition step j -> j+1 (vertex: step j)
};

// Forward pass over one cycle's per-step sensor positions: at each step,
// reassign agents to the next step's original position multiset by
// minimum-Euclidean-cost matching. Occupancy multisets per step are
// preserved; only which agent occupies which cell changes.
std::vector<std::vector<CellIndex>> deconflict_cycle(
    const std::vector<std::vector<CellIndex>>& steps, const GridSpec& grid);

// Vertex conflicts at interior steps, swaps, and properly-crossing
// transitions. Test/report oracle; never consulted by the planner.
std::vector<TransitionConflict> detect_conflicts(
    const std::vector<std::vector<CellIndex>>& steps, const GridSpec& grid);

}  // namespace gridclass

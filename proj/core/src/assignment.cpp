#include "gridclass/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jonker-Volgenant style shortest augmenting path, O(n^3).
double jv_solve(int n, const std::vector<double>& cost, std::vector<int>& rowsol) {
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = cost[size_t(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    rowsol.assign(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j)
        if (p[j]) {
            rowsol[p[j] - 1] = j - 1;
            total += cost[size_t(p[j] - 1) * n + (j - 1)];
        }
    return total;
}

// Optimal cost when rows [0, fixed.size()) are pinned to the given columns.
double cost_with_prefix(const CostMatrix& m, const std::vector<int>& fixed) {
    int r = static_cast<int>(fixed.size());
    double base = 0.0;
    std::vector<char> col_taken(m.n, false);
    for (int i = 0; i < r; ++i) {
        base += m.at(i, fixed[i]);
        col_taken[fixed[i]] = true;
    }
    int rem = m.n - r;
    if (rem == 0) return base;
    std::vector<int> cols;
    for (int j = 0; j < m.n; ++j)
        if (!col_taken[j]) cols.push_back(j);
    std::vector<double> sub(size_t(rem) * rem);
    for (int i = 0; i < rem; ++i)
        for (int j = 0; j < rem; ++j) sub[size_t(i) * rem + j] = m.at(r + i, cols[j]);
    std::vector<int> rowsol;
    return base + jv_solve(rem, sub, rowsol);
}

}  // namespace

AssignmentResult hungarian(const CostMatrix& m) {
    AssignmentResult out;
    if (m.n == 0) return out;
    std::vector<int> rowsol;
    double opt = jv_solve(m.n, m.costs, rowsol);
    double eps = 1e-9 * (1.0 + std::fabs(opt));

    // Lexicographic refinement: greedily pin each row to the smallest column
    // that keeps the total optimal.
    std::vector<int> fixed;
    std::vector<char> col_taken(m.n, false);
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            if (col_taken[j]) continue;
            fixed.push_back(j);
            if (cost_with_prefix(m, fixed) <= opt + eps) {
                col_taken[j] = true;
                break;
            }
            fixed.pop_back();
        }
    }
    out.assign = fixed;
    out.total_cost = 0.0;
    for (int i = 0; i < m.n; ++i) out.total_cost += m.at(i, fixed[i]);
    return out;
}

namespace {

double euclid(const GridSpec& grid, CellIndex a, CellIndex b) {
    double dr = grid.row(a) - grid.row(b);
    double dc = grid.col(a) - grid.col(b);
    return std::sqrt(dr * dr + dc * dc);
}

bool king_ok(const GridSpec& grid, CellIndex a, CellIndex b) {
    return std::abs(grid.row(a) - grid.row(b)) <= 1 && std::abs(grid.col(a) - grid.col(b)) <= 1;
}

}  // namespace

std::vector<std::vector<CellIndex>> deconflict_cycle(
    const std::vector<std::vector<CellIndex>>& steps, const GridSpec& grid) {
    if (steps.empty()) return steps;
    const size_t n = steps[0].size();
    for (const auto& step : steps)
        if (step.size() != n) throw std::domain_error("step size mismatch");
    if (n <= 1) return steps;

    std::vector<std::vector<CellIndex>> out(steps.size());
    out[0] = steps[0];
    // perm[i]: which original path the agent in slot i is currently tracing.
    std::vector<int> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);

    for (size_t j = 0; j + 1 < steps.size(); ++j) {
        CostMatrix m(static_cast<int>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t t = 0; t < n; ++t)
                m.at(int(i), int(t)) = euclid(grid, out[j][i], steps[j + 1][t]);
        AssignmentResult res = hungarian(m);

        bool legal = true;
        for (size_t i = 0; i < n; ++i)
            if (!king_ok(grid, out[j][i], steps[j + 1][res.assign[i]])) {
                legal = false;
                break;
            }
        out[j + 1].resize(n);
        if (legal) {
            for (size_t i = 0; i < n; ++i) out[j + 1][i] = steps[j + 1][res.assign[i]];
            std::vector<int> next_perm(n);
            for (size_t i = 0; i < n; ++i) next_perm[i] = res.assign[i];
            perm = next_perm;
        } else {
            // Keep the original threading for this step; each original path's
            // own move is legal by construction.
            for (size_t i = 0; i < n; ++i) out[j + 1][i] = steps[j + 1][perm[i]];
        }
    }
    return out;
}

std::vector<TransitionConflict> detect_conflicts(
    const std::vector<std::vector<CellIndex>>& steps, const GridSpec& grid) {
    std::vector<TransitionConflict> out;
    if (steps.empty()) return out;
    const int T = static_cast<int>(steps.size());
    const int n = static_cast<int>(steps[0].size());

    // Vertex conflicts, skipping the exempt first and last steps.
    for (int j = 1; j <= T - 2; ++j)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (steps[j][a] == steps[j][b])
                    out.push_back({ConflictKind::vertex, a, b, j});

    auto orient = [&](CellIndex p, CellIndex q, CellIndex r) {
        long val = long(grid.col(q) - grid.col(p)) * (grid.row(r) - grid.row(p)) -
                   long(grid.row(q) - grid.row(p)) * (grid.col(r) - grid.col(p));
        return val > 0 ? 1 : (val < 0 ? -1 : 0);
    };

    for (int j = 0; j + 1 < T; ++j)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                CellIndex a0 = steps[j][a], a1 = steps[j + 1][a];
                CellIndex b0 = steps[j][b], b1 = steps[j + 1][b];
                if (a0 == b1 && b0 == a1 && a0 != a1) {
                    out.push_back({ConflictKind::swap, a, b, j});
                    continue;
                }
                if (a0 == a1 || b0 == b1) continue;  // degenerate segment
                int d1 = orient(a0, a1, b0), d2 = orient(a0, a1, b1);
                int d3 = orient(b0, b1, a0), d4 = orient(b0, b1, a1);
                if (d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0 && d1 != d2 && d3 != d4)
                    out.push_back({ConflictKind::crossing, a, b, j});
            }
    return out;
}

}  // namespace gridclass

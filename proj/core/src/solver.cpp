#include "gridclass/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace gridclass {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;
// Move-ordering offset that demotes non-goal cells once every goal is
// covered; must exceed any grid distance.
constexpr int kDwellPenalty = 1 << 20;

struct SearchContext {
    const IPInstance& inst;
    const Scenario& s;
    const TeamConfig& team;
    std::vector<CellIndex> goals;

    int n_cells = 0;  // grid cell count
    std::vector<std::vector<CellIndex>> sensor_adj;   // per cell: neighbors + self
    std::vector<std::vector<CellIndex>> station_adj;  // within the admissible region
    std::vector<int> sensor_dist;                     // n_cells * n_cells, king BFS
    std::vector<int> station_dist;
    std::vector<int> goal_bit;  // cell -> goal index or -1

    Clock::time_point deadline;
    bool timed_out = false;
    uint64_t nodes = 0;

    int k_prime = 0;
    std::unordered_set<uint64_t> failed;

    // Solution under construction: positions indexed [cycle][step][agent].
    std::vector<std::vector<std::vector<CellIndex>>> sensor_steps;
    std::vector<std::vector<std::vector<CellIndex>>> station_steps;

    int dist(CellIndex a, CellIndex b) const { return sensor_dist[size_t(a) * n_cells + b]; }
    int rdist(CellIndex a, CellIndex b) const { return station_dist[size_t(a) * n_cells + b]; }

    bool check_time() {
        if (timed_out) return true;
        if ((++nodes & 0xfff) == 0 && Clock::now() > deadline) timed_out = true;
        return timed_out;
    }
};

void bfs_fill(int n_cells, const std::vector<std::vector<CellIndex>>& adj, CellIndex from,
              std::vector<int>& dist_row) {
    std::deque<CellIndex> queue{from};
    dist_row[from] = 0;
    while (!queue.empty()) {
        CellIndex l = queue.front();
        queue.pop_front();
        for (CellIndex m : adj[l]) {
            if (m == l) continue;
            if (dist_row[m] > dist_row[l] + 1) {
                dist_row[m] = dist_row[l] + 1;
                queue.push_back(m);
            }
        }
    }
}

uint64_t hash_mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

struct StationConfig {
    std::vector<CellIndex> ends;  // per station identity
    double score = 0.0;
};

class CycleSolver {
  public:
    explicit CycleSolver(SearchContext& ctx) : ctx_(ctx) {}

    bool run(const std::vector<CellIndex>& sensor_start,
             const std::vector<CellIndex>& station_start) {
        ctx_.sensor_steps.assign(ctx_.k_prime, {});
        ctx_.station_steps.assign(ctx_.k_prime, {});
        uint32_t mask = 0;
        for (CellIndex c : sensor_start)
            if (ctx_.goal_bit[c] >= 0) mask |= 1u << ctx_.goal_bit[c];
        return solve_cycle(0, sensor_start, station_start, mask);
    }

  private:
    SearchContext& ctx_;

    uint32_t full_mask() const { return (1u << ctx_.goals.size()) - 1; }

    bool solve_cycle(int k, std::vector<CellIndex> sensors, std::vector<CellIndex> stations,
                     uint32_t mask) {
        if (k == ctx_.k_prime) return mask == full_mask();
        if (ctx_.check_time()) return false;

        // Necessary condition: every unvisited goal within total remaining range.
        int remaining_moves = (ctx_.k_prime - k) * (ctx_.team.t_d - 1);
        for (size_t g = 0; g < ctx_.goals.size(); ++g) {
            if (mask & (1u << g)) continue;
            int best = kUnreachable;
            for (CellIndex c : sensors) best = std::min(best, ctx_.dist(c, ctx_.goals[g]));
            if (best > remaining_moves) return false;
        }

        uint64_t key = boundary_key(k, sensors, stations, mask);
        if (ctx_.failed.count(key)) return false;

        for (const StationConfig& cfg : station_configs(k, stations, sensors, mask)) {
            if (ctx_.timed_out) return false;
            std::vector<std::vector<CellIndex>> spath;
            if (!station_joint_path(stations, cfg.ends, spath)) continue;
            ctx_.station_steps[k] = spath;
            if (sensor_cycle(k, sensors, cfg.ends, mask)) return true;
        }
        if (!ctx_.timed_out) ctx_.failed.insert(key);
        return false;
    }

    uint64_t boundary_key(int k, std::vector<CellIndex> sensors, std::vector<CellIndex> stations,
                          uint32_t mask) const {
        std::sort(sensors.begin(), sensors.end());
        std::sort(stations.begin(), stations.end());
        uint64_t h = hash_mix(0x811c9dc5, uint64_t(k) | (uint64_t(ctx_.k_prime) << 16));
        h = hash_mix(h, 0xb0u);
        for (CellIndex c : sensors) h = hash_mix(h, uint64_t(c) + 1);
        h = hash_mix(h, 0xb1u);
        for (CellIndex c : stations) h = hash_mix(h, uint64_t(c) + 1);
        return hash_mix(h, mask);
    }

    // All reachable, pairwise-distinct station endpoint tuples, best first.
    std::vector<StationConfig> station_configs(int k, const std::vector<CellIndex>& starts,
                                               const std::vector<CellIndex>& sensors,
                                               uint32_t mask) {
        std::vector<std::vector<CellIndex>> choices(starts.size());
        for (size_t a = 0; a < starts.size(); ++a)
            for (CellIndex m : ctx_.inst.station_cells)
                if (ctx_.rdist(starts[a], m) <= ctx_.team.t_c - 1) choices[a].push_back(m);

        std::vector<StationConfig> configs;
        std::vector<CellIndex> cur(starts.size());
        std::vector<char> used(ctx_.n_cells, false);
        build_configs(choices, 0, cur, used, configs);

        bool last_cycle = (k == ctx_.k_prime - 1);
        for (StationConfig& cfg : configs) {
            double score = 0.0;
            bool any_goal = false;
            for (size_t g = 0; g < ctx_.goals.size(); ++g) {
                if (mask & (1u << g)) continue;
                any_goal = true;
                int to_end = kUnreachable;
                for (CellIndex e : cfg.ends) to_end = std::min(to_end, ctx_.dist(ctx_.goals[g], e));
                score = std::max(score, double(to_end));
            }
            if (!any_goal)
                for (size_t a = 0; a < starts.size(); ++a)
                    score += ctx_.rdist(starts[a], cfg.ends[a]);
            cfg.score = score;
        }
        std::stable_sort(configs.begin(), configs.end(),
                         [](const StationConfig& a, const StationConfig& b) {
                             if (a.score != b.score) return a.score < b.score;
                             return a.ends < b.ends;
                         });

        // On the last cycle drop configs that cannot support a remaining goal.
        if (last_cycle) {
            std::vector<StationConfig> kept;
            for (const StationConfig& cfg : configs) {
                bool ok = true;
                for (size_t g = 0; g < ctx_.goals.size() && ok; ++g) {
                    if (mask & (1u << g)) continue;
                    int best = kUnreachable;
                    for (CellIndex c : sensors) {
                        int to_end = kUnreachable;
                        for (CellIndex e : cfg.ends)
                            to_end = std::min(to_end, ctx_.dist(ctx_.goals[g], e));
                        if (to_end < kUnreachable)
                            best = std::min(best, ctx_.dist(c, ctx_.goals[g]) + to_end);
                    }
                    ok = best <= ctx_.team.t_d - 1;
                }
                if (ok) kept.push_back(cfg);
            }
            return kept;
        }
        return configs;
    }

    void build_configs(const std::vector<std::vector<CellIndex>>& choices, size_t a,
                       std::vector<CellIndex>& cur, std::vector<char>& used,
                       std::vector<StationConfig>& out) {
        if (a == choices.size()) {
            out.push_back({cur, 0.0});
            return;
        }
        for (CellIndex m : choices[a]) {
            if (used[m]) continue;
            used[m] = true;
            cur[a] = m;
            build_configs(choices, a + 1, cur, used, out);
            used[m] = false;
        }
    }

    // Collision-free joint station paths realizing the endpoint tuple. Only
    // the endpoints matter outside the cycle, so the first found path is kept.
    bool station_joint_path(const std::vector<CellIndex>& starts,
                            const std::vector<CellIndex>& ends,
                            std::vector<std::vector<CellIndex>>& out) {
        int tc = ctx_.team.t_c;
        std::vector<std::vector<CellIndex>> steps(tc);
        steps[0] = starts;
        if (tc == 1) {
            if (starts != ends) return false;
            out = steps;
            return true;
        }
        if (station_step(steps, 1, ends)) {
            out = steps;
            return true;
        }
        return false;
    }

    bool station_step(std::vector<std::vector<CellIndex>>& steps, int b,
                      const std::vector<CellIndex>& ends) {
        int tc = ctx_.team.t_c;
        if (b == tc) return true;
        steps[b].assign(steps[0].size(), -1);
        return station_agent(steps, b, 0, ends);
    }

    bool station_agent(std::vector<std::vector<CellIndex>>& steps, int b, size_t a,
                       const std::vector<CellIndex>& ends) {
        int tc = ctx_.team.t_c;
        if (a == steps[0].size()) return station_step(steps, b + 1, ends);
        CellIndex prev = steps[b - 1][a];
        int remaining = tc - 1 - b;
        for (CellIndex m : ctx_.station_adj[prev]) {
            if (ctx_.rdist(m, ends[a]) > remaining) continue;
            bool clash = false;
            for (size_t o = 0; o < a; ++o)
                if (steps[b][o] == m) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            steps[b][a] = m;
            if (station_agent(steps, b, a + 1, ends)) return true;
        }
        steps[b][a] = -1;
        return false;
    }

    // DFS over sensor steps within cycle k, then recurse into cycle k+1.
    bool sensor_cycle(int k, const std::vector<CellIndex>& start,
                      const std::vector<CellIndex>& station_ends, uint32_t mask) {
        int td = ctx_.team.t_d;
        std::vector<std::vector<CellIndex>> steps(td);
        steps[0] = start;

        // Distance to the nearest station end, per cell.
        std::vector<int> to_end(ctx_.n_cells, kUnreachable);
        for (CellIndex e : station_ends)
            for (int c = 0; c < ctx_.n_cells; ++c)
                to_end[c] = std::min(to_end[c], ctx_.dist(c, e));

        ctx_.sensor_steps[k] = steps;  // placeholder, filled as the DFS descends
        return sensor_step(k, steps, 1, mask, station_ends, to_end);
    }

    bool sensor_step(int k, std::vector<std::vector<CellIndex>>& steps, int j, uint32_t mask,
                     const std::vector<CellIndex>& station_ends, const std::vector<int>& to_end) {
        int td = ctx_.team.t_d;
        if (j == td) {
            ctx_.sensor_steps[k] = steps;
            return solve_cycle(k + 1, steps[td - 1], station_ends, mask);
        }
        if (ctx_.check_time()) return false;

        uint64_t key = step_key(k, j, steps[j - 1], mask, station_ends);
        if (ctx_.failed.count(key)) return false;

        steps[j].assign(steps[0].size(), -1);
        if (sensor_agent(k, steps, j, 0, mask, station_ends, to_end)) return true;
        if (!ctx_.timed_out) ctx_.failed.insert(key);
        return false;
    }

    uint64_t step_key(int k, int j, std::vector<CellIndex> pos, uint32_t mask,
                      const std::vector<CellIndex>& station_ends) const {
        std::sort(pos.begin(), pos.end());
        uint64_t h = hash_mix(0xcbf29ce4, (uint64_t(k) << 32) | (uint64_t(j) << 16) |
                                              uint64_t(ctx_.k_prime));
        h = hash_mix(h, 0x51u);
        for (CellIndex c : pos) h = hash_mix(h, uint64_t(c) + 1);
        std::vector<CellIndex> ends = station_ends;
        std::sort(ends.begin(), ends.end());
        h = hash_mix(h, 0x52u);
        for (CellIndex c : ends) h = hash_mix(h, uint64_t(c) + 1);
        return hash_mix(h, mask);
    }

    bool sensor_agent(int k, std::vector<std::vector<CellIndex>>& steps, int j, size_t i,
                      uint32_t mask, const std::vector<CellIndex>& station_ends,
                      const std::vector<int>& to_end) {
        int td = ctx_.team.t_d;
        size_t nd = steps[0].size();
        if (i == nd) {
            uint32_t new_mask = mask;
            for (CellIndex c : steps[j])
                if (ctx_.goal_bit[c] >= 0) new_mask |= 1u << ctx_.goal_bit[c];
            if (!goal_prune_ok(k, j, steps[j], new_mask, to_end)) return false;
            return sensor_step(k, steps, j + 1, new_mask, station_ends, to_end);
        }

        CellIndex prev = steps[j - 1][i];
        int remaining = td - 1 - j;
        bool interior = (j >= 1 && j <= td - 2);
        bool final_step = (j == td - 1);

        std::vector<CellIndex> moves = ctx_.sensor_adj[prev];
        order_moves(moves, mask, to_end);
        for (CellIndex m : moves) {
            if (to_end[m] > remaining) continue;
            if (final_step) {
                bool on_station = false;
                for (CellIndex e : station_ends)
                    if (e == m) {
                        on_station = true;
                        break;
                    }
                if (!on_station) continue;
                if (ctx_.team.charger_cap) {
                    int docked = 1;
                    for (size_t o = 0; o < i; ++o)
                        if (steps[j][o] == m) ++docked;
                    if (docked > *ctx_.team.charger_cap) continue;
                }
            }
            if (interior) {
                bool clash = false;
                for (size_t o = 0; o < i; ++o)
                    if (steps[j][o] == m) {
                        clash = true;
                        break;
                    }
                if (clash) continue;
            }
            steps[j][i] = m;
            if (sensor_agent(k, steps, j, i + 1, mask, station_ends, to_end)) return true;
            if (ctx_.timed_out) return false;
        }
        steps[j][i] = -1;
        return false;
    }

    // Admissible feasibility checks after a full step assignment.
    bool goal_prune_ok(int k, int j, const std::vector<CellIndex>& pos, uint32_t mask,
                       const std::vector<int>& to_end) const {
        bool last_cycle = (k == ctx_.k_prime - 1);
        if (!last_cycle) return true;
        int steps_left = ctx_.team.t_d - 1 - j;
        int unvisited = 0;
        for (size_t g = 0; g < ctx_.goals.size(); ++g) {
            if (mask & (1u << g)) continue;
            ++unvisited;
            CellIndex goal = ctx_.goals[g];
            bool ok = false;
            for (CellIndex c : pos)
                if (ctx_.dist(c, goal) + to_end[goal] <= steps_left) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return unvisited <= int(pos.size()) * steps_left;
    }

    void order_moves(std::vector<CellIndex>& moves, uint32_t mask,
                     const std::vector<int>& to_end) const {
        std::vector<std::pair<int, CellIndex>> keyed;
        keyed.reserve(moves.size());
        bool goals_left = false;
        for (size_t g = 0; g < ctx_.goals.size(); ++g)
            if (!(mask & (1u << g))) {
                goals_left = true;
                break;
            }
        for (CellIndex m : moves) {
            int key;
            if (goals_left) {
                key = kUnreachable;
                for (size_t g = 0; g < ctx_.goals.size(); ++g) {
                    if (mask & (1u << g)) continue;
                    key = std::min(key, ctx_.dist(m, ctx_.goals[g]));
                }
            } else {
                // Everything is covered: dwell on goal cells while slack
                // lasts (extra occupancies mean extra measurements), then
                // head for the dock.
                key = to_end[m] + (ctx_.goal_bit[m] >= 0 ? 0 : kDwellPenalty);
            }
            keyed.emplace_back(key, m);
        }
        std::sort(keyed.begin(), keyed.end());
        for (size_t t = 0; t < moves.size(); ++t) moves[t] = keyed[t].second;
    }
};

SearchContext make_context(const IPInstance& inst, const SolveOptions& options) {
    const PlanningProblem& problem = *inst.problem;
    SearchContext ctx{inst, *problem.scenario, problem.team, problem.goals};
    ctx.n_cells = ctx.s.grid.cell_count();

    ctx.sensor_adj.resize(ctx.n_cells);
    ctx.station_adj.resize(ctx.n_cells);
    for (CellIndex l : inst.sensor_cells) {
        ctx.sensor_adj[l] = neighbors(ctx.s, l);
        ctx.sensor_adj[l].push_back(l);
        std::sort(ctx.sensor_adj[l].begin(), ctx.sensor_adj[l].end());
    }
    for (CellIndex l : inst.station_cells) {
        ctx.station_adj[l] = station_neighbors(ctx.s, l);
        ctx.station_adj[l].push_back(l);
        std::sort(ctx.station_adj[l].begin(), ctx.station_adj[l].end());
    }

    ctx.sensor_dist.assign(size_t(ctx.n_cells) * ctx.n_cells, kUnreachable);
    ctx.station_dist.assign(size_t(ctx.n_cells) * ctx.n_cells, kUnreachable);
    for (CellIndex l : inst.sensor_cells) {
        std::vector<int> row(ctx.n_cells, kUnreachable);
        bfs_fill(ctx.n_cells, ctx.sensor_adj, l, row);
        std::copy(row.begin(), row.end(), ctx.sensor_dist.begin() + size_t(l) * ctx.n_cells);
    }
    for (CellIndex l : inst.station_cells) {
        std::vector<int> row(ctx.n_cells, kUnreachable);
        bfs_fill(ctx.n_cells, ctx.station_adj, l, row);
        std::copy(row.begin(), row.end(), ctx.station_dist.begin() + size_t(l) * ctx.n_cells);
    }

    ctx.goal_bit.assign(ctx.n_cells, -1);
    for (size_t g = 0; g < ctx.goals.size(); ++g) ctx.goal_bit[ctx.goals[g]] = int(g);

    ctx.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(options.time_limit_s));
    return ctx;
}

std::vector<uint8_t> assemble_assignment(const IPInstance& inst, const SearchContext& ctx,
                                         int k_prime) {
    std::vector<uint8_t> assignment(inst.num_vars, 0);
    const TeamConfig& team = ctx.team;
    for (int k = 0; k < k_prime; ++k) assignment[inst.lambda_id(k)] = 1;
    for (int k = 0; k < k_prime; ++k) {
        for (int j = 0; j < team.t_d; ++j)
            for (int i = 0; i < team.n_sensors; ++i)
                assignment[inst.sensor_id(i, j, k, ctx.sensor_steps[k][j][i])] = 1;
        for (int b = 0; b < team.t_c; ++b)
            for (int a = 0; a < team.n_stations; ++a)
                assignment[inst.station_id(a, b, k, ctx.station_steps[k][b][a])] = 1;
    }
    return assignment;
}

SolverResult solve_built_in(const IPInstance& inst, const SolveOptions& options) {
    if (!inst.problem)
        throw std::runtime_error("built-in solver needs the structured instance view");
    const PlanningProblem& problem = *inst.problem;
    auto t0 = Clock::now();

    SolverResult result;
    if (static_cast<int>(problem.goals.size()) > 31)
        throw std::runtime_error("built-in solver supports at most 31 goals");

    SearchContext ctx = make_context(inst, options);
    for (int k_prime = 1; k_prime <= problem.team.k_max_cycles; ++k_prime) {
        ctx.k_prime = k_prime;
        ctx.failed.clear();
        if (Clock::now() > ctx.deadline) {
            result.status = SolveStatus::timeout;
            break;
        }
        CycleSolver solver(ctx);
        bool found = solver.run(problem.start.sensor_cells, problem.start.station_cells);
        if (ctx.timed_out) {
            result.status = SolveStatus::timeout;
            break;
        }
        if (found) {
            result.status = SolveStatus::optimal;
            result.objective = k_prime;
            result.assignment = assemble_assignment(inst, ctx, k_prime);
            break;
        }
    }
    result.solve_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

int recompute_objective(const IPInstance& inst, const std::vector<uint8_t>& assignment) {
    int obj = 0;
    for (const auto& [v, c] : inst.objective)
        if (assignment[v]) obj += static_cast<int>(c);
    return obj;
}

}  // namespace

SolverResult solve(const IPInstance& instance, const SolveOptions& options) {
    if (!options.external_backend) return solve_built_in(instance, options);

    auto t0 = Clock::now();
    SolverResult result = options.external_backend->solve(instance, options.time_limit_s);
    if (result.status == SolveStatus::optimal || result.status == SolveStatus::feasible) {
        if (!instance.problem)
            throw std::runtime_error("cannot revalidate without the structured instance view");
        TeamPlan plan = extract_plan(instance, result.assignment);
        auto violations = validate_plan(plan, *instance.problem);
        if (!violations.empty())
            throw std::runtime_error("external backend returned an infeasible plan: " +
                                     violations.front());
        int obj = recompute_objective(instance, result.assignment);
        if (obj != result.objective)
            throw std::runtime_error("external backend objective mismatch");
    }
    result.solve_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

int min_cycles(const PlanningProblem& problem, const SolveOptions& options) {
    IPInstance inst = build_ip(problem);
    SolverResult result = solve(inst, options);
    if (result.status == SolveStatus::infeasible)
        throw std::runtime_error("planning problem is infeasible");
    if (result.assignment.empty()) throw std::runtime_error("solver timed out without incumbent");
    return result.objective;
}

}  // namespace gridclass

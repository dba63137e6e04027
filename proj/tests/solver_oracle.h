#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridclass/ip_model.hpp"
#include "gridclass/rng.hpp"

namespace testoracle {

using namespace gridclass;


// Exhaustive minimum-cycle oracle for single-station problems: a layered
// reachability sweep over joint (sensor positions, goal mask) states, one
// cycle at a time. Independent of the production search (no decomposition,
// no memoization, no ordering heuristics).
struct OracleState {
    std::vector<CellIndex> sensors;  // sorted
    CellIndex station;
    uint32_t mask;

    bool operator<(const OracleState& o) const {
        if (sensors != o.sensors) return sensors < o.sensors;
        if (station != o.station) return station < o.station;
        return mask < o.mask;
    }
};

int king_dist(const GridSpec& g, CellIndex a, CellIndex b) {
    return std::max(std::abs(g.row(a) - g.row(b)), std::abs(g.col(a) - g.col(b)));
}

// -1 when no plan exists within the cycle budget.
int oracle_min_cycles(const PlanningProblem& problem) {
    const Scenario& s = *problem.scenario;
    const TeamConfig& team = problem.team;
    if (team.n_stations != 1) throw std::logic_error("oracle supports one station only");

    std::map<CellIndex, int> goal_bit;
    for (size_t g = 0; g < problem.goals.size(); ++g) goal_bit[problem.goals[g]] = int(g);
    uint32_t full = (1u << problem.goals.size()) - 1;
    auto add_cover = [&](uint32_t mask, CellIndex l) {
        auto it = goal_bit.find(l);
        return it == goal_bit.end() ? mask : mask | (1u << it->second);
    };

    // Station BFS distances inside the admissible region.
    std::map<CellIndex, std::map<CellIndex, int>> station_dist;
    for (CellIndex from : s.station_admissible) {
        std::map<CellIndex, int>& d = station_dist[from];
        d[from] = 0;
        std::vector<CellIndex> frontier{from};
        while (!frontier.empty()) {
            std::vector<CellIndex> next;
            for (CellIndex l : frontier)
                for (CellIndex m : station_neighbors(s, l))
                    if (!d.count(m)) {
                        d[m] = d[l] + 1;
                        next.push_back(m);
                    }
            frontier = std::move(next);
        }
    }

    OracleState start;
    start.sensors = problem.start.sensor_cells;
    std::sort(start.sensors.begin(), start.sensors.end());
    start.station = problem.start.station_cells[0];
    start.mask = 0;
    for (CellIndex l : start.sensors) start.mask = add_cover(start.mask, l);

    std::set<OracleState> reachable{start};
    for (int cycle = 1; cycle <= team.k_max_cycles; ++cycle) {
        std::set<OracleState> next_states;
        for (const OracleState& state : reachable) {
            for (CellIndex end : s.station_admissible) {
                auto it = station_dist[state.station].find(end);
                if (it == station_dist[state.station].end() || it->second > team.t_c - 1)
                    continue;
                // Layered expansion of the joint sensor walk to this endpoint.
                std::set<std::pair<std::vector<CellIndex>, uint32_t>> layer{
                    {state.sensors, state.mask}};
                for (int j = 1; j < team.t_d && !layer.empty(); ++j) {
                    std::set<std::pair<std::vector<CellIndex>, uint32_t>> next_layer;
                    bool interior = j <= team.t_d - 2;
                    for (const auto& [pos, mask] : layer) {
                        // Joint moves via odometer over per-sensor choices.
                        std::vector<std::vector<CellIndex>> choices;
                        for (CellIndex p : pos) {
                            std::vector<CellIndex> c = neighbors(s, p);
                            c.push_back(p);
                            choices.push_back(std::move(c));
                        }
                        std::vector<size_t> idx(pos.size(), 0);
                        for (;;) {
                            std::vector<CellIndex> np(pos.size());
                            for (size_t i = 0; i < pos.size(); ++i) np[i] = choices[i][idx[i]];
                            std::vector<CellIndex> sorted_np = np;
                            std::sort(sorted_np.begin(), sorted_np.end());
                            bool distinct =
                                std::adjacent_find(sorted_np.begin(), sorted_np.end()) ==
                                sorted_np.end();
                            bool docked_ok =
                                j < team.t_d - 1 ||
                                std::all_of(np.begin(), np.end(),
                                            [&](CellIndex l) { return l == end; });
                            if ((!interior || distinct || pos.size() == 1) && docked_ok) {
                                uint32_t nm = mask;
                                for (CellIndex l : np) nm = add_cover(nm, l);
                                if (!s.team.charger_cap ||
                                    int(np.size()) <= *s.team.charger_cap || j < team.t_d - 1)
                                    next_layer.insert({sorted_np, nm});
                            }
                            size_t d = 0;
                            while (d < idx.size() && ++idx[d] == choices[d].size())
                                idx[d++] = 0;
                            if (d == idx.size()) break;
                        }
                    }
                    layer = std::move(next_layer);
                }
                for (const auto& [pos, mask] : layer) {
                    OracleState ns;
                    ns.sensors = pos;
                    ns.station = end;
                    ns.mask = mask;
                    next_states.insert(ns);
                }
            }
        }
        for (const OracleState& state : next_states)
            if (state.mask == full) return cycle;
        reachable = std::move(next_states);
        if (reachable.empty()) break;
    }
    return -1;
}

PlanningProblem random_tiny_problem(Rng& rng, Scenario& storage) {
    GeneratorParams params;
    params.rows = 3 + int(rng.uniform_int(2));
    params.cols = 3 + int(rng.uniform_int(2));
    params.n_obstacles = int(rng.uniform_int(3));
    params.n_interesting = 2;
    params.team.n_sensors = 1 + int(rng.uniform_int(2));
    params.team.n_stations = 1;
    params.team.t_d = 4 + 2 * int(rng.uniform_int(2));
    params.team.t_c = params.team.t_d / 2;
    params.team.k_max_cycles = 1 + int(rng.uniform_int(2));
    storage = generate_scenario(params, rng.next());

    std::vector<CellIndex> pool = storage.candidates();
    for (size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.uniform_int(i)]);
    pool.resize(1 + rng.uniform_int(3));
    std::sort(pool.begin(), pool.end());
    return PlanningProblem{&storage, storage.team, storage.initial, pool};
}


}  // namespace testoracle

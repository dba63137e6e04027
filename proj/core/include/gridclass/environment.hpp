#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gridclass {

// 0-based row-major cell index.
using CellIndex = int;

struct GridSpec {
    int rows = 0;
    int cols = 0;

    int cell_count() const { return rows * cols; }
    bool in_range(CellIndex l) const { return l >= 0 && l < cell_count(); }
    CellIndex index(int r, int c) const { return r * cols + c; }
    int row(CellIndex l) const { return l / cols; }
    int col(CellIndex l) const { return l % cols; }
};

// Team sizing and motion/energy limits. t_d is the sensing-cycle length in
// sensor moves, t_c the station moves per cycle (t_c < t_d).
struct TeamConfig {
    int n_sensors = 1;
    int n_stations = 1;
    int t_d = 8;
    int t_c = 4;
    int k_max_cycles = 2;
    std::optional<int> charger_cap;  // max sensors docked per station cell
};

// Sensor/station cells at an epoch boundary. Sensors rest on stations.
struct TeamState {
    std::vector<CellIndex> sensor_cells;
    std::vector<CellIndex> station_cells;
};

// Ground truth for one experiment: grid geometry, obstacle and
// station-admissible sets, per-cell Bernoulli means, thresholds, and the
// initial team placement. Immutable after construction.
struct Scenario {
    GridSpec grid;
    std::set<CellIndex> obstacles;
    std::set<CellIndex> station_admissible;
    bool station_admissible_all = false;  // admissible region is all non-obstacle cells
    std::map<CellIndex, double> mu;       // defined exactly on the candidate set
    double theta = 0.5;
    double epsilon = 0.05;
    double delta = 0.1;
    TeamConfig team;
    TeamState initial;

    bool is_obstacle(CellIndex l) const { return obstacles.count(l) != 0; }
    bool is_candidate(CellIndex l) const { return mu.count(l) != 0; }
    bool is_station_admissible(CellIndex l) const { return station_admissible.count(l) != 0; }
    int n_candidates() const { return static_cast<int>(mu.size()); }
    std::vector<CellIndex> candidates() const;

    // Throws std::invalid_argument when any structural invariant is violated.
    void check_invariants() const;
};

// King-move neighborhood inside the grid, excluding obstacles and l itself.
std::vector<CellIndex> neighbors(const Scenario& scenario, CellIndex l);

// neighbors(l) restricted to the station-admissible region.
std::vector<CellIndex> station_neighbors(const Scenario& scenario, CellIndex l);

// Cells whose true mean is >= threshold. Verification-only: the planner never
// sees this.
std::set<CellIndex> true_interesting_set(const Scenario& scenario, double threshold);

struct GeneratorParams {
    int rows = 10;
    int cols = 10;
    int n_obstacles = 16;
    int n_interesting = 10;
    double mu_worst = 0.8;
    double theta = 0.5;
    double epsilon = 0.05;
    double delta = 0.1;
    TeamConfig team;
    // Empty: station-admissible region is all non-obstacle cells.
    std::vector<CellIndex> station_region;
    // Drop station-admissible cells from the candidate set (road cells are
    // then never classified).
    bool exclude_station_region_from_candidates = false;
    // Explicit initial station cells; default places stations on the
    // lexicographically smallest admissible cells.
    std::vector<CellIndex> initial_stations;
    int max_attempts = 1000;
};

// Deterministic in seed. Rejects and resamples draws where some candidate
// cell is unreachable from the initial team cells or the admissible region
// cannot host all stations. Throws std::runtime_error after max_attempts.
Scenario generate_scenario(const GeneratorParams& params, uint64_t seed);

// JSON (de)serialization of the scenario document. Round-trip value-identical.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

}  // namespace gridclass

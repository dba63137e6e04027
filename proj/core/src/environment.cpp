#include "gridclass/environment.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "gridclass/rng.hpp"
#include "json.hpp"

namespace gridclass {

std::vector<CellIndex> Scenario::candidates() const {
    std::vector<CellIndex> out;
    out.reserve(mu.size());
    for (const auto& [l, m] : mu) out.push_back(l);
    return out;
}

void Scenario::check_invariants() const {
    if (grid.rows < 1 || grid.cols < 1)
        throw std::invalid_argument("grid must have at least one row and column");
    auto in_range = [&](CellIndex l) { return grid.in_range(l); };
    for (CellIndex l : obstacles)
        if (!in_range(l)) throw std::invalid_argument("obstacle cell out of range");
    for (CellIndex l : station_admissible) {
        if (!in_range(l)) throw std::invalid_argument("station-admissible cell out of range");
        if (is_obstacle(l)) throw std::invalid_argument("station-admissible cell inside obstacle set");
    }
    for (const auto& [l, m] : mu) {
        if (!in_range(l) || is_obstacle(l))
            throw std::invalid_argument("mu defined on non-candidate cell");
        if (m < 0.0 || m > 1.0) throw std::invalid_argument("mu outside [0,1]");
    }
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta outside (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(theta - epsilon > 0.0 && theta + epsilon < 1.0))
        throw std::invalid_argument("tolerance band exceeds (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta outside (0,1)");
    if (team.n_sensors < 1 || team.n_stations < 1)
        throw std::invalid_argument("team must have at least one sensor and one station");
    if (!(team.t_c >= 1 && team.t_c < team.t_d))
        throw std::invalid_argument("need 1 <= t_c < t_d");
    if (team.k_max_cycles < 1) throw std::invalid_argument("k_max_cycles must be >= 1");
    if (static_cast<int>(initial.sensor_cells.size()) != team.n_sensors ||
        static_cast<int>(initial.station_cells.size()) != team.n_stations)
        throw std::invalid_argument("initial placement size mismatch");
    std::set<CellIndex> stations(initial.station_cells.begin(), initial.station_cells.end());
    if (stations.size() != initial.station_cells.size())
        throw std::invalid_argument("initial station cells must be pairwise distinct");
    for (CellIndex l : initial.station_cells)
        if (!is_station_admissible(l))
            throw std::invalid_argument("initial station outside admissible region");
    for (CellIndex l : initial.sensor_cells) {
        if (is_obstacle(l)) throw std::invalid_argument("initial sensor on obstacle");
        if (!stations.count(l)) throw std::invalid_argument("initial sensor not docked on a station");
    }
}

std::vector<CellIndex> neighbors(const Scenario& scenario, CellIndex l) {
    if (!scenario.grid.in_range(l)) throw std::domain_error("cell out of range");
    if (scenario.is_obstacle(l)) throw std::domain_error("cell is an obstacle");
    std::vector<CellIndex> out;
    int r = scenario.grid.row(l), c = scenario.grid.col(l);
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            int nr = r + dr, nc = c + dc;
            if (nr < 0 || nr >= scenario.grid.rows || nc < 0 || nc >= scenario.grid.cols) continue;
            CellIndex m = scenario.grid.index(nr, nc);
            if (!scenario.is_obstacle(m)) out.push_back(m);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CellIndex> station_neighbors(const Scenario& scenario, CellIndex l) {
    if (!scenario.grid.in_range(l) || !scenario.is_station_admissible(l))
        throw std::domain_error("cell not in the station-admissible region");
    std::vector<CellIndex> out;
    for (CellIndex m : neighbors(scenario, l))
        if (scenario.is_station_admissible(m)) out.push_back(m);
    return out;
}

std::set<CellIndex> true_interesting_set(const Scenario& scenario, double threshold) {
    std::set<CellIndex> out;
    for (const auto& [l, m] : scenario.mu)
        if (m >= threshold) out.insert(l);
    return out;
}

namespace {

// 8-connected flood fill over non-obstacle cells.
std::set<CellIndex> reachable_from(const Scenario& scenario, const std::vector<CellIndex>& seeds) {
    std::set<CellIndex> seen;
    std::deque<CellIndex> queue;
    for (CellIndex s : seeds)
        if (seen.insert(s).second) queue.push_back(s);
    while (!queue.empty()) {
        CellIndex l = queue.front();
        queue.pop_front();
        for (CellIndex m : neighbors(scenario, l))
            if (seen.insert(m).second) queue.push_back(m);
    }
    return seen;
}

// Fisher-Yates on indices with our own RNG; std::shuffle output is
// implementation-defined.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.uniform_int(i)]);
}

}  // namespace

Scenario generate_scenario(const GeneratorParams& params, uint64_t seed) {
    GridSpec grid{params.rows, params.cols};
    if (grid.rows < 1 || grid.cols < 1) throw std::runtime_error("bad grid size");
    int n_cells = grid.cell_count();
    if (params.n_obstacles < 0 || params.n_obstacles >= n_cells)
        throw std::runtime_error("bad obstacle count");

    Rng rng(mix_seed(seed, 0x5ce7a210));
    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        Scenario s;
        s.grid = grid;
        s.theta = params.theta;
        s.epsilon = params.epsilon;
        s.delta = params.delta;
        s.team = params.team;

        // Obstacles: sample without replacement.
        std::vector<CellIndex> cells(n_cells);
        for (int i = 0; i < n_cells; ++i) cells[i] = i;
        shuffle(cells, rng);
        s.obstacles.insert(cells.begin(), cells.begin() + params.n_obstacles);

        // Station-admissible region.
        if (params.station_region.empty()) {
            s.station_admissible_all = true;
            for (int l = 0; l < n_cells; ++l)
                if (!s.is_obstacle(l)) s.station_admissible.insert(l);
        } else {
            for (CellIndex l : params.station_region)
                if (!s.is_obstacle(l)) s.station_admissible.insert(l);
        }
        if (static_cast<int>(s.station_admissible.size()) < params.team.n_stations) continue;

        // Candidate cells and interesting designation.
        std::vector<CellIndex> candidates;
        for (int l = 0; l < n_cells; ++l) {
            if (s.is_obstacle(l)) continue;
            if (params.exclude_station_region_from_candidates && s.is_station_admissible(l))
                continue;
            candidates.push_back(l);
        }
        if (static_cast<int>(candidates.size()) < params.n_interesting) continue;
        std::vector<CellIndex> pool = candidates;
        shuffle(pool, rng);
        std::set<CellIndex> interesting(pool.begin(), pool.begin() + params.n_interesting);
        for (CellIndex l : candidates) {
            double m = interesting.count(l) ? rng.uniform(params.mu_worst, 1.0)
                                            : rng.uniform(0.0, 1.0 - params.mu_worst);
            s.mu[l] = m;
        }

        // Initial placement: stations on the lexicographically smallest
        // admissible cells unless given; sensors docked round-robin.
        std::vector<CellIndex> stations = params.initial_stations;
        if (stations.empty()) {
            for (CellIndex l : s.station_admissible) {
                stations.push_back(l);
                if (static_cast<int>(stations.size()) == params.team.n_stations) break;
            }
        }
        if (static_cast<int>(stations.size()) != params.team.n_stations) continue;
        s.initial.station_cells = stations;
        if (params.team.charger_cap &&
            (params.team.n_sensors + params.team.n_stations - 1) / params.team.n_stations >
                *params.team.charger_cap)
            throw std::runtime_error("charger capacity cannot host all sensors");
        for (int i = 0; i < params.team.n_sensors; ++i)
            s.initial.sensor_cells.push_back(stations[i % stations.size()]);

        // Every candidate cell must be reachable from the initial team cells.
        auto seen = reachable_from(s, s.initial.station_cells);
        bool all_reachable = true;
        for (CellIndex l : candidates)
            if (!seen.count(l)) {
                all_reachable = false;
                break;
            }
        if (!all_reachable) continue;
        // Stations must be able to coexist (distinct cells already enforced).
        s.check_invariants();
        return s;
    }
    throw std::runtime_error("scenario generation failed: parameters infeasible after " +
                             std::to_string(params.max_attempts) + " attempts");
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["schema"] = "gridclass-scenario-v1";
    j["grid"] = {{"rows", s.grid.rows}, {"cols", s.grid.cols}};
    j["obstacles"] = std::vector<CellIndex>(s.obstacles.begin(), s.obstacles.end());
    if (s.station_admissible_all)
        j["station_admissible"] = "all";
    else
        j["station_admissible"] =
            std::vector<CellIndex>(s.station_admissible.begin(), s.station_admissible.end());
    nlohmann::ordered_json mu = nlohmann::ordered_json::object();
    for (const auto& [l, m] : s.mu) mu[std::to_string(l)] = m;
    j["mu"] = mu;
    j["theta"] = s.theta;
    j["epsilon"] = s.epsilon;
    j["delta"] = s.delta;
    nlohmann::ordered_json team;
    team["n_sensors"] = s.team.n_sensors;
    team["n_stations"] = s.team.n_stations;
    team["t_d"] = s.team.t_d;
    team["t_c"] = s.team.t_c;
    team["k_max_cycles"] = s.team.k_max_cycles;
    if (s.team.charger_cap) team["charger_cap"] = *s.team.charger_cap;
    j["team"] = team;
    j["initial"] = {{"sensors", s.initial.sensor_cells}, {"stations", s.initial.station_cells}};
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Scenario s;
    s.grid.rows = j.at("grid").at("rows").get<int>();
    s.grid.cols = j.at("grid").at("cols").get<int>();
    for (CellIndex l : j.at("obstacles").get<std::vector<CellIndex>>()) s.obstacles.insert(l);
    const auto& adm = j.at("station_admissible");
    if (adm.is_string() && adm.get<std::string>() == "all") {
        s.station_admissible_all = true;
        for (int l = 0; l < s.grid.cell_count(); ++l)
            if (!s.is_obstacle(l)) s.station_admissible.insert(l);
    } else {
        for (CellIndex l : adm.get<std::vector<CellIndex>>()) s.station_admissible.insert(l);
    }
    for (const auto& [key, val] : j.at("mu").items()) s.mu[std::stoi(key)] = val.get<double>();
    s.theta = j.at("theta").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    s.delta = j.at("delta").get<double>();
    const auto& team = j.at("team");
    s.team.n_sensors = team.at("n_sensors").get<int>();
    s.team.n_stations = team.at("n_stations").get<int>();
    s.team.t_d = team.at("t_d").get<int>();
    s.team.t_c = team.at("t_c").get<int>();
    s.team.k_max_cycles = team.at("k_max_cycles").get<int>();
    if (team.contains("charger_cap")) s.team.charger_cap = team.at("charger_cap").get<int>();
    s.initial.sensor_cells = j.at("initial").at("sensors").get<std::vector<CellIndex>>();
    s.initial.station_cells = j.at("initial").at("stations").get<std::vector<CellIndex>>();
    s.check_invariants();
    return s;
}

}  // namespace gridclass

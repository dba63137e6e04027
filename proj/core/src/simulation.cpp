#include "gridclass/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gridclass/assignment.hpp"
#include "gridclass/bounds.hpp"
#include "json.hpp"

namespace gridclass {

std::vector<uint8_t> sample_cell(const MeasurementModel& model, const Scenario& scenario,
                                 CellIndex l, Rng& rng) {
    auto it = scenario.mu.find(l);
    if (it == scenario.mu.end()) throw std::domain_error("cell is not a candidate");
    std::vector<uint8_t> out(model.batch_size);
    for (int b = 0; b < model.batch_size; ++b) {
        bool hit = rng.bernoulli(it->second);
        if (model.degraded_flip_prob > 0.0 && rng.bernoulli(model.degraded_flip_prob)) hit = !hit;
        out[b] = hit ? 1 : 0;
    }
    return out;
}

SimState make_sim_state(const Scenario& scenario, const MeasurementModel& model,
                        const RunParams& params, uint64_t seed) {
    SimState state;
    state.scenario = &scenario;
    state.model = model;
    state.params = params;
    state.run_seed = mix_seed(model.rng_seed, seed);
    state.bandit = make_bandit_state(scenario);
    state.team = scenario.initial;
    state.record.seed = seed;
    return state;
}

namespace {

// De-confliction pass over one plan: per cycle, forward in time, sensors
// always, stations behind a flag.
void deconflict_plan(TeamPlan& plan, const GridSpec& grid, bool stations_too) {
    auto pass = [&](std::vector<std::vector<std::vector<CellIndex>>>& paths, int steps) {
        if (paths.empty()) return;
        for (int k = 0; k < plan.cycles_used; ++k) {
            std::vector<std::vector<CellIndex>> per_step(steps,
                                                         std::vector<CellIndex>(paths.size()));
            for (int t = 0; t < steps; ++t)
                for (size_t agent = 0; agent < paths.size(); ++agent)
                    per_step[t][agent] = paths[agent][k][t];
            auto fixed = deconflict_cycle(per_step, grid);
            for (int t = 0; t < steps; ++t)
                for (size_t agent = 0; agent < paths.size(); ++agent)
                    paths[agent][k][t] = fixed[t][agent];
        }
    };
    int t_d = plan.sensor_paths.empty() || plan.sensor_paths[0].empty()
                  ? 0
                  : static_cast<int>(plan.sensor_paths[0][0].size());
    pass(plan.sensor_paths, t_d);
    if (stations_too) {
        int t_c = plan.station_paths.empty() || plan.station_paths[0].empty()
                      ? 0
                      : static_cast<int>(plan.station_paths[0][0].size());
        pass(plan.station_paths, t_c);
    }
}

// Rethreading can break per-agent cross-cycle continuity at cycle
// boundaries while preserving the docked multiset; restore it by permuting
// each cycle's paths to start where some agent ended.
void restitch_cycles(std::vector<std::vector<std::vector<CellIndex>>>& paths, int cycles) {
    size_t n = paths.size();
    for (int k = 1; k < cycles; ++k) {
        std::vector<std::vector<CellIndex>> pool;
        for (size_t i = 0; i < n; ++i) pool.push_back(paths[i][k]);
        std::vector<char> taken(n, false);
        for (size_t i = 0; i < n; ++i) {
            CellIndex prev_end = paths[i][k - 1].back();
            bool matched = false;
            for (size_t t = 0; t < n; ++t) {
                if (taken[t] || pool[t].front() != prev_end) continue;
                paths[i][k] = pool[t];
                taken[t] = true;
                matched = true;
                break;
            }
            if (!matched) {
                // Leave as-is; the validator will flag it.
                for (size_t t = 0; t < n; ++t)
                    if (!taken[t]) {
                        paths[i][k] = pool[t];
                        taken[t] = true;
                        break;
                    }
            }
        }
    }
}

}  // namespace

void run_epoch(SimState& state) {
    const Scenario& s = *state.scenario;
    if (is_terminated(state.bandit)) throw std::logic_error("run already terminated");

    std::vector<CellIndex> goals = select_epoch_goals(state.bandit, state.params.d_goals,
                                                      s.n_candidates(), s.delta);

    EpochRecord epoch;
    epoch.goals = goals;

    PlanningProblem problem{&s, s.team, state.team, goals};
    IPInstance inst = build_ip(problem);
    SolverResult result = solve(inst, state.params.solver);
    epoch.solver_status = result.status;
    epoch.solve_time_s = result.solve_time_s;
    if (result.status == SolveStatus::infeasible)
        throw std::runtime_error("epoch planning infeasible: scenario violates reachability");
    if (result.assignment.empty())
        throw std::runtime_error("solver timed out without an incumbent");

    TeamPlan plan = extract_plan(inst, result.assignment);
    epoch.cycles_used = plan.cycles_used;
    deconflict_plan(plan, s.grid, state.params.deconflict_stations);
    restitch_cycles(plan.sensor_paths, plan.cycles_used);
    if (state.params.deconflict_stations) restitch_cycles(plan.station_paths, plan.cycles_used);
    auto violations = validate_plan(plan, problem);
    if (!violations.empty())
        throw std::logic_error("plan failed validation after de-confliction: " +
                               violations.front());

    // Walk every sensor path and sample at unclassified candidate cells. The
    // first step of a later cycle repeats the previous cycle's final cell and
    // is not a new occupancy.
    for (int k = 0; k < plan.cycles_used; ++k)
        for (int j = (k == 0 ? 0 : 1); j < s.team.t_d; ++j)
            for (int i = 0; i < s.team.n_sensors; ++i) {
                CellIndex c = plan.sensor_paths[i][k][j];
                if (!s.is_candidate(c) || state.bandit.classified(c)) continue;
                int visit = ++state.visit_counts[c];
                Rng stream(mix_seed(state.run_seed, uint64_t(c), uint64_t(visit)));
                auto batch = sample_cell(state.model, s, c, stream);
                record_samples(state.bandit, c, batch);
                epoch.samples_drawn += static_cast<int64_t>(batch.size());
            }

    update_sets(state.bandit, s.n_candidates(), s.theta, s.epsilon, s.delta);
    epoch.epoch = state.bandit.epoch;  // 1-based: set after the update round
    epoch.keep = state.bandit.keep;
    epoch.reject = state.bandit.reject;

    // Next epoch starts from the final docked configuration.
    for (int i = 0; i < s.team.n_sensors; ++i)
        state.team.sensor_cells[i] = plan.sensor_paths[i].back().back();
    for (int a = 0; a < s.team.n_stations; ++a)
        state.team.station_cells[a] = plan.station_paths[a].back().back();

    state.record.total_cycles += plan.cycles_used;
    state.record.total_sensor_steps += int64_t(plan.cycles_used) * s.team.t_d;
    state.record.epochs.push_back(std::move(epoch));

    if (state.record.epoch_all_interesting < 0) {
        auto interesting = true_interesting_set(s, s.theta + s.epsilon);
        if (std::includes(state.bandit.keep.begin(), state.bandit.keep.end(),
                          interesting.begin(), interesting.end()))
            state.record.epoch_all_interesting = state.bandit.epoch;
    }
}

RunRecord run(const Scenario& scenario, const MeasurementModel& model, const RunParams& params,
              uint64_t seed) {
    SimState state = make_sim_state(scenario, model, params, seed);

    int cap = params.epoch_cap;
    if (cap <= 0) {
        BoundReport bounds = p_max(scenario, params.d_goals, model.batch_size);
        cap = 10 * std::max(1, static_cast<int>(std::ceil(bounds.p_max)));
    }

    while (!is_terminated(state.bandit)) {
        if (state.bandit.epoch >= cap) {
            state.record.capped = true;
            break;
        }
        run_epoch(state);
    }
    if (is_terminated(state.bandit)) {
        state.record.terminated = true;
        state.record.p_term = state.bandit.epoch;
        if (state.record.epoch_all_interesting < 0)
            state.record.epoch_all_interesting = state.bandit.epoch;
    }
    return state.record;
}

KmaxEstimate estimate_kmax(const Scenario& scenario, int d_goals, int trials, uint64_t seed,
                           const SolveOptions& options) {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    KmaxEstimate est;
    est.trials = trials;
    std::vector<CellIndex> candidates = scenario.candidates();
    std::vector<CellIndex> region(scenario.station_admissible.begin(),
                                  scenario.station_admissible.end());
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x5eed, uint64_t(t)));
        // Random goal set.
        std::vector<CellIndex> pool = candidates;
        for (size_t i = pool.size(); i > 1; --i)
            std::swap(pool[i - 1], pool[rng.uniform_int(i)]);
        int d = std::min<int>(d_goals, static_cast<int>(pool.size()));
        std::vector<CellIndex> goals(pool.begin(), pool.begin() + d);
        std::sort(goals.begin(), goals.end());
        // Random valid configuration: distinct station cells, sensors docked.
        std::vector<CellIndex> spool = region;
        for (size_t i = spool.size(); i > 1; --i)
            std::swap(spool[i - 1], spool[rng.uniform_int(i)]);
        TeamState start;
        start.station_cells.assign(spool.begin(), spool.begin() + scenario.team.n_stations);
        for (int i = 0; i < scenario.team.n_sensors; ++i)
            start.sensor_cells.push_back(
                start.station_cells[i % start.station_cells.size()]);

        PlanningProblem problem{&scenario, scenario.team, start, goals};
        SolverResult result = solve(build_ip(problem), options);
        if (result.status == SolveStatus::optimal)
            est.k_max = std::max(est.k_max, result.objective);
        else
            est.infeasible_trials += 1;
    }
    return est;
}

std::string run_record_to_json(const RunRecord& record) {
    nlohmann::ordered_json j;
    j["schema"] = "gridclass-run-v1";
    j["seed"] = record.seed;
    j["terminated"] = record.terminated;
    j["capped"] = record.capped;
    if (!record.failure.empty()) j["failure"] = record.failure;
    if (record.terminated) j["p_term"] = record.p_term;
    j["epoch_all_interesting"] = record.epoch_all_interesting;
    j["total_cycles"] = record.total_cycles;
    j["total_sensor_steps"] = record.total_sensor_steps;
    nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
    for (const EpochRecord& e : record.epochs) {
        nlohmann::ordered_json je;
        je["epoch"] = e.epoch;
        je["goals"] = e.goals;
        je["cycles_used"] = e.cycles_used;
        je["solver_status"] = static_cast<int>(e.solver_status);
        // Wall-clock timing is deliberately absent: the record is
        // byte-reproducible from (scenario, seed). Timings live in the CSV.
        je["samples_drawn"] = e.samples_drawn;
        je["keep"] = std::vector<CellIndex>(e.keep.begin(), e.keep.end());
        je["reject"] = std::vector<CellIndex>(e.reject.begin(), e.reject.end());
        epochs.push_back(std::move(je));
    }
    j["epochs"] = epochs;
    return j.dump(2);
}

std::string run_record_to_csv(const RunRecord& record, int run_id, int n_candidates,
                              bool header) {
    std::ostringstream out;
    if (header)
        out << "run_id,epoch,goals_count,cycles_used,solver_time_s,keep_size,reject_size,"
               "unclassified\n";
    for (const EpochRecord& e : record.epochs) {
        int classified = static_cast<int>(e.keep.size() + e.reject.size());
        out << run_id << ',' << e.epoch << ',' << e.goals.size() << ',' << e.cycles_used << ','
            << e.solve_time_s << ',' << e.keep.size() << ',' << e.reject.size() << ','
            << (n_candidates - classified) << '\n';
    }
    return out.str();
}

}  // namespace gridclass

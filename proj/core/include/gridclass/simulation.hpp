#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridclass/bandit.hpp"
#include "gridclass/environment.hpp"
#include "gridclass/rng.hpp"
#include "gridclass/solver.hpp"

namespace gridclass {

// Stochastic measurement model: B Bernoulli draws per cell visit, each
// flipped independently with degraded_flip_prob (0.05 mimics a poor sensor).
struct MeasurementModel {
    int batch_size = 10;
    double degraded_flip_prob = 0.0;
    uint64_t rng_seed = 0;
};

struct EpochRecord {
    int epoch = 0;
    std::vector<CellIndex> goals;
    int cycles_used = 0;
    SolveStatus solver_status = SolveStatus::optimal;
    double solve_time_s = 0.0;
    int64_t samples_drawn = 0;
    std::set<CellIndex> keep;    // snapshot after the epoch's update
    std::set<CellIndex> reject;
};

// Telemetry for one seeded run.
struct RunRecord {
    uint64_t seed = 0;
    std::vector<EpochRecord> epochs;
    bool terminated = false;
    bool capped = false;
    std::string failure;       // nonempty when the run aborted
    int p_term = -1;           // set iff terminated
    int epoch_all_interesting = -1;  // first epoch covering every interesting cell
    int64_t total_cycles = 0;
    int64_t total_sensor_steps = 0;  // cycles * t_d
};

struct RunParams {
    int d_goals = 8;
    int epoch_cap = 0;  // 0: 10 * ceil(P^max) safety net
    bool deconflict_stations = false;
    SolveOptions solver;
};

// B binary outcomes for one visit of cell l; advances the stream.
std::vector<uint8_t> sample_cell(const MeasurementModel& model, const Scenario& scenario,
                                 CellIndex l, Rng& rng);

struct SimState {
    const Scenario* scenario = nullptr;
    MeasurementModel model;
    RunParams params;
    uint64_t run_seed = 0;
    BanditState bandit;
    TeamState team;
    std::map<CellIndex, int> visit_counts;
    RunRecord record;
};

SimState make_sim_state(const Scenario& scenario, const MeasurementModel& model,
                        const RunParams& params, uint64_t seed);

// One epoch of the high-level loop: goal selection, planning, de-confliction,
// measurement collection, set update. Pre: not terminated. Throws
// std::runtime_error when planning is infeasible and std::logic_error when a
// produced plan fails validation.
void run_epoch(SimState& state);

// Full loop until termination or the epoch cap. Deterministic in
// (inputs, seed).
RunRecord run(const Scenario& scenario, const MeasurementModel& model, const RunParams& params,
              uint64_t seed);

struct KmaxEstimate {
    int k_max = 0;
    int trials = 0;
    int infeasible_trials = 0;
};

// Monte-Carlo estimate of the worst-case cycles per epoch: random goal sets
// of size d_goals from random valid team configurations.
KmaxEstimate estimate_kmax(const Scenario& scenario, int d_goals, int trials, uint64_t seed,
                           const SolveOptions& options = {});

std::string run_record_to_json(const RunRecord& record);
// Per-epoch CSV rows; includes a header when header is true.
std::string run_record_to_csv(const RunRecord& record, int run_id, int n_candidates,
                              bool header);

}  // namespace gridclass

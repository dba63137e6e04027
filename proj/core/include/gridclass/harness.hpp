#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridclass/environment.hpp"
#include "gridclass/simulation.hpp"

namespace gridclass {

// One experiment batch: n_runs independent seeded runs, each on a freshly
// generated scenario. Seeds are pre-assigned from base_seed so the result is
// identical for any worker count.
struct BatchSpec {
    GeneratorParams generator;
    MeasurementModel model;
    RunParams run;
    int n_runs = 100;
    uint64_t base_seed = 1;
    int workers = 1;
};

struct BatchResult {
    std::vector<Scenario> scenarios;  // one per run, aligned with records
    std::vector<RunRecord> records;
    int failures = 0;  // records with a nonempty failure string
};

BatchResult run_batch(const BatchSpec& spec);

// Nearest-rank sample quantiles.
struct Quantiles {
    double q10 = 0.0;
    double median = 0.0;
    double q90 = 0.0;
};

Quantiles quantiles(std::vector<double> values);

struct AggregateRow {
    double axis_value = 0.0;
    int n_runs = 0;
    int n_failures = 0;
    Quantiles solve_s;             // per-epoch solver times, pooled over runs
    Quantiles epochs_interesting;  // first epoch with every interesting cell kept
    Quantiles epochs_all;          // termination epoch
};

AggregateRow aggregate(const BatchResult& result, double axis_value);

// Parameter axes the experiment protocol varies one at a time.
enum class SweepAxis { mu_worst, d_goals, cycle_lengths, team_size };

// Overwrites the axis-controlled field(s) with value: mu_worst sets the
// interesting-cell mean floor; d_goals the goals per epoch; cycle_lengths
// sets t_d = value and t_c = value / 2; team_size sets n_sensors = value and
// n_stations = max(1, value / 2).
void apply_axis(BatchSpec& spec, SweepAxis axis, double value);

struct SweepSpec {
    BatchSpec base;
    SweepAxis axis = SweepAxis::mu_worst;
    std::vector<double> values;
};

struct SweepResult {
    std::vector<AggregateRow> rows;
    std::vector<BatchResult> batches;  // aligned with rows
};

// Runs one batch per axis value. Every axis point reuses the same base_seed
// (common random numbers) so differences along the axis are paired.
SweepResult run_sweep(const SweepSpec& spec);

std::string sweep_table_csv(const SweepResult& result);
// Long-form per-epoch classification progress for plotting.
std::string progress_curves_csv(const SweepResult& result);
std::string aggregate_row_to_json(const AggregateRow& row);

}  // namespace gridclass

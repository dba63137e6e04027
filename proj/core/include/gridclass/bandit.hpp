#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridclass/environment.hpp"

namespace gridclass {

// Sufficient statistics of a cell's measurement history.
struct CellStats {
    int64_t samples = 0;
    int64_t successes = 0;

    double mean() const { return samples == 0 ? 0.0 : double(successes) / double(samples); }
};

// The high-level planner's entire memory: per-cell statistics plus the
// monotone keep/reject sets.
struct BanditState {
    std::map<CellIndex, CellStats> stats;  // one entry per candidate cell
    std::set<CellIndex> keep;
    std::set<CellIndex> reject;
    int epoch = 0;

    bool classified(CellIndex l) const { return keep.count(l) || reject.count(l); }
};

BanditState make_bandit_state(const Scenario& scenario);

// Confidence radius U(n). Infinity when the cell has no samples.
double confidence_radius(int64_t samples, int n_candidates, double delta);

// Acquisition score J = empirical mean + confidence radius.
double score(const CellStats& stats, int n_candidates, double delta);

// Top-D unclassified cells by descending score; ties broken by ascending
// cell index. Empty when everything is classified.
std::vector<CellIndex> select_epoch_goals(const BanditState& state, int d_goals,
                                          int n_candidates, double delta);

void record_samples(BanditState& state, CellIndex l, const std::vector<uint8_t>& batch);

// One round of keep/reject updates; increments the epoch. Members never
// leave. A cell satisfying both rules goes to keep.
void update_sets(BanditState& state, int n_candidates, double theta, double epsilon,
                 double delta);

bool is_terminated(const BanditState& state);

// Snapshot for the anytime-export feature.
std::string bandit_state_to_json(const BanditState& state);

}  // namespace gridclass

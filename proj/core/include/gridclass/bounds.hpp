#pragma once

#include <map>
#include <set>
#include <vector>

#include "gridclass/environment.hpp"

namespace gridclass {

// Closed-form difficulty/termination bounds for one scenario. Uses the
// ground-truth means, so this is verification-side only.
struct BoundReport {
    std::map<CellIndex, double> delta;  // per-cell gap
    std::map<CellIndex, double> p_l;    // per-cell epoch bound
    std::set<CellIndex> d_delta_set;    // smallest-gap cell plus D-1 largest gaps
    double p_max = 0.0;
    bool clamped = false;  // inner log floored at 1 somewhere
};

// Gap |mu - theta| + epsilon.
double delta_l(double mu, double theta, double epsilon);

// Per-cell epoch bound. Natural logs; the inner log is floored at 1 (and
// flagged via *clamped) to keep the bound positive in extreme regimes.
double p_l(double delta_gap, int batch_size, int n_candidates, double delta,
           bool* clamped = nullptr);

BoundReport p_max(const Scenario& scenario, int d_goals, int batch_size);

struct RunRecord;  // simulation module

struct GuaranteeReport {
    int runs = 0;
    int anytime_violations = 0;   // some epoch with a false keep or false reject
    int labeling_failures = 0;    // final keep outside [S_{theta+eps}, S_{theta-eps}]
    int termination_failures = 0; // p_term > ceil(p_max)
    double anytime_rate = 0.0;
    double labeling_rate = 0.0;
    double termination_rate = 0.0;
    double slack = 0.0;  // two-sided binomial 95% slack for the batch size
    bool anytime_ok = false;
    bool labeling_ok = false;
    bool termination_ok = false;
};

// Empirical check of the anytime, labeling-error, and finite-time claims
// over a batch of seeded runs with ground truth available. Cells inside the
// (theta-eps, theta+eps) band are legitimately classifiable either way and
// are never counted as violations.
GuaranteeReport verify_guarantees(const std::vector<RunRecord>& records,
                                  const std::vector<Scenario>& scenarios, int d_goals,
                                  int batch_size);

}  // namespace gridclass

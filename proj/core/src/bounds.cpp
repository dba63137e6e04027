#include "gridclass/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gridclass/simulation.hpp"

namespace gridclass {

double delta_l(double mu, double theta, double epsilon) {
    return std::fabs(mu - theta) + epsilon;
}

double p_l(double delta_gap, int batch_size, int n_candidates, double delta, bool* clamped) {
    if (!(delta_gap > 0.0)) throw std::domain_error("gap must be positive");
    double root = std::sqrt(3.0 * n_candidates / delta);
    double inner = std::log(192.0 / (delta_gap * delta_gap) * root);
    if (inner < 1.0) {
        inner = 1.0;
        if (clamped) *clamped = true;
    }
    return 16.0 / (batch_size * delta_gap * delta_gap) * std::log(4.0 * root * inner);
}

BoundReport p_max(const Scenario& scenario, int d_goals, int batch_size) {
    if (d_goals < 1) throw std::domain_error("d_goals must be >= 1");
    BoundReport report;
    int n = scenario.n_candidates();
    if (n == 0) return report;

    for (const auto& [l, mu] : scenario.mu) {
        double gap = delta_l(mu, scenario.theta, scenario.epsilon);
        report.delta[l] = gap;
        bool clamped = false;
        report.p_l[l] = p_l(gap, batch_size, n, scenario.delta, &clamped);
        report.clamped = report.clamped || clamped;
    }

    // Hardest set: the smallest-gap cell plus the D-1 largest gaps (ties by
    // lowest cell index).
    std::vector<std::pair<double, CellIndex>> by_gap;
    for (const auto& [l, gap] : report.delta) by_gap.emplace_back(gap, l);
    auto argmin = std::min_element(by_gap.begin(), by_gap.end(),
                                   [](const auto& a, const auto& b) {
                                       if (a.first != b.first) return a.first < b.first;
                                       return a.second < b.second;
                                   });
    report.d_delta_set.insert(argmin->second);
    std::vector<std::pair<double, CellIndex>> rest;
    for (const auto& e : by_gap)
        if (e.second != argmin->second) rest.push_back(e);
    std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; i < d_goals - 1 && i < static_cast<int>(rest.size()); ++i)
        report.d_delta_set.insert(rest[i].second);

    double sum = 0.0, max_in_set = 0.0;
    for (const auto& [l, pl] : report.p_l) {
        if (report.d_delta_set.count(l))
            max_in_set = std::max(max_in_set, pl);
        else
            sum += pl;
    }
    report.p_max = sum / d_goals + max_in_set;
    return report;
}

GuaranteeReport verify_guarantees(const std::vector<RunRecord>& records,
                                  const std::vector<Scenario>& scenarios, int d_goals,
                                  int batch_size) {
    if (records.size() != scenarios.size() || records.empty())
        throw std::domain_error("need one scenario per run record");
    GuaranteeReport report;
    report.runs = static_cast<int>(records.size());

    for (size_t m = 0; m < records.size(); ++m) {
        const Scenario& s = scenarios[m];
        const RunRecord& r = records[m];
        auto s_plus = true_interesting_set(s, s.theta + s.epsilon);
        auto s_minus = true_interesting_set(s, s.theta - s.epsilon);

        bool anytime_bad = false;
        for (const EpochRecord& e : r.epochs) {
            bool keep_ok = std::includes(s_minus.begin(), s_minus.end(), e.keep.begin(),
                                         e.keep.end());
            std::vector<CellIndex> overlap;
            std::set_intersection(e.reject.begin(), e.reject.end(), s_plus.begin(),
                                  s_plus.end(), std::back_inserter(overlap));
            if (!keep_ok || !overlap.empty()) {
                anytime_bad = true;
                break;
            }
        }
        if (anytime_bad) report.anytime_violations += 1;

        const std::set<CellIndex>& final_keep =
            r.epochs.empty() ? std::set<CellIndex>{} : r.epochs.back().keep;
        bool labeling_ok =
            std::includes(final_keep.begin(), final_keep.end(), s_plus.begin(), s_plus.end()) &&
            std::includes(s_minus.begin(), s_minus.end(), final_keep.begin(), final_keep.end());
        if (!labeling_ok || !r.terminated) report.labeling_failures += 1;

        double bound = p_max(s, d_goals, batch_size).p_max;
        if (!r.terminated || r.p_term > static_cast<int>(std::ceil(bound)))
            report.termination_failures += 1;
    }

    double m = static_cast<double>(report.runs);
    double delta = scenarios.front().delta;
    report.slack = 1.96 * std::sqrt(delta * (1.0 - delta) / m);
    report.anytime_rate = report.anytime_violations / m;
    report.labeling_rate = report.labeling_failures / m;
    report.termination_rate = report.termination_failures / m;
    report.anytime_ok = report.anytime_rate <= delta + report.slack;
    report.labeling_ok = report.labeling_rate <= delta + report.slack;
    report.termination_ok = report.termination_rate <= delta + report.slack;
    return report;
}

}  // namespace gridclass

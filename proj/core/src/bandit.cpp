#include "gridclass/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace gridclass {

BanditState make_bandit_state(const Scenario& scenario) {
    BanditState state;
    for (const auto& [l, m] : scenario.mu) state.stats[l] = CellStats{};
    return state;
}

double confidence_radius(int64_t samples, int n_candidates, double delta) {
    if (samples == 0) return std::numeric_limits<double>::infinity();
    double n = static_cast<double>(samples);
    double inner = 2.0 * std::log(std::log2(2.0 * n)) + std::log(12.0 * n_candidates / delta);
    return 2.0 * std::sqrt(inner / (2.0 * n));
}

double score(const CellStats& stats, int n_candidates, double delta) {
    if (stats.samples == 0) return std::numeric_limits<double>::infinity();
    return stats.mean() + confidence_radius(stats.samples, n_candidates, delta);
}

std::vector<CellIndex> select_epoch_goals(const BanditState& state, int d_goals,
                                          int n_candidates, double delta) {
    if (d_goals < 1) throw std::domain_error("d_goals must be >= 1");
    std::vector<std::pair<double, CellIndex>> scored;
    for (const auto& [l, stats] : state.stats) {
        if (state.classified(l)) continue;
        scored.emplace_back(score(stats, n_candidates, delta), l);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<CellIndex> out;
    for (size_t i = 0; i < scored.size() && i < static_cast<size_t>(d_goals); ++i)
        out.push_back(scored[i].second);
    return out;
}

void record_samples(BanditState& state, CellIndex l, const std::vector<uint8_t>& batch) {
    auto it = state.stats.find(l);
    if (it == state.stats.end()) throw std::domain_error("cell is not a candidate");
    it->second.samples += static_cast<int64_t>(batch.size());
    for (uint8_t b : batch) it->second.successes += b ? 1 : 0;
}

void update_sets(BanditState& state, int n_candidates, double theta, double epsilon,
                 double delta) {
    for (const auto& [l, stats] : state.stats) {
        if (state.classified(l)) continue;
        double u = confidence_radius(stats.samples, n_candidates, delta);
        if (std::isinf(u)) continue;
        double mean = stats.mean();
        if (mean - u >= theta - epsilon)
            state.keep.insert(l);  // keep wins when both rules fire
        else if (mean + u <= theta + epsilon)
            state.reject.insert(l);
    }
    state.epoch += 1;
}

bool is_terminated(const BanditState& state) {
    return state.keep.size() + state.reject.size() == state.stats.size();
}

std::string bandit_state_to_json(const BanditState& state) {
    nlohmann::ordered_json j;
    j["schema"] = "gridclass-bandit-v1";
    j["epoch"] = state.epoch;
    nlohmann::ordered_json cells = nlohmann::ordered_json::object();
    for (const auto& [l, s] : state.stats)
        cells[std::to_string(l)] = {{"samples", s.samples}, {"successes", s.successes}};
    j["cells"] = cells;
    j["keep"] = std::vector<CellIndex>(state.keep.begin(), state.keep.end());
    j["reject"] = std::vector<CellIndex>(state.reject.begin(), state.reject.end());
    return j.dump(2);
}

}  // namespace gridclass

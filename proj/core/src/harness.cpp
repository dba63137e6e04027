#include "gridclass/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gridclass {

BatchResult run_batch(const BatchSpec& spec) {
    if (spec.n_runs < 1) throw std::domain_error("n_runs must be >= 1");
    BatchResult result;
    result.scenarios.resize(spec.n_runs);
    result.records.resize(spec.n_runs);

    auto one_run = [&](int m) {
        uint64_t scenario_seed = mix_seed(spec.base_seed, 0xA11CE, uint64_t(m));
        uint64_t run_seed = mix_seed(spec.base_seed, 0xB0B, uint64_t(m));
        RunRecord& record = result.records[m];
        record.seed = run_seed;
        try {
            result.scenarios[m] = generate_scenario(spec.generator, scenario_seed);
            record = run(result.scenarios[m], spec.model, spec.run, run_seed);
        } catch (const std::exception& e) {
            record.failure = e.what();
        }
    };

    int workers = std::max(1, spec.workers);
    if (workers == 1) {
        for (int m = 0; m < spec.n_runs; ++m) one_run(m);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int m = next.fetch_add(1); m < spec.n_runs; m = next.fetch_add(1))
                    one_run(m);
            });
        for (auto& t : pool) t.join();
    }

    for (const RunRecord& r : result.records)
        if (!r.failure.empty()) result.failures += 1;
    return result;
}

Quantiles quantiles(std::vector<double> values) {
    Quantiles q;
    if (values.empty()) return q;
    std::sort(values.begin(), values.end());
    auto rank = [&](double p) {
        int idx = static_cast<int>(std::ceil(p * values.size())) - 1;
        return values[std::clamp(idx, 0, static_cast<int>(values.size()) - 1)];
    };
    q.q10 = rank(0.10);
    q.median = rank(0.50);
    q.q90 = rank(0.90);
    return q;
}

AggregateRow aggregate(const BatchResult& result, double axis_value) {
    AggregateRow row;
    row.axis_value = axis_value;
    row.n_runs = static_cast<int>(result.records.size());
    row.n_failures = result.failures;

    std::vector<double> solve_times, epochs_interesting, epochs_all;
    for (const RunRecord& r : result.records) {
        if (!r.failure.empty()) continue;
        for (const EpochRecord& e : r.epochs) solve_times.push_back(e.solve_time_s);
        if (r.epoch_all_interesting >= 0)
            epochs_interesting.push_back(r.epoch_all_interesting);
        if (r.terminated) epochs_all.push_back(r.p_term);
    }
    row.solve_s = quantiles(std::move(solve_times));
    row.epochs_interesting = quantiles(std::move(epochs_interesting));
    row.epochs_all = quantiles(std::move(epochs_all));
    return row;
}

void apply_axis(BatchSpec& spec, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::mu_worst:
            spec.generator.mu_worst = value;
            break;
        case SweepAxis::d_goals:
            spec.run.d_goals = static_cast<int>(value);
            break;
        case SweepAxis::cycle_lengths:
            spec.generator.team.t_d = static_cast<int>(value);
            spec.generator.team.t_c = std::max(1, static_cast<int>(value) / 2);
            break;
        case SweepAxis::team_size:
            spec.generator.team.n_sensors = static_cast<int>(value);
            spec.generator.team.n_stations =
                std::max(1, static_cast<int>(value) / 2);
            break;
    }
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw std::domain_error("sweep needs at least one value");
    SweepResult out;
    for (size_t v = 0; v < spec.values.size(); ++v) {
        BatchSpec point = spec.base;
        apply_axis(point, spec.axis, spec.values[v]);
        // Common random numbers: every axis point reuses the same seeds so
        // differences along the axis are paired, not resampled.
        BatchResult batch = run_batch(point);
        out.rows.push_back(aggregate(batch, spec.values[v]));
        out.batches.push_back(std::move(batch));
    }
    return out;
}

std::string sweep_table_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "axis_value,n_runs,median_solve_s,solve_s_q10,solve_s_q90,"
           "med_epochs_interesting,epochs_interesting_q10,epochs_interesting_q90,"
           "med_epochs_all,epochs_all_q10,epochs_all_q90\n";
    for (const AggregateRow& r : result.rows)
        out << r.axis_value << ',' << r.n_runs << ',' << r.solve_s.median << ','
            << r.solve_s.q10 << ',' << r.solve_s.q90 << ',' << r.epochs_interesting.median
            << ',' << r.epochs_interesting.q10 << ',' << r.epochs_interesting.q90 << ','
            << r.epochs_all.median << ',' << r.epochs_all.q10 << ',' << r.epochs_all.q90
            << '\n';
    return out.str();
}

std::string progress_curves_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "axis_value,run_id,epoch,frac_classified,frac_interesting_classified\n";
    for (size_t v = 0; v < result.batches.size(); ++v) {
        double axis = result.rows[v].axis_value;
        const BatchResult& batch = result.batches[v];
        for (size_t m = 0; m < batch.records.size(); ++m) {
            const RunRecord& r = batch.records[m];
            if (!r.failure.empty()) continue;
            const Scenario& s = batch.scenarios[m];
            auto interesting = true_interesting_set(s, s.theta + s.epsilon);
            double n = std::max(1, s.n_candidates());
            double ni = std::max<size_t>(1, interesting.size());
            for (const EpochRecord& e : r.epochs) {
                int classified = static_cast<int>(e.keep.size() + e.reject.size());
                int interesting_kept = 0;
                for (CellIndex l : interesting) interesting_kept += e.keep.count(l);
                out << axis << ',' << m << ',' << e.epoch << ',' << classified / n << ','
                    << interesting_kept / ni << '\n';
            }
        }
    }
    return out.str();
}

std::string aggregate_row_to_json(const AggregateRow& row) {
    nlohmann::ordered_json j;
    j["schema"] = "gridclass-aggregate-v1";
    j["axis_value"] = row.axis_value;
    j["n_runs"] = row.n_runs;
    j["n_failures"] = row.n_failures;
    auto put = [&](const char* name, const Quantiles& q) {
        j[name] = {{"q10", q.q10}, {"median", q.median}, {"q90", q.q90}};
    };
    put("solve_s", row.solve_s);
    put("epochs_interesting", row.epochs_interesting);
    put("epochs_all", row.epochs_all);
    return j.dump(2);
}

}  // namespace gridclass

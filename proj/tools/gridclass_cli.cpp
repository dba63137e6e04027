// Command-line front end for the grid classification toolkit.
//
// Subcommands:
//   generate       write a random scenario document
//   run            execute one seeded classification run on a scenario
//   sweep          run a one-axis parameter sweep and emit aggregate tables
//   bounds         closed-form difficulty report for a scenario
//   validate       structural check of a scenario document
//   estimate-kmax  Monte-Carlo estimate of the worst-case cycles per epoch
//
// Exit codes: 0 success, 1 domain failure (invalid input, infeasible model),
// 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gridclass/bounds.hpp"
#include "gridclass/harness.hpp"
#include "gridclass/simulation.hpp"
#include "json.hpp"

namespace {

using namespace gridclass;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct GeneratorCli {
    GeneratorParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rows", params.rows, "Grid rows");
        cmd->add_option("--cols", params.cols, "Grid columns");
        cmd->add_option("--obstacles", params.n_obstacles, "Obstacle cell count");
        cmd->add_option("--interesting", params.n_interesting,
                        "Cells with mean above the threshold band");
        cmd->add_option("--mu-worst", params.mu_worst,
                        "Mean floor for interesting cells (others stay below 1 - mu_worst)");
        cmd->add_option("--theta", params.theta, "Classification threshold");
        cmd->add_option("--epsilon", params.epsilon, "Threshold tolerance band");
        cmd->add_option("--delta", params.delta, "Failure probability budget");
        cmd->add_option("--sensors", params.team.n_sensors, "Sensor count");
        cmd->add_option("--stations", params.team.n_stations, "Charging station count");
        cmd->add_option("--td", params.team.t_d, "Sensor steps per cycle");
        cmd->add_option("--tc", params.team.t_c, "Station steps per cycle");
        cmd->add_option("--kmax", params.team.k_max_cycles, "Cycle budget per epoch");
    }
};

BoundReport bounds_for(const Scenario& s, int d_goals, int batch_size) {
    return p_max(s, d_goals, batch_size);
}

std::string bounds_to_json(const Scenario& s, const BoundReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = "gridclass-bounds-v1";
    j["n_candidates"] = s.n_candidates();
    j["p_max"] = report.p_max;
    j["p_max_ceil"] = static_cast<int>(std::ceil(report.p_max));
    j["clamped"] = report.clamped;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& [l, gap] : report.delta) {
        nlohmann::ordered_json c;
        c["cell"] = l;
        c["gap"] = gap;
        c["p_l"] = report.p_l.at(l);
        c["hardest_set"] = report.d_delta_set.count(l) != 0;
        cells.push_back(std::move(c));
    }
    j["cells"] = cells;
    return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit-driven spatial classification toolkit"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a random scenario document");
    GeneratorCli gen;
    gen.attach(generate);
    uint64_t gen_seed = 1;
    std::string gen_out;
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--out", gen_out, "Output path ('-' for stdout)");

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute one seeded classification run");
    std::string run_scenario, run_out, run_csv;
    uint64_t run_seed = 1;
    RunParams run_params;
    MeasurementModel run_model;
    run_cmd->add_option("--scenario", run_scenario, "Scenario JSON path")->required();
    run_cmd->add_option("--seed", run_seed, "Run seed");
    run_cmd->add_option("--d-goals", run_params.d_goals, "Goal cells per epoch");
    run_cmd->add_option("--epoch-cap", run_params.epoch_cap,
                        "Epoch cap (0: derived from the termination bound)");
    run_cmd->add_option("--batch-size", run_model.batch_size, "Measurements per visit");
    run_cmd->add_option("--degraded-flip", run_model.degraded_flip_prob,
                        "Per-measurement flip probability");
    run_cmd->add_option("--time-limit-s", run_params.solver.time_limit_s,
                        "Planner time limit per epoch");
    run_cmd->add_flag("--deconflict-stations", run_params.deconflict_stations,
                      "Apply the repair pass to station paths too");
    run_cmd->add_option("--out", run_out, "Run record JSON path ('-' for stdout)");
    run_cmd->add_option("--csv", run_csv, "Optional per-epoch CSV path");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "One-axis parameter sweep");
    GeneratorCli sweep_gen;
    sweep_gen.attach(sweep_cmd);
    std::string sweep_axis = "mu-worst";
    std::vector<double> sweep_values;
    std::string sweep_out, sweep_curves;
    int sweep_runs = 20;
    int sweep_workers = 1;
    uint64_t sweep_seed = 1;
    RunParams sweep_run_params;
    MeasurementModel sweep_model;
    sweep_cmd
        ->add_option("--axis", sweep_axis, "mu-worst | d-goals | cycle-lengths | team-size")
        ->check(CLI::IsMember({"mu-worst", "d-goals", "cycle-lengths", "team-size"}));
    sweep_cmd->add_option("--values", sweep_values, "Axis values")->required();
    sweep_cmd->add_option("--runs", sweep_runs, "Runs per axis value");
    sweep_cmd->add_option("--workers", sweep_workers, "Worker threads");
    sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
    sweep_cmd->add_option("--d-goals", sweep_run_params.d_goals, "Goal cells per epoch");
    sweep_cmd->add_option("--epoch-cap", sweep_run_params.epoch_cap, "Epoch cap per run");
    sweep_cmd->add_option("--batch-size", sweep_model.batch_size, "Measurements per visit");
    sweep_cmd->add_option("--degraded-flip", sweep_model.degraded_flip_prob,
                          "Per-measurement flip probability");
    sweep_cmd->add_option("--time-limit-s", sweep_run_params.solver.time_limit_s,
                          "Planner time limit per epoch");
    sweep_cmd->add_option("--out", sweep_out, "Aggregate table CSV path ('-' for stdout)");
    sweep_cmd->add_option("--curves", sweep_curves, "Optional progress-curve CSV path");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form difficulty report");
    std::string bounds_scenario, bounds_out;
    int bounds_d = 8, bounds_batch = 10;
    bounds_cmd->add_option("--scenario", bounds_scenario, "Scenario JSON path")->required();
    bounds_cmd->add_option("--d-goals", bounds_d, "Goal cells per epoch");
    bounds_cmd->add_option("--batch-size", bounds_batch, "Measurements per visit");
    bounds_cmd->add_option("--out", bounds_out, "Output path ('-' for stdout)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario document");
    std::string validate_scenario;
    validate_cmd->add_option("--scenario", validate_scenario, "Scenario JSON path")
        ->required();

    // estimate-kmax
    auto* kmax_cmd =
        app.add_subcommand("estimate-kmax", "Estimate the worst-case cycles per epoch");
    std::string kmax_scenario;
    int kmax_d = 8, kmax_trials = 50;
    uint64_t kmax_seed = 1;
    double kmax_time_limit = 600.0;
    kmax_cmd->add_option("--scenario", kmax_scenario, "Scenario JSON path")->required();
    kmax_cmd->add_option("--d-goals", kmax_d, "Goal cells per epoch");
    kmax_cmd->add_option("--trials", kmax_trials, "Random trials");
    kmax_cmd->add_option("--seed", kmax_seed, "Trial seed");
    kmax_cmd->add_option("--time-limit-s", kmax_time_limit, "Planner time limit per trial");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            Scenario s = generate_scenario(gen.params, gen_seed);
            write_output(gen_out, scenario_to_json(s));
        } else if (*run_cmd) {
            Scenario s = scenario_from_json(read_file(run_scenario));
            s.check_invariants();
            RunRecord record;
            try {
                record = run(s, run_model, run_params, run_seed);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 2;
            }
            write_output(run_out, run_record_to_json(record));
            if (!run_csv.empty())
                write_output(run_csv, run_record_to_csv(record, 0, s.n_candidates(), true));
            if (!record.terminated) {
                std::cerr << "run hit the epoch cap before termination\n";
                return 2;
            }
        } else if (*sweep_cmd) {
            SweepSpec spec;
            spec.base.generator = sweep_gen.params;
            spec.base.model = sweep_model;
            spec.base.run = sweep_run_params;
            spec.base.n_runs = sweep_runs;
            spec.base.base_seed = sweep_seed;
            spec.base.workers = sweep_workers;
            if (sweep_axis == "mu-worst") spec.axis = SweepAxis::mu_worst;
            else if (sweep_axis == "d-goals") spec.axis = SweepAxis::d_goals;
            else if (sweep_axis == "cycle-lengths") spec.axis = SweepAxis::cycle_lengths;
            else spec.axis = SweepAxis::team_size;
            spec.values = sweep_values;
            SweepResult result = run_sweep(spec);
            write_output(sweep_out, sweep_table_csv(result));
            if (!sweep_curves.empty()) write_output(sweep_curves, progress_curves_csv(result));
        } else if (*bounds_cmd) {
            Scenario s = scenario_from_json(read_file(bounds_scenario));
            s.check_invariants();
            BoundReport report = bounds_for(s, bounds_d, bounds_batch);
            write_output(bounds_out, bounds_to_json(s, report));
            if (!bounds_out.empty() && bounds_out != "-") {
                std::cout << "cell  gap       epoch_bound  hardest\n";
                for (const auto& [l, gap] : report.delta)
                    std::cout << l << "  " << gap << "  " << report.p_l.at(l) << "  "
                              << (report.d_delta_set.count(l) ? "*" : "") << '\n';
                std::cout << "p_max = " << report.p_max << '\n';
            }
        } else if (*validate_cmd) {
            Scenario s = scenario_from_json(read_file(validate_scenario));
            s.check_invariants();
            std::cout << "ok\n";
        } else if (*kmax_cmd) {
            Scenario s = scenario_from_json(read_file(kmax_scenario));
            s.check_invariants();
            SolveOptions options;
            options.time_limit_s = kmax_time_limit;
            KmaxEstimate est = estimate_kmax(s, kmax_d, kmax_trials, kmax_seed, options);
            nlohmann::ordered_json j;
            j["schema"] = "gridclass-kmax-v1";
            j["k_max"] = est.k_max;
            j["trials"] = est.trials;
            j["infeasible_trials"] = est.infeasible_trials;
            std::cout << j.dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

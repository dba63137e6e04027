#include <benchmark/benchmark.h>

#include "gridclass/assignment.hpp"
#include "gridclass/rng.hpp"
#include "gridclass/simulation.hpp"
#include "gridclass/solver.hpp"

namespace {

using namespace gridclass;

Scenario small_scenario() {
    GeneratorParams params;
    params.rows = 6;
    params.cols = 6;
    params.n_obstacles = 4;
    params.n_interesting = 6;
    params.team.n_sensors = 2;
    params.team.n_stations = 1;
    params.team.t_d = 6;
    params.team.t_c = 3;
    params.team.k_max_cycles = 3;
    return generate_scenario(params, 7);
}

PlanningProblem problem_for(const Scenario& s, std::vector<CellIndex>& goals) {
    goals = s.candidates();
    goals.resize(4);
    return PlanningProblem{&s, s.team, s.initial, goals};
}

void bm_hungarian(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Rng rng(42);
    CostMatrix costs(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) costs.at(i, j) = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(hungarian(costs));
}
BENCHMARK(bm_hungarian)->Arg(8)->Arg(32)->Arg(64);

void bm_build_ip(benchmark::State& state) {
    Scenario s = small_scenario();
    std::vector<CellIndex> goals;
    PlanningProblem problem = problem_for(s, goals);
    for (auto _ : state) benchmark::DoNotOptimize(build_ip(problem));
}
BENCHMARK(bm_build_ip);

void bm_solve_small(benchmark::State& state) {
    Scenario s = small_scenario();
    std::vector<CellIndex> goals;
    PlanningProblem problem = problem_for(s, goals);
    IPInstance inst = build_ip(problem);
    for (auto _ : state) benchmark::DoNotOptimize(solve(inst));
}
BENCHMARK(bm_solve_small);

}  // namespace

BENCHMARK_MAIN();

#include <set>

#include <stdexcept>

#include "doctest.h"
#include "gridclass/environment.hpp"
#include "test_util.h"

using namespace gridclass;

TEST_CASE("grid index round trip") {
    GridSpec g{4, 6};
    CHECK(g.cell_count() == 24);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) {
            CellIndex l = g.index(r, c);
            CHECK(g.row(l) == r);
            CHECK(g.col(l) == c);
            CHECK(g.in_range(l));
        }
    CHECK_FALSE(g.in_range(-1));
    CHECK_FALSE(g.in_range(24));
}

TEST_CASE("king neighborhoods") {
    Scenario s = testutil::square(3, 1, 4, 2);
    CHECK(neighbors(s, s.grid.index(1, 1)).size() == 8);
    CHECK(neighbors(s, 0).size() == 3);
    CHECK(neighbors(s, s.grid.index(0, 1)).size() == 5);

    s.obstacles.insert(s.grid.index(1, 1));
    s.mu.erase(s.grid.index(1, 1));
    s.station_admissible.erase(s.grid.index(1, 1));
    auto n = neighbors(s, 0);
    CHECK(n == std::vector<CellIndex>{1, 3});
    CHECK_THROWS_AS(neighbors(s, s.grid.index(1, 1)), std::domain_error);
    CHECK_THROWS_AS(neighbors(s, 99), std::domain_error);
}

TEST_CASE("station neighborhoods stay in the admissible region") {
    Scenario s = testutil::square(3, 1, 4, 2);
    s.station_admissible_all = false;
    s.station_admissible = {0, 1, 2};
    CHECK(station_neighbors(s, 1) == std::vector<CellIndex>{0, 2});
    CHECK_THROWS_AS(station_neighbors(s, 4), std::domain_error);
}

TEST_CASE("true interesting set uses the requested threshold") {
    Scenario s = testutil::line3();  // mu = 0.9, 0.8, 0.1
    CHECK(true_interesting_set(s, 0.55) == std::set<CellIndex>{0, 1});
    CHECK(true_interesting_set(s, 0.85) == std::set<CellIndex>{0});
    CHECK(true_interesting_set(s, 0.05) == std::set<CellIndex>{0, 1, 2});
}

TEST_CASE("invariant checker rejects malformed scenarios") {
    Scenario good = testutil::line3();
    CHECK_NOTHROW(good.check_invariants());

    Scenario s = good;
    s.mu[2] = 1.5;
    CHECK_THROWS_AS(s.check_invariants(), std::invalid_argument);

    s = good;
    s.initial.station_cells = {1};  // not admissible
    CHECK_THROWS_AS(s.check_invariants(), std::invalid_argument);

    s = good;
    s.initial.sensor_cells = {2};  // not docked
    CHECK_THROWS_AS(s.check_invariants(), std::invalid_argument);

    s = good;
    s.team.t_c = s.team.t_d;
    CHECK_THROWS_AS(s.check_invariants(), std::invalid_argument);
}

TEST_CASE("generator is deterministic and respects its parameters") {
    GeneratorParams params;
    params.rows = 6;
    params.cols = 6;
    params.n_obstacles = 5;
    params.n_interesting = 7;
    params.team.n_sensors = 2;
    params.team.t_d = 6;
    params.team.t_c = 3;

    Scenario a = generate_scenario(params, 11);
    Scenario b = generate_scenario(params, 11);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
    CHECK(scenario_to_json(a) != scenario_to_json(generate_scenario(params, 12)));

    for (uint64_t seed = 0; seed < 20; ++seed) {
        Scenario s = generate_scenario(params, seed);
        CHECK_NOTHROW(s.check_invariants());
        CHECK(s.obstacles.size() == 5);
        CHECK(s.n_candidates() == 31);
        // Interesting cells sit above theta + epsilon, the rest below
        // theta - epsilon: the band is empty by construction at mu_worst 0.8.
        CHECK(true_interesting_set(s, s.theta + s.epsilon).size() == 7);
        CHECK(true_interesting_set(s, s.theta - s.epsilon).size() == 7);
        for (const auto& [l, m] : s.mu)
            CHECK((m >= params.mu_worst || m <= 1.0 - params.mu_worst));
    }
}

TEST_CASE("generator can confine stations to a region and drop it from the candidates") {
    GeneratorParams params;
    params.rows = 4;
    params.cols = 4;
    params.n_obstacles = 0;
    params.n_interesting = 3;
    params.station_region = {0, 1, 2, 3};
    params.exclude_station_region_from_candidates = true;
    params.team.t_d = 6;
    params.team.t_c = 3;

    Scenario s = generate_scenario(params, 5);
    CHECK(s.station_admissible == std::set<CellIndex>{0, 1, 2, 3});
    CHECK_FALSE(s.station_admissible_all);
    CHECK(s.n_candidates() == 12);
    for (CellIndex l : s.candidates()) CHECK_FALSE(s.is_station_admissible(l));
    CHECK(s.initial.station_cells == std::vector<CellIndex>{0});
}

TEST_CASE("generator fails loudly on impossible parameters") {
    GeneratorParams params;
    params.rows = 2;
    params.cols = 2;
    params.n_obstacles = 3;
    params.n_interesting = 4;  // only one candidate cell remains
    params.max_attempts = 10;
    CHECK_THROWS_AS(generate_scenario(params, 1), std::runtime_error);
}

TEST_CASE("scenario JSON round trip is value identical") {
    GeneratorParams params;
    params.rows = 5;
    params.cols = 5;
    params.n_obstacles = 3;
    params.n_interesting = 4;
    params.team.charger_cap = 4;
    params.team.t_d = 6;
    params.team.t_c = 3;
    Scenario s = generate_scenario(params, 3);
    std::string text = scenario_to_json(s);
    Scenario back = scenario_from_json(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.mu == s.mu);
    CHECK(back.obstacles == s.obstacles);
    CHECK(back.team.charger_cap == s.team.charger_cap);

    // Explicit-region scenarios round trip the region list too.
    Scenario line = testutil::line3();
    CHECK(scenario_to_json(scenario_from_json(scenario_to_json(line))) ==
          scenario_to_json(line));
}

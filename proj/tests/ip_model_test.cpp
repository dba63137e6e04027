#include <sstream>

#include <stdexcept>

#include "doctest.h"
#include "gridclass/ip_model.hpp"
#include "test_util.h"

using namespace gridclass;

namespace {

// Hand-solved plan for the 1x3 line with goal cell 1: one cycle, the sensor
// hops out and back, the station stays home.
std::vector<uint8_t> line3_solution(const IPInstance& inst) {
    std::vector<uint8_t> x(inst.num_vars, 0);
    x[inst.lambda_id(0)] = 1;
    x[inst.sensor_id(0, 0, 0, 0)] = 1;
    x[inst.sensor_id(0, 1, 0, 1)] = 1;
    x[inst.sensor_id(0, 2, 0, 0)] = 1;
    x[inst.station_id(0, 0, 0, 0)] = 1;
    x[inst.station_id(0, 1, 0, 0)] = 1;
    return x;
}

}  // namespace

TEST_CASE("variable layout and nominal count") {
    Scenario s = testutil::line3();
    PlanningProblem problem{&s, s.team, s.initial, {1}};
    IPInstance inst = build_ip(problem);

    // K + Nd*Td*K*|cells| + Nc*Tc*K*|region| and the unpruned count
    // K*(1 + cells*(Nd*Td + Nc*Tc)).
    CHECK(inst.num_vars == 2 + 1 * 3 * 2 * 3 + 1 * 2 * 2 * 1);
    CHECK(inst.nominal_num_vars == 2 * (1 + 3 * (1 * 3 + 1 * 2)));

    // Ids are dense, distinct, and tagged consistently.
    std::vector<char> seen(inst.num_vars, 0);
    for (int k = 0; k < 2; ++k) seen[inst.lambda_id(k)] = 1;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 2; ++k)
            for (CellIndex l : inst.sensor_cells) {
                int id = inst.sensor_id(0, j, k, l);
                REQUIRE(id >= 0);
                CHECK(!seen[id]);
                seen[id] = 1;
                CHECK(inst.tags[id].kind == VarTag::Kind::sensor);
                CHECK(inst.tags[id].time == j);
                CHECK(inst.tags[id].cycle == k);
                CHECK(inst.tags[id].cell == l);
            }
    for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 2; ++k) {
            int id = inst.station_id(0, b, k, 0);
            REQUIRE(id >= 0);
            CHECK(!seen[id]);
            seen[id] = 1;
        }
    // Variables for cells outside the admissible region are omitted.
    CHECK(inst.station_id(0, 0, 0, 1) == -1);
    CHECK(inst.sensor_id(0, 0, 0, 99) == -1);
}

TEST_CASE("hand-built solution satisfies every row") {
    Scenario s = testutil::line3();
    PlanningProblem problem{&s, s.team, s.initial, {1}};
    IPInstance inst = build_ip(problem);
    std::vector<uint8_t> x = line3_solution(inst);

    for (const ConstraintRow& row : inst.rows) {
        double lhs = 0.0;
        for (const auto& [id, coeff] : row.terms) lhs += coeff * x[id];
        switch (row.rel) {
            case '<': CHECK(lhs <= row.rhs + 1e-9); break;
            case '=': CHECK(lhs == doctest::Approx(row.rhs)); break;
            case '>': CHECK(lhs >= row.rhs - 1e-9); break;
        }
    }
}

TEST_CASE("plan extraction inverts the assignment") {
    Scenario s = testutil::line3();
    PlanningProblem problem{&s, s.team, s.initial, {1}};
    IPInstance inst = build_ip(problem);
    TeamPlan plan = extract_plan(inst, line3_solution(inst));

    CHECK(plan.cycles_used == 1);
    REQUIRE(plan.sensor_paths.size() == 1);
    CHECK(plan.sensor_paths[0][0] == std::vector<CellIndex>{0, 1, 0});
    CHECK(plan.station_paths[0][0] == std::vector<CellIndex>{0, 0});
    CHECK(validate_plan(plan, problem).empty());

    // Broken occupancy structure is a hard error.
    std::vector<uint8_t> bad = line3_solution(inst);
    bad[inst.sensor_id(0, 1, 0, 1)] = 0;
    CHECK_THROWS_AS(extract_plan(inst, bad), std::runtime_error);
}

TEST_CASE("validator flags injected faults") {
    Scenario s = testutil::line3();
    PlanningProblem problem{&s, s.team, s.initial, {1}};
    IPInstance inst = build_ip(problem);
    TeamPlan good = extract_plan(inst, line3_solution(inst));

    TeamPlan plan = good;
    plan.sensor_paths[0][0] = {0, 2, 0};  // 0 -> 2 is not a king move on a line
    CHECK(!validate_plan(plan, problem).empty());

    plan = good;
    plan.sensor_paths[0][0] = {0, 1, 1};  // ends undocked
    CHECK(!validate_plan(plan, problem).empty());

    plan = good;
    plan.sensor_paths[0][0] = {1, 1, 0};  // wrong initial cell
    CHECK(!validate_plan(plan, problem).empty());

    plan = good;
    plan.station_paths[0][0] = {0, 1};  // station leaves the admissible region
    CHECK(!validate_plan(plan, problem).empty());

    PlanningProblem uncovered = problem;
    uncovered.goals = {2};
    CHECK(!validate_plan(good, uncovered).empty());
}

TEST_CASE("validator enforces interior collision rules and charger capacity") {
    Scenario s = testutil::square(3, 2, 4, 1);
    PlanningProblem problem{&s, s.team, s.initial, {4}};

    TeamPlan plan;
    plan.cycles_used = 1;
    plan.station_paths = {{{0, 0}}};
    plan.sensor_paths = {{{0, 4, 4, 0}}, {{0, 4, 1, 0}}};  // both on 4 at step 1
    CHECK(!validate_plan(plan, problem).empty());

    plan.sensor_paths = {{{0, 4, 4, 0}}, {{0, 1, 1, 0}}};
    CHECK(validate_plan(plan, problem).empty());

    // Same plan fails once a charger capacity of one is imposed.
    Scenario capped = s;
    capped.team.charger_cap = 1;
    PlanningProblem capped_problem{&capped, capped.team, capped.initial, {4}};
    CHECK(!validate_plan(plan, capped_problem).empty());
}

TEST_CASE("instance text format round trips") {
    Scenario s = testutil::line3();
    PlanningProblem problem{&s, s.team, s.initial, {1, 2}};
    IPInstance inst = build_ip(problem);

    std::stringstream buffer;
    write_instance(inst, buffer);
    IPInstance back = read_instance(buffer);

    CHECK(back.num_vars == inst.num_vars);
    CHECK(back.nominal_num_vars == inst.nominal_num_vars);
    CHECK(back.objective == inst.objective);
    REQUIRE(back.rows.size() == inst.rows.size());
    for (size_t r = 0; r < inst.rows.size(); ++r) {
        CHECK(back.rows[r].rel == inst.rows[r].rel);
        CHECK(back.rows[r].rhs == inst.rows[r].rhs);
        CHECK(back.rows[r].terms == inst.rows[r].terms);
    }
}

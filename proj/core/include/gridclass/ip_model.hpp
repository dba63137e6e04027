#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridclass/environment.hpp"

namespace gridclass {

// One epoch's planning input: where the team is, and which cells it must
// visit this epoch.
struct PlanningProblem {
    const Scenario* scenario = nullptr;
    TeamConfig team;
    TeamState start;
    std::vector<CellIndex> goals;
};

struct VarTag {
    enum class Kind { lambda, sensor, station };
    Kind kind;
    int agent = 0;  // sensor i or station a
    int time = 0;   // j or b
    int cycle = 0;  // k
    CellIndex cell = -1;
};

struct ConstraintRow {
    std::vector<std::pair<int, double>> terms;
    char rel;  // '<' (<=), '=', '>' (>=)
    double rhs;
};

// The binary program in canonical sparse form plus the structured view the
// built-in solver and the extractor need. Variables for forbidden
// (cell, agent-class) pairs are omitted; nominal_num_vars reconciles counts
// against the unpruned model.
struct IPInstance {
    int num_vars = 0;
    int64_t nominal_num_vars = 0;
    std::vector<std::pair<int, double>> objective;
    std::vector<ConstraintRow> rows;
    std::vector<VarTag> tags;

    // Structured view (absent for instances read back from text).
    std::optional<PlanningProblem> problem;
    std::vector<CellIndex> sensor_cells;   // non-obstacle cells, ascending
    std::vector<CellIndex> station_cells;  // station-admissible cells, ascending

    int lambda_id(int k) const;
    int sensor_id(int i, int j, int k, CellIndex l) const;   // -1 if omitted
    int station_id(int a, int b, int k, CellIndex l) const;  // -1 if omitted

  private:
    friend IPInstance build_ip(const PlanningProblem&);
    std::map<CellIndex, int> sensor_pos_, station_pos_;
};

// Per-agent, per-active-cycle cell paths. Positions at j = 0..T_d-1
// (sensors) and b = 0..T_c-1 (stations).
struct TeamPlan {
    int cycles_used = 0;
    std::vector<std::vector<std::vector<CellIndex>>> sensor_paths;   // [i][k][j]
    std::vector<std::vector<std::vector<CellIndex>>> station_paths;  // [a][k][b]
};

IPInstance build_ip(const PlanningProblem& problem);

// Throws std::runtime_error when the assignment violates the exactly-one
// occupancy structure (a solver bug, not an input condition).
TeamPlan extract_plan(const IPInstance& instance, const std::vector<uint8_t>& assignment);

// Independent plan checker working directly on paths, without the IP
// encoding. Empty result <=> feasible.
std::vector<std::string> validate_plan(const TeamPlan& plan, const PlanningProblem& problem);

// Sparse text format for cross-checking against external solvers; see README.
void write_instance(const IPInstance& instance, std::ostream& out);
IPInstance read_instance(std::istream& in);

}  // namespace gridclass

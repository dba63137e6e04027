#include "gridclass/ip_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gridclass {

int IPInstance::lambda_id(int k) const { return k; }

int IPInstance::sensor_id(int i, int j, int k, CellIndex l) const {
    auto it = sensor_pos_.find(l);
    if (it == sensor_pos_.end()) return -1;
    const TeamConfig& team = problem->team;
    int n = static_cast<int>(sensor_cells.size());
    return team.k_max_cycles +
           (((i * team.t_d + j) * team.k_max_cycles + k) * n + it->second);
}

int IPInstance::station_id(int a, int b, int k, CellIndex l) const {
    auto it = station_pos_.find(l);
    if (it == station_pos_.end()) return -1;
    const TeamConfig& team = problem->team;
    int nf = static_cast<int>(sensor_cells.size());
    int nr = static_cast<int>(station_cells.size());
    return team.k_max_cycles + team.n_sensors * team.t_d * team.k_max_cycles * nf +
           (((a * team.t_c + b) * team.k_max_cycles + k) * nr + it->second);
}

IPInstance build_ip(const PlanningProblem& problem) {
    const Scenario& s = *problem.scenario;
    const TeamConfig& team = problem.team;
    const int K = team.k_max_cycles;
    if (K < 1) throw std::domain_error("cycle cap must be >= 1");
    const int Td = team.t_d, Tc = team.t_c;
    const int Nd = team.n_sensors, Nc = team.n_stations;

    IPInstance inst;
    inst.problem = problem;
    for (int l = 0; l < s.grid.cell_count(); ++l)
        if (!s.is_obstacle(l)) inst.sensor_cells.push_back(l);
    inst.station_cells.assign(s.station_admissible.begin(), s.station_admissible.end());
    for (int p = 0; p < static_cast<int>(inst.sensor_cells.size()); ++p)
        inst.sensor_pos_[inst.sensor_cells[p]] = p;
    for (int p = 0; p < static_cast<int>(inst.station_cells.size()); ++p)
        inst.station_pos_[inst.station_cells[p]] = p;

    const int nf = static_cast<int>(inst.sensor_cells.size());
    const int nr = static_cast<int>(inst.station_cells.size());
    inst.num_vars = K + Nd * Td * K * nf + Nc * Tc * K * nr;
    inst.nominal_num_vars =
        int64_t(K) * (1 + int64_t(s.grid.cell_count()) * (int64_t(Nd) * Td + int64_t(Nc) * Tc));

    // Tags, in variable-id order: lambda block, sensor block (i,j,k,l),
    // station block (a,b,k,l).
    inst.tags.resize(inst.num_vars);
    for (int k = 0; k < K; ++k)
        inst.tags[k] = VarTag{VarTag::Kind::lambda, 0, 0, k, -1};
    for (int i = 0; i < Nd; ++i)
        for (int j = 0; j < Td; ++j)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.sensor_cells)
                    inst.tags[inst.sensor_id(i, j, k, l)] =
                        VarTag{VarTag::Kind::sensor, i, j, k, l};
    for (int a = 0; a < Nc; ++a)
        for (int b = 0; b < Tc; ++b)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.station_cells)
                    inst.tags[inst.station_id(a, b, k, l)] =
                        VarTag{VarTag::Kind::station, a, b, k, l};

    // Objective: minimize the number of active sensing cycles.
    for (int k = 0; k < K; ++k) inst.objective.emplace_back(inst.lambda_id(k), 1.0);

    auto& rows = inst.rows;
    auto le = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        rows.push_back({std::move(terms), '<', rhs});
    };
    auto eq = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        rows.push_back({std::move(terms), '=', rhs});
    };
    auto ge = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        rows.push_back({std::move(terms), '>', rhs});
    };

    // Cycle 0 is always occupied by the team.
    eq({{inst.lambda_id(0), 1.0}}, 1.0);

    // Initial placement at cycle 0.
    for (int i = 0; i < Nd; ++i)
        eq({{inst.sensor_id(i, 0, 0, problem.start.sensor_cells[i]), 1.0}}, 1.0);
    for (int a = 0; a < Nc; ++a)
        eq({{inst.station_id(a, 0, 0, problem.start.station_cells[a]), 1.0}}, 1.0);

    // Movement: occupancy at (j, l) requires occupancy at (j-1, m) with m a
    // neighbor of l or l itself.
    for (int i = 0; i < Nd; ++i)
        for (int j = 1; j < Td; ++j)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.sensor_cells) {
                    std::vector<std::pair<int, double>> terms{{inst.sensor_id(i, j, k, l), 1.0}};
                    terms.emplace_back(inst.sensor_id(i, j - 1, k, l), -1.0);
                    for (CellIndex m : neighbors(s, l))
                        terms.emplace_back(inst.sensor_id(i, j - 1, k, m), -1.0);
                    le(std::move(terms), 0.0);
                }
    for (int a = 0; a < Nc; ++a)
        for (int b = 1; b < Tc; ++b)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.station_cells) {
                    std::vector<std::pair<int, double>> terms{{inst.station_id(a, b, k, l), 1.0}};
                    terms.emplace_back(inst.station_id(a, b - 1, k, l), -1.0);
                    for (CellIndex m : station_neighbors(s, l))
                        terms.emplace_back(inst.station_id(a, b - 1, k, m), -1.0);
                    le(std::move(terms), 0.0);
                }

    // Station vertex collisions at every step; sensor vertex collisions at
    // the interior steps only (rendezvous exemption at cycle ends).
    if (Nc > 1)
        for (int b = 0; b < Tc; ++b)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.station_cells) {
                    std::vector<std::pair<int, double>> terms;
                    for (int a = 0; a < Nc; ++a)
                        terms.emplace_back(inst.station_id(a, b, k, l), 1.0);
                    le(std::move(terms), 1.0);
                }
    if (Nd > 1)
        for (int j = 1; j <= Td - 2; ++j)
            for (int k = 0; k < K; ++k)
                for (CellIndex l : inst.sensor_cells) {
                    std::vector<std::pair<int, double>> terms;
                    for (int i = 0; i < Nd; ++i)
                        terms.emplace_back(inst.sensor_id(i, j, k, l), 1.0);
                    le(std::move(terms), 1.0);
                }

    // Active cycles place each agent on exactly one cell per step.
    for (int i = 0; i < Nd; ++i)
        for (int j = 0; j < Td; ++j)
            for (int k = 0; k < K; ++k) {
                std::vector<std::pair<int, double>> terms;
                for (CellIndex l : inst.sensor_cells)
                    terms.emplace_back(inst.sensor_id(i, j, k, l), 1.0);
                terms.emplace_back(inst.lambda_id(k), -1.0);
                eq(std::move(terms), 0.0);
            }
    for (int a = 0; a < Nc; ++a)
        for (int b = 0; b < Tc; ++b)
            for (int k = 0; k < K; ++k) {
                std::vector<std::pair<int, double>> terms;
                for (CellIndex l : inst.station_cells)
                    terms.emplace_back(inst.station_id(a, b, k, l), 1.0);
                terms.emplace_back(inst.lambda_id(k), -1.0);
                eq(std::move(terms), 0.0);
            }

    // Cycle ordering.
    for (int k = 0; k + 1 < K; ++k)
        ge({{inst.lambda_id(k), 1.0}, {inst.lambda_id(k + 1), -1.0}}, 0.0);

    // Goal coverage.
    for (CellIndex g : problem.goals) {
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i < Nd; ++i)
            for (int j = 0; j < Td; ++j)
                for (int k = 0; k < K; ++k) terms.emplace_back(inst.sensor_id(i, j, k, g), 1.0);
        ge(std::move(terms), 1.0);
    }

    // Cross-cycle continuity, linearized absolute values. Trivially satisfied
    // when cycle k+1 is inactive.
    for (int i = 0; i < Nd; ++i)
        for (int k = 0; k + 1 < K; ++k)
            for (CellIndex l : inst.sensor_cells) {
                int first = inst.sensor_id(i, 0, k + 1, l);
                int last = inst.sensor_id(i, Td - 1, k, l);
                le({{first, 1.0}, {last, -1.0}, {inst.lambda_id(k + 1), 2.0}}, 2.0);
                le({{last, 1.0}, {first, -1.0}, {inst.lambda_id(k + 1), 2.0}}, 2.0);
            }
    for (int a = 0; a < Nc; ++a)
        for (int k = 0; k + 1 < K; ++k)
            for (CellIndex l : inst.station_cells) {
                int first = inst.station_id(a, 0, k + 1, l);
                int last = inst.station_id(a, Tc - 1, k, l);
                le({{first, 1.0}, {last, -1.0}, {inst.lambda_id(k + 1), 2.0}}, 2.0);
                le({{last, 1.0}, {first, -1.0}, {inst.lambda_id(k + 1), 2.0}}, 2.0);
            }

    // Rendezvous: sensors start and end each cycle on a station cell.
    for (int i = 0; i < Nd; ++i)
        for (int k = 0; k < K; ++k)
            for (CellIndex l : inst.sensor_cells) {
                std::vector<std::pair<int, double>> first{{inst.sensor_id(i, 0, k, l), 1.0}};
                std::vector<std::pair<int, double>> last{{inst.sensor_id(i, Td - 1, k, l), 1.0}};
                for (int a = 0; a < Nc; ++a) {
                    int y0 = inst.station_id(a, 0, k, l);
                    int yT = inst.station_id(a, Tc - 1, k, l);
                    if (y0 >= 0) first.emplace_back(y0, -1.0);
                    if (yT >= 0) last.emplace_back(yT, -1.0);
                }
                le(std::move(first), 0.0);
                le(std::move(last), 0.0);
            }

    // Optional charger capacity at the cycle ends.
    if (team.charger_cap) {
        double cap = static_cast<double>(*team.charger_cap);
        for (int k = 0; k < K; ++k)
            for (CellIndex l : inst.station_cells) {
                std::vector<std::pair<int, double>> first, last;
                for (int i = 0; i < Nd; ++i) {
                    first.emplace_back(inst.sensor_id(i, 0, k, l), 1.0);
                    last.emplace_back(inst.sensor_id(i, Td - 1, k, l), 1.0);
                }
                le(std::move(first), cap);
                le(std::move(last), cap);
            }
    }

    return inst;
}

TeamPlan extract_plan(const IPInstance& inst, const std::vector<uint8_t>& assignment) {
    if (!inst.problem) throw std::runtime_error("instance has no structured view");
    if (static_cast<int>(assignment.size()) != inst.num_vars)
        throw std::runtime_error("assignment size mismatch");
    const TeamConfig& team = inst.problem->team;
    const int K = team.k_max_cycles;

    if (!assignment[inst.lambda_id(0)])
        throw std::runtime_error("extraction error: cycle 0 must be active");
    int cycles = 0;
    for (int k = 0; k < K; ++k) {
        if (assignment[inst.lambda_id(k)]) {
            if (k != cycles) throw std::runtime_error("extraction error: non-contiguous cycles");
            ++cycles;
        }
    }

    TeamPlan plan;
    plan.cycles_used = cycles;
    plan.sensor_paths.resize(team.n_sensors);
    plan.station_paths.resize(team.n_stations);
    auto pick = [&](auto&& id_of, int steps, auto& out, const std::vector<CellIndex>& cells) {
        for (int k = 0; k < cycles; ++k) {
            std::vector<CellIndex> path(steps, -1);
            for (int t = 0; t < steps; ++t) {
                for (CellIndex l : cells) {
                    if (assignment[id_of(t, k, l)]) {
                        if (path[t] != -1)
                            throw std::runtime_error("extraction error: multiple cells occupied");
                        path[t] = l;
                    }
                }
                if (path[t] == -1)
                    throw std::runtime_error("extraction error: no cell occupied in active cycle");
            }
            out.push_back(std::move(path));
        }
    };
    for (int i = 0; i < team.n_sensors; ++i)
        pick([&](int j, int k, CellIndex l) { return inst.sensor_id(i, j, k, l); }, team.t_d,
             plan.sensor_paths[i], inst.sensor_cells);
    for (int a = 0; a < team.n_stations; ++a)
        pick([&](int b, int k, CellIndex l) { return inst.station_id(a, b, k, l); }, team.t_c,
             plan.station_paths[a], inst.station_cells);
    return plan;
}

namespace {

bool king_adjacent_or_equal(const GridSpec& grid, CellIndex a, CellIndex b) {
    int dr = std::abs(grid.row(a) - grid.row(b));
    int dc = std::abs(grid.col(a) - grid.col(b));
    return dr <= 1 && dc <= 1;
}

}  // namespace

std::vector<std::string> validate_plan(const TeamPlan& plan, const PlanningProblem& problem) {
    const Scenario& s = *problem.scenario;
    const TeamConfig& team = problem.team;
    std::vector<std::string> out;
    auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

    const int cycles = plan.cycles_used;
    if (cycles < 1) fail("plan has no active cycle");
    if (cycles > team.k_max_cycles) fail("plan exceeds the cycle cap");
    if (static_cast<int>(plan.sensor_paths.size()) != team.n_sensors)
        fail("sensor path count mismatch");
    if (static_cast<int>(plan.station_paths.size()) != team.n_stations)
        fail("station path count mismatch");
    if (!out.empty()) return out;

    auto check_paths = [&](const auto& paths, int steps, const char* who, bool station) {
        for (size_t agent = 0; agent < paths.size(); ++agent) {
            if (static_cast<int>(paths[agent].size()) != cycles) {
                fail(std::string(who) + " " + std::to_string(agent) + ": cycle count mismatch");
                continue;
            }
            for (int k = 0; k < cycles; ++k) {
                const auto& path = paths[agent][k];
                if (static_cast<int>(path.size()) != steps) {
                    fail(std::string(who) + " " + std::to_string(agent) + " cycle " +
                         std::to_string(k) + ": path length != " + std::to_string(steps));
                    continue;
                }
                for (int t = 0; t < steps; ++t) {
                    CellIndex l = path[t];
                    if (!s.grid.in_range(l) || s.is_obstacle(l)) {
                        fail(std::string(who) + " " + std::to_string(agent) + " cycle " +
                             std::to_string(k) + " step " + std::to_string(t) +
                             ": cell blocked or out of range");
                        continue;
                    }
                    if (station && !s.is_station_admissible(l))
                        fail(std::string(who) + " " + std::to_string(agent) + " cycle " +
                             std::to_string(k) + " step " + std::to_string(t) +
                             ": outside the station-admissible region");
                    if (t > 0 && !king_adjacent_or_equal(s.grid, path[t - 1], l))
                        fail(std::string(who) + " " + std::to_string(agent) + " cycle " +
                             std::to_string(k) + " step " + std::to_string(t) +
                             ": illegal move");
                }
                if (k > 0 && !paths[agent][k - 1].empty() && !path.empty() &&
                    paths[agent][k - 1].back() != path.front())
                    fail(std::string(who) + " " + std::to_string(agent) + " cycle " +
                         std::to_string(k) + ": cross-cycle continuity broken");
            }
        }
    };
    check_paths(plan.sensor_paths, team.t_d, "sensor", false);
    check_paths(plan.station_paths, team.t_c, "station", true);
    if (!out.empty()) return out;

    // Initial placement.
    for (int i = 0; i < team.n_sensors; ++i)
        if (plan.sensor_paths[i][0][0] != problem.start.sensor_cells[i])
            fail("sensor " + std::to_string(i) + ": wrong initial cell");
    for (int a = 0; a < team.n_stations; ++a)
        if (plan.station_paths[a][0][0] != problem.start.station_cells[a])
            fail("station " + std::to_string(a) + ": wrong initial cell");

    // Goal coverage.
    std::set<CellIndex> visited;
    for (const auto& per_cycle : plan.sensor_paths)
        for (const auto& path : per_cycle) visited.insert(path.begin(), path.end());
    for (CellIndex g : problem.goals)
        if (!visited.count(g)) fail("goal cell " + std::to_string(g) + " never visited");

    for (int k = 0; k < cycles; ++k) {
        // Sensors dock at cycle start and end.
        std::set<CellIndex> start_stations, end_stations;
        for (int a = 0; a < team.n_stations; ++a) {
            start_stations.insert(plan.station_paths[a][k].front());
            end_stations.insert(plan.station_paths[a][k].back());
        }
        for (int i = 0; i < team.n_sensors; ++i) {
            if (!start_stations.count(plan.sensor_paths[i][k].front()))
                fail("sensor " + std::to_string(i) + " cycle " + std::to_string(k) +
                     ": does not start on a station");
            if (!end_stations.count(plan.sensor_paths[i][k].back()))
                fail("sensor " + std::to_string(i) + " cycle " + std::to_string(k) +
                     ": does not end on a station");
        }

        // Station vertex collisions at every step.
        for (int b = 0; b < team.t_c; ++b) {
            std::set<CellIndex> cells;
            for (int a = 0; a < team.n_stations; ++a)
                if (!cells.insert(plan.station_paths[a][k][b]).second)
                    fail("station collision at cycle " + std::to_string(k) + " step " +
                         std::to_string(b));
        }
        // Sensor vertex collisions at interior steps.
        for (int j = 1; j <= team.t_d - 2; ++j) {
            std::set<CellIndex> cells;
            for (int i = 0; i < team.n_sensors; ++i)
                if (!cells.insert(plan.sensor_paths[i][k][j]).second)
                    fail("sensor collision at cycle " + std::to_string(k) + " step " +
                         std::to_string(j));
        }
        // Charger capacity at the cycle ends.
        if (team.charger_cap) {
            for (int endpoint = 0; endpoint < 2; ++endpoint) {
                std::map<CellIndex, int> count;
                for (int i = 0; i < team.n_sensors; ++i) {
                    const auto& path = plan.sensor_paths[i][k];
                    count[endpoint == 0 ? path.front() : path.back()] += 1;
                }
                for (const auto& [cell, n] : count)
                    if (n > *team.charger_cap)
                        fail("charger capacity exceeded on cell " + std::to_string(cell) +
                             " at cycle " + std::to_string(k));
            }
        }
    }
    return out;
}

void write_instance(const IPInstance& inst, std::ostream& out) {
    out << inst.num_vars << ' ' << inst.rows.size() << ' ' << inst.nominal_num_vars << '\n';
    out << inst.objective.size();
    for (const auto& [v, c] : inst.objective) out << ' ' << v << ' ' << c;
    out << '\n';
    for (const auto& row : inst.rows) {
        out << row.rel << ' ' << row.rhs << ' ' << row.terms.size();
        for (const auto& [v, c] : row.terms) out << ' ' << v << ' ' << c;
        out << '\n';
    }
}

IPInstance read_instance(std::istream& in) {
    IPInstance inst;
    size_t n_rows = 0;
    if (!(in >> inst.num_vars >> n_rows >> inst.nominal_num_vars))
        throw std::runtime_error("bad instance header");
    size_t n_obj = 0;
    in >> n_obj;
    for (size_t t = 0; t < n_obj; ++t) {
        int v;
        double c;
        in >> v >> c;
        inst.objective.emplace_back(v, c);
    }
    for (size_t r = 0; r < n_rows; ++r) {
        ConstraintRow row;
        size_t nnz = 0;
        if (!(in >> row.rel >> row.rhs >> nnz)) throw std::runtime_error("bad constraint row");
        for (size_t t = 0; t < nnz; ++t) {
            int v;
            double c;
            in >> v >> c;
            row.terms.emplace_back(v, c);
        }
        inst.rows.push_back(std::move(row));
    }
    if (!in) throw std::runtime_error("truncated instance");
    return inst;
}

}  // namespace gridclass

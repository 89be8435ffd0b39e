#include "kbgain/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kbgain {

namespace {

using nlohmann::json;

json matrix_to_json_rows(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix json_to_matrix(const json& rows, const char* name) {
    if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
        throw IoError(std::string("expected a nested array for ") + name);
    }
    const auto nr = rows.size();
    const auto nc = rows.front().size();
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        if (rows[i].size() != nc) {
            throw IoError(std::string("ragged rows in ") + name);
        }
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

json parse_json_text(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        throw IoError("malformed JSON document");
    }
    return doc;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

double require_number(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw IoError(std::string("missing numeric field: ") + key);
    }
    return doc[key].get<double>();
}

} // namespace

Problem parse_problem(const std::string& json_text) {
    const json doc = parse_json_text(json_text);
    Problem problem;
    const Matrix a = json_to_matrix(doc.value("A", json::array()), "A");
    const Matrix b = json_to_matrix(doc.value("B", json::array()), "B");
    problem.system = validate_system(a, b);
    problem.horizon.X0 = json_to_matrix(doc.value("X0", json::array()), "X0");
    problem.horizon.t0 = require_number(doc, "t0");
    problem.horizon.t1 = require_number(doc, "t1");
    problem.horizon.alpha = require_number(doc, "alpha");
    problem.horizon.gamma = require_number(doc, "gamma");
    check_horizon(problem.system, problem.horizon);
    return problem;
}

Problem load_problem(const std::string& path) { return parse_problem(read_text_file(path)); }

std::string problem_to_json(const Problem& problem) {
    json doc;
    doc["A"] = matrix_to_json_rows(problem.system.A);
    doc["B"] = matrix_to_json_rows(problem.system.B);
    doc["X0"] = matrix_to_json_rows(problem.horizon.X0);
    doc["t0"] = problem.horizon.t0;
    doc["t1"] = problem.horizon.t1;
    doc["alpha"] = problem.horizon.alpha;
    doc["gamma"] = problem.horizon.gamma;
    return doc.dump(2);
}

GainSchedule load_schedule(const std::string& path) {
    const json doc = parse_json_text(read_text_file(path));
    GainSchedule schedule;
    if (!doc.contains("breakpoints") || !doc["breakpoints"].is_array()) {
        throw IoError("schedule: missing breakpoints array");
    }
    for (const auto& b : doc["breakpoints"]) schedule.breakpoints.push_back(b.get<double>());
    if (!doc.contains("values") || !doc["values"].is_array()) {
        throw IoError("schedule: missing values array");
    }
    for (const auto& v : doc["values"]) schedule.values.push_back(json_to_matrix(v, "values[i]"));
    return schedule;
}

std::string schedule_to_json(const GainSchedule& schedule) {
    json doc;
    doc["breakpoints"] = schedule.breakpoints;
    json values = json::array();
    for (const Matrix& v : schedule.values) values.push_back(matrix_to_json_rows(v));
    doc["values"] = std::move(values);
    return doc.dump(2);
}

std::string scalar_solution_to_json(const ScalarSolution& solution) {
    json doc;
    doc["case"] = std::string(1, solution.case_label.label);
    doc["subcase"] = solution.subcase;
    doc["threshold_low"] = solution.case_label.threshold_low;
    doc["threshold_high"] = solution.case_label.threshold_high;
    doc["switch_times"] = solution.switch_times;
    doc["u_values"] = solution.u_values;
    if (solution.has_dwell) {
        doc["u_star"] = solution.u_star;
        doc["dwell_nonunique"] = true;  // any dwell duration is optimal
    }
    doc["cost"] = {{"mse_integral", solution.cost.mse_integral},
                   {"mi", solution.cost.mi},
                   {"total", solution.cost.cost}};
    return doc.dump(2);
}

std::string stationary_solution_to_json(const StationarySolution& solution) {
    json doc;
    doc["X"] = matrix_to_json_rows(solution.X);
    doc["Y"] = matrix_to_json_rows(solution.Y);
    doc["C"] = matrix_to_json_rows(solution.C);
    doc["objective"] = solution.objective_value;
    doc["are_objective"] = solution.are_objective;
    doc["rank_gap"] = solution.rank_gap;
    doc["rank_exact"] = solution.rank_exact;
    doc["converged"] = solution.converged;
    doc["iterations"] = solution.iterations;
    doc["residuals"] = {{"primal", solution.residuals.primal},
                        {"dual", solution.residuals.dual},
                        {"gap", solution.residuals.gap}};
    if (solution.X.rows() == 1) {
        doc["x_star"] = solution.X(0, 0);
        doc["y_star"] = solution.Y(0, 0);
        doc["u_star"] = solution.C(0, 0) * solution.C(0, 0);
    }
    return doc.dump(2);
}

std::string simulation_report_to_json(const SimulationReport& report) {
    json doc;
    doc["num_paths"] = report.num_paths;
    doc["dt_sim"] = report.dt_sim;
    doc["seed"] = report.seed;
    doc["mse_estimate"] = report.mse_estimate;
    doc["stderr"] = report.stderr_estimate;
    doc["mse_theory"] = report.mse_theory;
    doc["z_score"] = report.z_score;
    doc["pass"] = std::abs(report.z_score) <= 3.0;
    return doc.dump(2);
}

std::string experiment_summary_to_json(const ExperimentSummary& summary) {
    json doc;
    doc["n"] = summary.n;
    doc["alpha"] = summary.alpha;
    doc["gamma"] = summary.gamma;
    doc["trials"] = summary.trials;
    doc["seed"] = summary.seed;
    doc["failures"] = summary.failures;
    doc["rank_exact_count"] = summary.rank_exact_count;
    doc["rank_gap_max"] = summary.rank_gap_max;
    doc["rel_mismatch_max"] = summary.rel_mismatch_max;
    json gaps = json::array();
    for (const ExperimentTrial& t : summary.per_trial) {
        gaps.push_back({{"ok", t.ok},
                        {"rank_gap", t.rank_gap},
                        {"sdp_objective", t.sdp_objective},
                        {"are_objective", t.are_objective},
                        {"ctc_min", t.ctc_min},
                        {"ctc_max", t.ctc_max}});
    }
    doc["per_trial"] = std::move(gaps);
    return doc.dump(2);
}

std::string certificate_to_json(const PmpCertificate& certificate) {
    json doc;
    doc["max_gap"] = certificate.max_gap;
    doc["num_nodes"] = certificate.times.size();
    doc["final_costate_norm"] = certificate.P.back().norm();
    return doc.dump(2);
}

std::string error_to_json(const std::string& kind, const std::string& message) {
    json doc;
    doc["error"] = {{"kind", kind}, {"message", message}};
    return doc.dump(2);
}

void scalar_solution_to_csv(const ScalarSolution& solution, int samples, std::ostream& out) {
    out << "t,x,p,u,xp\n";
    out.precision(17);
    const ScalarProblem& pr = solution.problem;
    for (int i = 0; i <= samples; ++i) {
        const double t = pr.t0 + (pr.t1 - pr.t0) * i / samples;
        const double x = solution.x_at(t);
        const double p = solution.p_at(t);
        double u = solution.u_values.back();
        for (std::size_t k = 0; k < solution.arcs.size(); ++k) {
            if (t <= solution.arcs[k].t_end) {
                u = solution.u_values[k];
                break;
            }
        }
        out << t << "," << x << "," << p << "," << u << "," << x * p << "\n";
    }
}

void spectrum_to_csv(const Vector& values, std::ostream& out) {
    out << "index,eigenvalue\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out << (i + 1) << "," << values(i) << "\n";
    }
}

void paths_to_csv(const SimulationReport& report, std::ostream& out) {
    out << "path,integrated_squared_error\n";
    out.precision(17);
    for (std::size_t i = 0; i < report.per_path.size(); ++i) {
        out << i << "," << report.per_path[i] << "\n";
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path);
    }
    out << text;
}

} // namespace kbgain

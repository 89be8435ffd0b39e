#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "kbgain/io.hpp"
#include "kbgain/riccati.hpp"

namespace fs = std::filesystem;
using namespace kbgain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string input_path;
    std::string out_dir;
};

void write_artifact(const CommonOpts& opts, const std::string& name, const std::string& text) {
    if (opts.out_dir.empty()) return;
    fs::create_directories(opts.out_dir);
    write_text_file((fs::path(opts.out_dir) / name).string(), text);
}

template <typename Fn>
void write_csv_artifact(const CommonOpts& opts, const std::string& name, Fn&& fill) {
    std::ostringstream out;
    fill(out);
    write_artifact(opts, name, out.str());
}

Problem require_problem(const CommonOpts& opts) {
    if (opts.input_path.empty()) {
        throw IoError("an --input problem file is required");
    }
    return load_problem(opts.input_path);
}

GainSchedule uniform_gain(const Problem& problem, double scale) {
    return constant_schedule(problem.horizon,
                             scale * Matrix::Identity(problem.system.n, problem.system.n));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Channel-gain control toolkit for Kalman-Bucy filtering"};
    app.require_subcommand(1);

    CommonOpts opts;

    // classify
    auto* classify = app.add_subcommand("classify", "Case label for a scalar problem");
    double cl_a = -0.5, cl_alpha = 1.0, cl_gamma = 1.0;
    classify->add_option("--a", cl_a, "drift (a < 0)")->required();
    classify->add_option("--alpha", cl_alpha, "trade-off weight")->required();
    classify->add_option("--gamma", cl_gamma, "gain bound")->required();
    classify->add_option("--out", opts.out_dir, "output directory");

    // solve-scalar
    auto* solve_sc = app.add_subcommand("solve-scalar", "Finite-horizon optimal scalar gain");
    double sc_a = -0.5, sc_alpha = 1.0, sc_gamma = 1.0, sc_x0 = 0.0, sc_t0 = 0.0, sc_t1 = 1.0;
    solve_sc->add_option("--input", opts.input_path, "problem JSON (1x1 matrices)");
    solve_sc->add_option("--a", sc_a, "drift");
    solve_sc->add_option("--alpha", sc_alpha, "trade-off weight");
    solve_sc->add_option("--gamma", sc_gamma, "gain bound");
    solve_sc->add_option("--x0", sc_x0, "initial variance");
    solve_sc->add_option("--t0", sc_t0, "start time");
    solve_sc->add_option("--t1", sc_t1, "end time");
    solve_sc->add_option("--out", opts.out_dir, "output directory");

    // solve-stationary
    auto* solve_st = app.add_subcommand("solve-stationary", "Infinite-horizon time-invariant gain");
    double st_tol = 1e-9;
    int st_max_iters = 600000;
    solve_st->add_option("--input", opts.input_path, "problem JSON")->required();
    solve_st->add_option("--tol", st_tol, "solver tolerance");
    solve_st->add_option("--max-iters", st_max_iters, "iteration cap");
    solve_st->add_option("--out", opts.out_dir, "output directory");

    // verify-pmp
    auto* verify = app.add_subcommand("verify-pmp", "Hamiltonian-gap certificate for a schedule");
    std::string verify_schedule;
    double verify_dt = 0.0;
    verify->add_option("--input", opts.input_path, "problem JSON")->required();
    verify->add_option("--schedule", verify_schedule, "schedule JSON (default: scalar optimum)");
    verify->add_option("--dt", verify_dt, "integration step");
    verify->add_option("--out", opts.out_dir, "output directory");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo filter validation");
    int sim_paths = 10000;
    double sim_dt = 1e-3, sim_c = 1.0;
    std::uint64_t sim_seed = 1;
    bool sim_emit_paths = false;
    simulate->add_option("--input", opts.input_path, "problem JSON")->required();
    simulate->add_option("--paths", sim_paths, "number of sample paths");
    simulate->add_option("--dt", sim_dt, "simulation step");
    simulate->add_option("--seed", sim_seed, "stream seed");
    simulate->add_option("--c", sim_c, "constant channel gain C = c*I");
    simulate->add_flag("--emit-paths", sim_emit_paths, "write per-path CSV");
    simulate->add_option("--out", opts.out_dir, "output directory");

    // riccati
    auto* riccati = app.add_subcommand("riccati", "Covariance trajectory and cost");
    double ric_dt = 0.0, ric_u = 0.0;
    std::string ric_schedule;
    riccati->add_option("--input", opts.input_path, "problem JSON")->required();
    riccati->add_option("--schedule", ric_schedule, "schedule JSON (U values)");
    riccati->add_option("--u", ric_u, "constant control U = u*I");
    riccati->add_option("--dt", ric_dt, "integration step");
    riccati->add_option("--out", opts.out_dir, "output directory");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Random-system rank-exactness experiment");
    int exp_n = 15, exp_trials = 100;
    double exp_gamma = 100.0;
    std::vector<double> exp_alphas = {0.01};
    std::uint64_t exp_seed = 1;
    experiment->add_option("--n", exp_n, "state dimension");
    experiment->add_option("--alpha", exp_alphas, "trade-off weights (repeatable)");
    experiment->add_option("--gamma", exp_gamma, "gain bound");
    experiment->add_option("--trials", exp_trials, "number of random systems");
    experiment->add_option("--seed", exp_seed, "base seed");
    experiment->add_option("--out", opts.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*classify) {
            const CaseLabel label = classify_case({cl_a, cl_alpha, cl_gamma, 0.0, 0.0, 1.0});
            std::ostringstream body;
            body << "{\n  \"case\": \"" << label.label << "\",\n  \"threshold_low\": "
                 << label.threshold_low << ",\n  \"threshold_high\": " << label.threshold_high
                 << "\n}\n";
            std::cout << body.str();
            write_artifact(opts, "classify_result.json", body.str());
        } else if (*solve_sc) {
            ScalarProblem pr{sc_a, sc_alpha, sc_gamma, sc_x0, sc_t0, sc_t1};
            if (!opts.input_path.empty()) {
                const Problem problem = require_problem(opts);
                if (problem.system.n != 1) throw DimensionMismatch("solve-scalar: need n = 1");
                pr = ScalarProblem{problem.system.A(0, 0), problem.horizon.alpha,
                                   problem.horizon.gamma,  problem.horizon.X0(0, 0),
                                   problem.horizon.t0,     problem.horizon.t1};
                if (std::abs(problem.system.B(0, 0)) != 1.0) {
                    std::cerr << "warning: scalar analysis assumes B = 1; rescale the model\n";
                }
            }
            if (pr.x0 == 0.0) {
                std::cerr << "warning: x0 = 0 sits outside the strict hypothesis of the "
                             "two-switch structure theorem; formulas extend continuously\n";
            }
            const ScalarSolution solution = solve_scalar(pr);
            const std::string body = scalar_solution_to_json(solution);
            std::cout << body << "\n";
            write_artifact(opts, "scalar_solution.json", body);
            write_csv_artifact(opts, "phase_portrait.csv", [&](std::ostream& out) {
                scalar_solution_to_csv(solution, 2048, out);
            });
        } else if (*solve_st) {
            const Problem problem = require_problem(opts);
            const StationarySolution solution = solve_stationary(
                problem.system, problem.horizon.alpha, problem.horizon.gamma, st_tol, st_max_iters);
            const std::string body = stationary_solution_to_json(solution);
            std::cout << body << "\n";
            write_artifact(opts, "stationary_solution.json", body);
            write_csv_artifact(opts, "rank_spectrum.csv", [&](std::ostream& out) {
                spectrum_to_csv(solution.z_spectrum, out);
            });
            write_csv_artifact(opts, "gain_spectrum.csv", [&](std::ostream& out) {
                spectrum_to_csv(solution.ctc_spectrum, out);
            });
        } else if (*verify) {
            const Problem problem = require_problem(opts);
            GainSchedule schedule;
            if (!verify_schedule.empty()) {
                schedule = load_schedule(verify_schedule);
            } else if (problem.system.n == 1) {
                const ScalarSolution solution = solve_scalar(
                    ScalarProblem{problem.system.A(0, 0), problem.horizon.alpha,
                                  problem.horizon.gamma, problem.horizon.X0(0, 0),
                                  problem.horizon.t0, problem.horizon.t1});
                schedule = solution.schedule();
            } else {
                throw InvalidSchedule("verify-pmp: --schedule is required when n > 1");
            }
            const PmpCertificate cert =
                integrate_canonical(problem.system, problem.horizon, schedule, verify_dt);
            const std::string body = certificate_to_json(cert);
            std::cout << body << "\n";
            write_artifact(opts, "pmp_certificate.json", body);
            write_csv_artifact(opts, "gap.csv",
                               [&](std::ostream& out) { gap_to_csv(cert, out); });
        } else if (*simulate) {
            const Problem problem = require_problem(opts);
            const SimulationReport report =
                simulate_paths(problem.system, problem.horizon, uniform_gain(problem, sim_c),
                               sim_paths, sim_dt, sim_seed, sim_emit_paths);
            const std::string body = simulation_report_to_json(report);
            std::cout << body << "\n";
            write_artifact(opts, "simulation_report.json", body);
            if (sim_emit_paths) {
                write_csv_artifact(opts, "paths.csv",
                                   [&](std::ostream& out) { paths_to_csv(report, out); });
            }
        } else if (*riccati) {
            const Problem problem = require_problem(opts);
            GainSchedule schedule = ric_schedule.empty() ? uniform_gain(problem, ric_u)
                                                         : load_schedule(ric_schedule);
            const RiccatiTrajectory traj =
                integrate_riccati(problem.system, problem.horizon, schedule, ric_dt);
            std::ostringstream body;
            body.precision(17);
            body << "{\n  \"mse_integral\": " << traj.mse_integral << ",\n  \"mi\": " << traj.mi
                 << ",\n  \"cost\": " << traj.cost << "\n}\n";
            std::cout << body.str();
            write_artifact(opts, "riccati_result.json", body.str());
            write_csv_artifact(opts, "trajectory.csv", [&](std::ostream& out) {
                trajectory_to_csv(traj, schedule, out);
            });
        } else if (*experiment) {
            std::ostringstream combined;
            combined << "[\n";
            for (std::size_t i = 0; i < exp_alphas.size(); ++i) {
                const ExperimentSummary summary =
                    random_experiment(exp_n, exp_alphas[i], exp_gamma, exp_trials, exp_seed);
                combined << experiment_summary_to_json(summary);
                if (i + 1 < exp_alphas.size()) combined << ",";
                combined << "\n";
                const std::string tag = std::to_string(i);
                write_csv_artifact(opts, "rank_spectrum_" + tag + ".csv", [&](std::ostream& out) {
                    spectrum_to_csv(summary.typical_z_spectrum, out);
                });
                write_csv_artifact(opts, "gain_spectrum_" + tag + ".csv", [&](std::ostream& out) {
                    spectrum_to_csv(summary.typical_ctc_spectrum, out);
                });
            }
            combined << "]\n";
            std::cout << combined.str();
            write_artifact(opts, "experiment_result.json", combined.str());
        }
        return kExitOk;
    } catch (const IoError& e) {
        std::cout << error_to_json("IoError", e.what()) << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cout << error_to_json("DomainError", e.what()) << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cout << error_to_json("InternalError", e.what()) << "\n";
        return kExitDomainError;
    }
}

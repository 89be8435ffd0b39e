#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "kbgain/model.hpp"
#include "kbgain/pmp.hpp"
#include "kbgain/scalar.hpp"
#include "kbgain/sdp.hpp"
#include "kbgain/simulate.hpp"

namespace kbgain {

// Problem documents are UTF-8 JSON with row-major nested float arrays:
//   {"A": [[..]], "B": [[..]], "X0": [[..]], "t0": .., "t1": .., "alpha": .., "gamma": ..}
struct Problem {
    LtiSystem system;
    HorizonSpec horizon;
};

Problem load_problem(const std::string& path);
Problem parse_problem(const std::string& json_text);
std::string problem_to_json(const Problem& problem);

// Schedule documents: {"breakpoints": [..], "values": [[[..]], ...]}.
GainSchedule load_schedule(const std::string& path);
std::string schedule_to_json(const GainSchedule& schedule);

std::string scalar_solution_to_json(const ScalarSolution& solution);
std::string stationary_solution_to_json(const StationarySolution& solution);
std::string simulation_report_to_json(const SimulationReport& report);
std::string experiment_summary_to_json(const ExperimentSummary& summary);
std::string certificate_to_json(const PmpCertificate& certificate);
std::string error_to_json(const std::string& kind, const std::string& message);

// Phase-portrait samples: t, x, p, u, x*p.
void scalar_solution_to_csv(const ScalarSolution& solution, int samples, std::ostream& out);
// Spectra: index, value per row.
void spectrum_to_csv(const Vector& values, std::ostream& out);
// Per-path integrated squared error.
void paths_to_csv(const SimulationReport& report, std::ostream& out);

void write_text_file(const std::string& path, const std::string& text);

} // namespace kbgain

#pragma once

// Simulation driver behind the command-line tool: builds a scheme from a
// RunConfig, integrates it, and writes errors, drift series, snapshots and
// parametric curves.

#include <filesystem>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/hodograph.hpp"
#include "pulsedg/run_config.hpp"
#include "pulsedg/scheme.hpp"
#include "pulsedg/systems.hpp"
#include "pulsedg/time_integration.hpp"

namespace pulsedg {

// Scheme, exact solution and initial state assembled from a configuration.
struct Problem {
  RunConfig config;
  SystemDescriptor system;
  Mesh1D mesh;
  std::shared_ptr<const ExactSolution> exact;  // (y, s) plane; null for e0 and piecewise data
  std::unique_ptr<SemiDiscreteScheme> scheme;
  IntegratorState initial;
};

Problem build_problem(const RunConfig& cfg);

struct ErrorNorms {
  std::string field;
  double l2 = 0.0;
  double linf = 0.0;
};

struct DriftSeries {
  std::string quantity;
  DriftReport report;
};

struct CurveRecord {
  double t_requested = 0.0;
  double s = 0.0;  // time the curve represents
  ParametricCurve curve;
  std::vector<double> rho;  // rho_h (CD) or cos z average (SG) at the curve samples
};

struct RunOutput {
  RunConfig config;
  std::size_t steps = 0;
  double ds = 0.0;
  IntegratorState final_state;
  Recovered final_recovered;
  std::vector<ErrorNorms> errors;  // at s = T
  std::vector<DriftSeries> drift;
  std::vector<CurveRecord> curves;
  std::size_t snapshots = 0;
  nlohmann::json meta;
};

// Integrates to T. Snapshots go to snapshot_dir when output.every > 0 and a
// directory is given.
RunOutput simulate(const RunConfig& cfg, const std::filesystem::path* snapshot_dir = nullptr);

// Errors of the current state against the exact solution at time s.
std::vector<ErrorNorms> measure_errors(const Problem& problem, const IntegratorState& state, const Recovered& aux);

struct ConvergenceRow {
  std::size_t n_cells = 0;
  std::vector<ErrorNorms> errors;
};

// Independent runs for every mesh of cfg.meshes, executed concurrently.
std::vector<ConvergenceRow> convergence(const RunConfig& cfg, unsigned max_threads = 0);

// log2(prev / curr), empty for the first row or non-positive errors.
std::optional<double> observed_order(double prev, double curr);

// ---- file output ----
std::string format_number(double v);
void write_run(const RunOutput& out, const std::filesystem::path& dir);
void write_errors_csv(const std::vector<ErrorNorms>& errors, double s, const std::filesystem::path& file);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& file);
void write_drift_csv(const std::vector<DriftSeries>& drift, const std::filesystem::path& file);
void write_curve_csv(const ParametricCurve& curve, const std::filesystem::path& file);
void write_json(const nlohmann::json& doc, const std::filesystem::path& file);

// Command entry points; each writes into dir and returns nothing on success.
void cmd_run(const RunConfig& cfg, const std::filesystem::path& dir);
void cmd_convergence(const RunConfig& cfg, const std::filesystem::path& dir);
void cmd_drift(const RunConfig& cfg, const std::filesystem::path& dir);
void cmd_reconstruct(const RunConfig& cfg, const std::filesystem::path& dir);

}  // namespace pulsedg

#pragma once

// Scenario execution: runs, blow-up predictions, scattering analyses, the
// solver-vs-representation cross validation, and the deterministic selftest.
// Artifacts are CSV time series plus JSON summaries; every floating value is
// printed with 17 significant digits.

#include "dsdirac/diagnostics.hpp"
#include "dsdirac/scenario.hpp"
#include "dsdirac/scattering.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsdirac {

struct RunArtifacts {
  RunOutcome outcome = RunOutcome::Completed;
  std::optional<Real> detected_t_star;
  DiagnosticReport diagnostics;
  PotentialCheck potential_check;
  std::string summary_json;
  std::string timeseries;
};

// Executes evolve + the enabled checks; writes timeseries.csv and
// summary.json under out_dir when write_files is set.
RunArtifacts run_scenario(const Scenario& sc, bool write_files = true,
                          const std::string& out_dir_override = "");

struct OraclePoint {
  Vec3 x;
  Real t = 0;
  Real deviation = 0;  // |psi_fd - psi_rep| / max-point scale
};

struct OracleComparison {
  std::vector<OraclePoint> points;
  Real max_rel_deviation = 0;
  Real scale = 0;  // normalization: max |psi| over the sampled points
  std::string summary_json;
};

// Samples random points inside the forward influence region and compares
// the finite-difference evolution against the kernel representation.
// Requires a linear scenario with V = 0.
OracleComparison compare_oracles(const Scenario& sc, int n_points = 10,
                                 unsigned seed = 7u,
                                 bool write_files = false,
                                 const std::string& out_dir_override = "");

struct BlowupArtifacts {
  Real threshold = 0;
  std::optional<Real> predicted_T;
  std::optional<Real> detected_t_star;
  Real margin = 0;  // detected / predicted when both exist
  Real measured_E0 = 0;
  std::string summary_json;
  std::string energy_csv;  // t, E, E_theory_lower_bound
};

BlowupArtifacts run_predict_blowup(const Scenario& sc,
                                   bool write_files = true,
                                   const std::string& out_dir_override = "");

struct ScatteringArtifacts {
  ScatteringCondition condition;
  ScatteringReport report;
  ResidualReport residual;
  std::string summary_json;
  std::string residual_csv;
};

ScatteringArtifacts run_scattering(const Scenario& sc,
                                   bool write_files = true,
                                   const std::string& out_dir_override = "");

// Deterministic invariant suite; returns true when every check passes and
// streams a CSV (check,value,pass) of the results.
bool selftest(std::ostream& out);

}  // namespace dsdirac

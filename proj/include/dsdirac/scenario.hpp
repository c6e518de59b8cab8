#pragma once

// Versioned JSON scenario schema: grid, physical parameters, named initial
// data profile, run controls, enabled checks, and the optional blow-up /
// scattering analysis blocks. Everything is validated before any compute.

#include "dsdirac/blowup.hpp"
#include "dsdirac/evolution.hpp"

#include <optional>
#include <string>

namespace dsdirac {

struct InitialSpec {
  enum class Profile { GaussianBump, CompactBump, MajoranaBump, PlaneMode };
  Profile profile = Profile::GaussianBump;
  Real amplitude = 1.0;
  Real width = 0.5;  // gaussian width or compact-bump radius
  Vec3 center = Vec3::Zero();
  Spinor direction = (Spinor() << 1, 0, 0, 0).finished();
  // MajoranaBump: upper pair and the unimodular z of the constraint.
  Complex upper1{1.0, 0.0};
  Complex upper2{0.0, 0.0};
  Complex majorana_z{1.0, 0.0};
  Eigen::Vector3i mode_index = Eigen::Vector3i::Zero();  // PlaneMode
  std::optional<Real> normalize_energy;  // rescale to this grid L2 mass
};

struct RunSpec {
  Real t_end = 1.0;
  Real cfl = 0.4;
  Real dissipation = 0.0;
  Real sample_dt = 0.05;
  Real max_dt = 1e30;
  Real norm_cap_factor = 1e6;
  int keep_fields_stride = 0;
};

struct ChecksSpec {
  bool energy_identity = true;
  bool decay_envelope = true;
  bool gamma2_law = true;
  bool chiral_bound = true;
  bool support = true;
};

struct BlowupAnalysisSpec {
  Real c0 = 1.0;
  Real alpha = 2.0;
  Real R = 1.0;
};

struct ScatteringAnalysisSpec {
  Real T_max = 6.0;
  int max_nodes = 64;
  Real fit_t_lo = -1.0;  // residual-rate fit window (default: late half)
  Real fit_t_hi = 1e30;
};

struct Scenario {
  int version = 1;
  std::string name;
  Grid3 grid;
  PhysicalParams params;
  InitialSpec initial;
  RunSpec run;
  ChecksSpec checks;
  std::optional<BlowupAnalysisSpec> blowup;
  std::optional<ScatteringAnalysisSpec> scattering;
  std::string output_dir = "out";
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// Analytic datum of the scenario (kernel-representation side).
SpinorData initial_data(const Scenario& sc);

// Grid sample of the datum at t = 0, with the optional energy
// renormalization applied on the grid measure.
SpinorField build_initial_field(const Scenario& sc);

EvolveOptions evolve_options(const Scenario& sc);

}  // namespace dsdirac

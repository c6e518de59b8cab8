#pragma once

// Method-of-lines solver for the first-order system
//   d/dt psi = -exp(-H t) sum_l alpha^l d_l psi - (3/2) H psi - i m g0 psi
//              + i V psi + source(psi) + forcing(x,t)
// on a periodic cube: 4th-order centered differences, classical RK4, and
// optional 4th-order artificial dissipation. Doubles as the linear
// propagator S(t,s) in both time directions.

#include "dsdirac/fields.hpp"
#include "dsdirac/nonlinearity.hpp"

#include <optional>
#include <vector>

namespace dsdirac {

struct PotentialSpec {
  enum class Kind {
    None,
    Gamma0Gauss,       // a(x) g0           (self-adjoint, g2-compatible)
    Gamma5Gauss,       // b(x) g5           (self-adjoint, g2-compatible)
    AnticommutingMix,  // a g0 + b g5 + c i g0 g5 (both conditions)
    IdentityGauss,     // a(x) I4           (self-adjoint, violates (V))
    Custom,
  };
  Kind kind = Kind::None;
  Real amplitude = 0.0;
  Real width = 1.0;
  Vec3 center = Vec3::Zero();
  std::function<Matrix4c(const Vec3&, Real)> custom;

  bool is_zero() const {
    return kind == Kind::None || (kind != Kind::Custom && amplitude == 0.0);
  }
  Matrix4c operator()(const Vec3& x, Real t) const;
};

struct PotentialCheck {
  Real max_self_adjoint_dev = 0.0;
  Real max_gamma2_dev = 0.0;  // |V^T g2 + g2 V| deviation
  bool self_adjoint = true;
  bool gamma2_condition = true;
};

// Samples V over points of the grid and a few times in [0, t_end].
PotentialCheck verify_potential(const PotentialSpec& V, const Grid3& grid,
                                Real t_end);

using ForcingFn = std::function<Spinor(const Vec3&, Real)>;

struct PhysicalParams {
  Real H = 1.0;
  Complex m = 0.0;
  PotentialSpec potential;
  NonlinSpec nonlin;
  ForcingFn forcing;        // optional inhomogeneity f(x,t)
  Real dissipation = 0.0;   // eps_d of the eps_d dx^3 d^4 term

  bool is_linear() const { return nonlin.is_none(); }
};

Real delta_plus(const PhysicalParams& p);   // -3H + 2|Im m|
Real delta_minus(const PhysicalParams& p);  // -3H - 2|Im m|

// --- single-step interface ------------------------------------------------

SpinorField rhs(const SpinorField& field, Real t, const PhysicalParams& p);

// One classical RK4 step; dt may be negative. Rejects |dt| beyond the
// stability bound dx / max_speed with max_speed = max exp(-H t) over the
// step.
SpinorField step(const SpinorField& field, Real t, Real dt,
                 const PhysicalParams& p);

// --- full runs --------------------------------------------------------------

enum class RunOutcome { Completed, BlowUp };

struct TrajectorySample {
  Real t = 0;
  Real energy = 0;          // int |psi|^2 dx
  Real xi_integral = 0;     // int psi* g0 psi dx
  Complex q_gamma2 = 0;     // int psi^T g2 psi dx
  Real rho_integral = 0;    // int rho dx
  Real defect = 0;          // int |psi - z g2 conj(psi)|^2 dx (if z given)
  Real support_radius = 0;  // 1e-8 mass-fraction radius
  Real dt_used = 0;
  Real cfl_number = 0;
};

struct EvolveOptions {
  Real cfl = 0.4;
  Real sample_dt = 0.05;
  Real max_dt = 1e30;
  Real norm_cap_factor = 1e6;   // blow-up cap on ||psi|| / ||psi(0)||
  int keep_fields_stride = 0;   // 0: none kept (final always kept)
  std::optional<Complex> majorana_z;
  bool record_support = true;
  Vec3 support_center = Vec3::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<int> kept_sample_index;
  std::vector<SpinorField> kept_fields;
  SpinorField final_field;
  RunOutcome outcome = RunOutcome::Completed;
  Real trigger_time = 0;  // blow-up trigger when outcome == BlowUp
  PhysicalParams params;
  EvolveOptions options;
  Real initial_energy = 0;
};

Trajectory evolve(const SpinorField& initial, Real t_end,
                  const PhysicalParams& p, const EvolveOptions& opts = {});

// S(t,s) g: linear evolution of g (given at time s) to time t, either
// direction. S(s,s) is the identity.
SpinorField propagator_apply(const SpinorField& g, Real s, Real t,
                             const PhysicalParams& p,
                             const EvolveOptions& opts = {});

// Kernel-representation entry point guarded by the linear-free contract.
Spinor free_solution_checked(const SpinorData& data, const Vec3& x, Real t,
                             const PhysicalParams& p);

}  // namespace dsdirac

#pragma once

// Scattering data by truncated Duhamel quadrature through the backward
// linear propagator, with the decay-exponent bookkeeping that certifies the
// truncation tail.

#include "dsdirac/evolution.hpp"

#include <vector>

namespace dsdirac {

struct ScatteringCondition {
  bool holds = false;
  Real lhs = 0;            // 4|Im m| + 2|Im m| alpha
  Real rhs = 0;            // 3 H alpha
  Real kappa = 0;          // integrand exponent -delta_-/2 + delta_+(1+alpha)/2
  Real residual_rate = 0;  // predicted decay rate delta_+(1+alpha)/2
};

// Strict inequality 4|Im m| + 2|Im m| alpha < 3 H alpha, plus the exponents
// assembled from delta_+-.
ScatteringCondition check_scattering_condition(const PhysicalParams& p,
                                               Real alpha);

struct ScatteringReport {
  SpinorField psi_plus0;
  Real T_max = 0;
  Real kappa = 0;
  Real tail_bound = 0;
  Real correction_norm = 0;  // ||psi_plus0 - psi_0||
  int nodes_used = 0;
  std::vector<std::pair<Real, Real>> integrand_norms;  // (tau, ||S(0,tau) f||)
};

// psi_0^+ = psi_0 + sum_j w_j S(0,tau_j) f(tau_j) over the trajectory's
// kept fields (thinned to at most max_nodes), f the system-form source.
// Requires the scattering condition, a trajectory from t = 0 with kept
// fields, and T_max large enough that the exponential tail bound is below
// 1e-6 ||psi_0||.
ScatteringReport compute_psi_plus0(const Trajectory& traj,
                                   const PhysicalParams& p, Real T_max,
                                   int max_nodes = 64);

struct ResidualReport {
  std::vector<std::pair<Real, Real>> series;  // (t, ||psi - psi_plus||)
  Real fitted_rate = 0;
  Real predicted_rate = 0;
  bool decreasing_late = false;
  bool passed = false;
};

// r(t) = ||psi(t) - psi^+(t)|| with psi^+ the free solution launched from
// psi_plus0. Fits log r against t inside [fit_t_lo, fit_t_hi] (defaults to
// the late half of the run); the quadrature floor of psi_plus0 decays at
// the linear rate only, so long runs should restrict the window to where
// the nonlinear correction still dominates.
ResidualReport verify_asymptotic_freeness(const Trajectory& traj,
                                          const SpinorField& psi_plus0,
                                          const PhysicalParams& p,
                                          Real fit_t_lo = -1.0,
                                          Real fit_t_hi = 1e30);

}  // namespace dsdirac

#pragma once

// Lifespan predictions for supercritical data and simulation-side blow-up
// detection: the expanding-case threshold and explicit T, the contracting
// case via the cone integral (hypergeometric closed form cross-checked by
// quadrature) and bracketed root-finding, and trigger-time refinement in
// the proof variable E^{-alpha/2}.

#include "dsdirac/evolution.hpp"

#include <optional>

namespace dsdirac {

struct BlowupParams {
  Real H = 1.0;
  Complex m = 0.0;
  Real c0 = 1.0;     // > 0
  Real alpha = 2.0;  // > 0
  Real R = 1.0;      // initial support radius, > 0
  Real E0 = 0.0;     // int |psi_0|^2 dx, >= 0
};

void validate(const BlowupParams& p);

// ((3H + 2|Im m|)/c0)^(2/alpha) (R + 1/H)^3; expanding case only (H > 0).
Real threshold_energy(const BlowupParams& p);

// Lifespan bound T of the expanding case; empty when E0 is subcritical.
std::optional<Real> predict_T_expanding(const BlowupParams& p);

// int_0^t (R + phi(s))^(-3 alpha/2) ds. Closed form for H < 0
// (hypergeometric) and H = 0 (power rule); adaptive quadrature for H > 0.
Real cone_integral(Real t, Real R, Real H, Real alpha);

// Quadrature evaluation regardless of H (cross-check route).
Real cone_integral_quadrature(Real t, Real R, Real H, Real alpha);

// t -> infinity limit of the cone integral; requires H < 0.
Real cone_integral_limit(Real R, Real H, Real alpha);

// Lifespan T_ls of the contracting case, from
// E0^(-alpha/2) = (c0 alpha / 2) * cone_integral(T_ls); empty when the
// large-data gate fails. Bisection to 1e-10 relative.
std::optional<Real> predict_T_contracting(const BlowupParams& p);

// Empirical constant of the contracting-case pointwise hypothesis: the
// minimum over sampled zeta of
//   (2 Re<G(zeta) zeta, zeta> - 3H |zeta|^2 + 2 Im(m) zeta* g0 zeta)
//   / |zeta|^(2+alpha)
// with G = c0 |zeta|^alpha. A configured constant c is admissible on the
// sample when c <= returned value.
Real sample_contracting_constant(const BlowupParams& p, int samples = 2000);

// Earliest blow-up time of a trajectory, refined by extrapolating
// (E exp(At))^(-alpha/2) linearly in the damped time variable across the
// last two samples; empty when the run completed.
std::optional<Real> detect_blowup(const Trajectory& traj);

}  // namespace dsdirac

#include "dsdirac/blowup.hpp"

#include "dsdirac/desitter.hpp"
#include "dsdirac/quadrature.hpp"
#include "dsdirac/special_functions.hpp"
#include "dsdirac/spinor_algebra.hpp"

#include <cmath>
#include <random>

namespace dsdirac {

void validate(const BlowupParams& p) {
  if (!(p.c0 > 0)) throw ConfigError("BlowupParams: c0 must be > 0");
  if (!(p.alpha > 0)) throw ConfigError("BlowupParams: alpha must be > 0");
  if (!(p.R > 0)) throw ConfigError("BlowupParams: R must be > 0");
  if (!(p.E0 >= 0)) throw ConfigError("BlowupParams: E0 must be >= 0");
}

Real threshold_energy(const BlowupParams& p) {
  validate(p);
  if (!(p.H > 0)) {
    throw PreconditionError(
        "threshold_energy: expanding case needs H > 0 (use the contracting "
        "branch)");
  }
  const Real A = 3.0 * p.H + 2.0 * std::abs(p.m.imag());
  return std::pow(A / p.c0, 2.0 / p.alpha) *
         std::pow(p.R + 1.0 / p.H, 3.0);
}

std::optional<Real> predict_T_expanding(const BlowupParams& p) {
  validate(p);
  if (!(p.H > 0)) {
    throw PreconditionError("predict_T_expanding: needs H > 0");
  }
  if (!(p.E0 > threshold_energy(p))) {
    return std::nullopt;  // the theorem is silent below the threshold
  }
  const Real A = 3.0 * p.H + 2.0 * std::abs(p.m.imag());
  const Real arg = 1.0 - (A / p.c0) * std::pow(p.E0, -0.5 * p.alpha) *
                             std::pow(p.R + 1.0 / p.H, 1.5 * p.alpha);
  return -2.0 / (p.alpha * A) * std::log(arg);
}

Real cone_integral_quadrature(Real t, Real R, Real H, Real alpha) {
  if (t <= 0.0) return 0.0;
  const Real q = 1.5 * alpha;
  return integrate_adaptive_real(
      [R, H, q](Real s) { return std::pow(R + phi(s, H), -q); }, 0.0, t,
      1e-12 * (1.0 + t));
}

Real cone_integral_limit(Real R, Real H, Real alpha) {
  if (!(H < 0)) {
    throw DomainError("cone_integral_limit: requires H < 0");
  }
  const Real q = 1.5 * alpha;
  return (1.0 / q) * std::pow(R, 1.0 - q) *
         gauss_2f1(1.0, 1.0, q + 1.0, H * R + 1.0).real();
}

Real cone_integral(Real t, Real R, Real H, Real alpha) {
  if (t < 0.0) throw DomainError("cone_integral: t must be >= 0");
  if (t == 0.0) return 0.0;
  const Real q = 1.5 * alpha;
  if (H == 0.0) {
    if (std::abs(q - 1.0) < 1e-14) return std::log((R + t) / R);
    return (std::pow(R + t, 1.0 - q) - std::pow(R, 1.0 - q)) / (1.0 - q);
  }
  if (H > 0.0) {
    return cone_integral_quadrature(t, R, H, alpha);
  }
  if (H * R + 1.0 >= 1.0) {
    throw DomainError("cone_integral: closed form needs H R + 1 < 1");
  }
  const Real ah = std::abs(H);
  const Real w1 = H * R + 1.0;
  const Real w2 = std::exp(H * t) * w1;
  const Real f1 = gauss_2f1(1.0, 1.0, q + 1.0, w1).real();
  const Real f2 = gauss_2f1(1.0, 1.0, q + 1.0, w2).real();
  const Real tail = std::pow(ah, q - 1.0) * (w2 - 1.0) *
                    std::pow(ah * R + std::exp(-H * t) - 1.0, -q) * f2;
  return (1.0 / q) * (std::pow(R, 1.0 - q) * f1 + tail);
}

std::optional<Real> predict_T_contracting(const BlowupParams& p) {
  validate(p);
  if (!(p.H < 0)) {
    throw PreconditionError("predict_T_contracting: needs H < 0");
  }
  const Real target = std::pow(p.E0, -0.5 * p.alpha);
  const Real coeff = 0.5 * p.c0 * p.alpha;
  if (!(target < coeff * cone_integral_limit(p.R, p.H, p.alpha))) {
    return std::nullopt;  // subcritical for the contracting gate
  }
  // cone_integral is strictly increasing; bracket then bisect.
  Real hi = 1.0;
  while (coeff * cone_integral(hi, p.R, p.H, p.alpha) < target) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw ConvergenceError("predict_T_contracting: bracketing failed");
    }
  }
  Real lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (coeff * cone_integral(mid, p.R, p.H, p.alpha) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

Real sample_contracting_constant(const BlowupParams& p, int samples) {
  validate(p);
  std::mt19937 rng(911u);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  std::uniform_real_distribution<Real> mag(-3.0, 3.0);
  Real cmin = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < samples; ++i) {
    Spinor zeta;
    for (int j = 0; j < 4; ++j) zeta(j) = Complex(gauss(rng), gauss(rng));
    zeta *= std::pow(10.0, mag(rng)) / std::max(zeta.norm(), 1e-300);
    const Real nz = zeta.norm();
    const Real xi = chiral_density(zeta).xi;
    const Real lhs = 2.0 * p.c0 * std::pow(nz, 2.0 + p.alpha) -
                     3.0 * p.H * nz * nz + 2.0 * p.m.imag() * xi;
    cmin = std::min(cmin, lhs / std::pow(nz, 2.0 + p.alpha));
  }
  return cmin;
}

std::optional<Real> detect_blowup(const Trajectory& traj) {
  if (traj.outcome != RunOutcome::BlowUp) return std::nullopt;
  const auto& s = traj.samples;
  const Real trigger = traj.trigger_time;
  if (s.size() < 2) return trigger;

  const Real alpha = traj.params.nonlin.kind == NonlinKind::BlowupG
                         ? traj.params.nonlin.alpha
                         : 2.0;
  const Real A = 3.0 * traj.params.H + 2.0 * std::abs(traj.params.m.imag());

  // Last two finite samples with growing energy.
  size_t i2 = s.size() - 1;
  while (i2 > 0 && !std::isfinite(s[i2].energy)) --i2;
  if (i2 == 0) return trigger;
  const size_t i1 = i2 - 1;
  const Real E1 = s[i1].energy, E2 = s[i2].energy;
  if (!(E2 > E1) || !(E1 > 0)) return trigger;

  // Proof variable: u = (E exp(At))^(-alpha/2) falls linearly in
  // g(t) = int_0^t exp(-A alpha s / 2) ds near the singularity.
  const Real rate = 0.5 * A * alpha;
  const auto gvar = [rate](Real t) { return phi(t, rate); };
  const Real u1 = std::pow(E1 * std::exp(A * s[i1].t), -0.5 * alpha);
  const Real u2 = std::pow(E2 * std::exp(A * s[i2].t), -0.5 * alpha);
  const Real g1 = gvar(s[i1].t), g2 = gvar(s[i2].t);
  if (!(u1 > u2) || g2 <= g1) return trigger;
  const Real gstar = g2 + u2 * (g2 - g1) / (u1 - u2);
  Real tstar;
  if (rate == 0.0) {
    tstar = gstar;
  } else {
    const Real arg = 1.0 - rate * gstar;
    if (!(arg > 0.0)) return trigger;
    tstar = -std::log(arg) / rate;
  }
  // Accept the refinement only if it lands between the last sample and the
  // trigger neighborhood.
  if (tstar >= s[i2].t && tstar <= trigger + (s[i2].t - s[i1].t)) {
    return tstar;
  }
  return trigger;
}

}  // namespace dsdirac

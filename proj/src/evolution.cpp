#include "dsdirac/evolution.hpp"

#include "dsdirac/diagnostics.hpp"
#include "dsdirac/kernel_engine.hpp"
#include "dsdirac/parallel.hpp"

#include <cmath>
#include <limits>

namespace dsdirac {

namespace {

// Stability cap for RK4 with the 4th-order stencil (imaginary-axis bound
// 2.82 / (sqrt(3) * 1.372) ~ 1.19; kept at 1 for margin).
constexpr Real kCflHardCap = 1.0;

Real gauss_profile(const Vec3& x, const Vec3& c, Real w) {
  return std::exp(-(x - c).squaredNorm() / (2.0 * w * w));
}

}  // namespace

Matrix4c PotentialSpec::operator()(const Vec3& x, Real t) const {
  switch (kind) {
    case Kind::None:
      return Matrix4c::Zero();
    case Kind::Gamma0Gauss:
      return amplitude * gauss_profile(x, center, width) * gamma0();
    case Kind::Gamma5Gauss:
      return amplitude * gauss_profile(x, center, width) * gamma5();
    case Kind::AnticommutingMix: {
      const Real a = amplitude * gauss_profile(x, center, width);
      const Real b =
          0.5 * amplitude * gauss_profile(x, center + Vec3(0.3, 0, 0), width);
      const Real c =
          0.25 * amplitude * gauss_profile(x, center - Vec3(0, 0.3, 0), width);
      return a * gamma0() + b * gamma5() +
             c * (kImag * (gamma0() * gamma5()));
    }
    case Kind::IdentityGauss:
      return amplitude * gauss_profile(x, center, width) * identity4();
    case Kind::Custom:
      if (!custom) throw ConfigError("PotentialSpec: missing custom callable");
      return custom(x, t);
  }
  return Matrix4c::Zero();
}

PotentialCheck verify_potential(const PotentialSpec& V, const Grid3& grid,
                                Real t_end) {
  PotentialCheck chk;
  if (V.is_zero()) return chk;
  const int stride = std::max(1, grid.n / 6);
  const Matrix4c& g2 = gamma(2);
  for (Real t : {0.0, 0.5 * t_end, t_end}) {
    for (int i = 0; i < grid.n; i += stride) {
      for (int j = 0; j < grid.n; j += stride) {
        for (int k = 0; k < grid.n; k += stride) {
          const Matrix4c v = V(grid.point(i, j, k), t);
          chk.max_self_adjoint_dev = std::max(
              chk.max_self_adjoint_dev, (v - v.adjoint()).cwiseAbs().maxCoeff());
          chk.max_gamma2_dev =
              std::max(chk.max_gamma2_dev,
                       (v.transpose() * g2 + g2 * v).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  chk.self_adjoint = chk.max_self_adjoint_dev <= 1e-12;
  chk.gamma2_condition = chk.max_gamma2_dev <= 1e-12;
  return chk;
}

Real delta_plus(const PhysicalParams& p) {
  return -3.0 * p.H + 2.0 * std::abs(p.m.imag());
}

Real delta_minus(const PhysicalParams& p) {
  return -3.0 * p.H - 2.0 * std::abs(p.m.imag());
}

namespace {

void rhs_into(const SpinorField& field, Real t, const PhysicalParams& p,
              SpinorField& out) {
  const Grid3& g = field.grid;
  const int n = g.n;
  const Real dx = g.dx();
  const Real adv = std::exp(-p.H * t);
  const Real inv12dx = 1.0 / (12.0 * dx);
  const Real eps_diss = p.dissipation / dx;
  const Complex im_m = kImag * p.m;
  const bool has_V = !p.potential.is_zero();
  const bool has_nl = !p.nonlin.is_none();
  const bool has_f = static_cast<bool>(p.forcing);

  const Matrix4c a1 = alpha(1);
  const Matrix4c a2 = alpha(2);
  const Matrix4c a3 = alpha(3);
  const Matrix4c g0 = gamma0();

  out.grid = g;
  out.time = field.time;
  if (out.values.cols() != field.values.cols()) {
    out.values.resize(4, field.values.cols());
  }
  const SpinorArray& u = field.values;
  SpinorArray& r = out.values;

  parallel_for(n, [&](long i) {
    const int im2 = g.wrap(static_cast<int>(i) - 2);
    const int im1 = g.wrap(static_cast<int>(i) - 1);
    const int ip1 = g.wrap(static_cast<int>(i) + 1);
    const int ip2 = g.wrap(static_cast<int>(i) + 2);
    for (int j = 0; j < n; ++j) {
      const int jm2 = g.wrap(j - 2), jm1 = g.wrap(j - 1);
      const int jp1 = g.wrap(j + 1), jp2 = g.wrap(j + 2);
      for (int k = 0; k < n; ++k) {
        const int km2 = g.wrap(k - 2), km1 = g.wrap(k - 1);
        const int kp1 = g.wrap(k + 1), kp2 = g.wrap(k + 2);
        const long c = g.index(static_cast<int>(i), j, k);

        const auto dcol = [&](long pm2, long pm1, long pp1, long pp2) {
          return Spinor(inv12dx * (u.col(pm2) - 8.0 * u.col(pm1) +
                                   8.0 * u.col(pp1) - u.col(pp2)));
        };
        const Spinor d1 = dcol(g.index(im2, j, k), g.index(im1, j, k),
                               g.index(ip1, j, k), g.index(ip2, j, k));
        const Spinor d2 = dcol(g.index(static_cast<int>(i), jm2, k),
                               g.index(static_cast<int>(i), jm1, k),
                               g.index(static_cast<int>(i), jp1, k),
                               g.index(static_cast<int>(i), jp2, k));
        const Spinor d3 = dcol(g.index(static_cast<int>(i), j, km2),
                               g.index(static_cast<int>(i), j, km1),
                               g.index(static_cast<int>(i), j, kp1),
                               g.index(static_cast<int>(i), j, kp2));

        const Spinor uc = u.col(c);
        Spinor acc = -adv * (a1 * d1 + a2 * d2 + a3 * d3) -
                     (1.5 * p.H) * uc - im_m * (g0 * uc);
        if (has_V || has_nl || has_f) {
          const Vec3 x = g.point(static_cast<int>(i), j, k);
          if (has_V) acc += kImag * (p.potential(x, t) * uc);
          if (has_nl) acc += dirac_source(uc, p.nonlin);
          if (has_f) acc += p.forcing(x, t);
        }
        if (eps_diss != 0.0) {
          const auto d4col = [&](long pm2, long pm1, long pp1, long pp2) {
            return Spinor(u.col(pm2) - 4.0 * u.col(pm1) + 6.0 * uc -
                          4.0 * u.col(pp1) + u.col(pp2));
          };
          Spinor diss =
              d4col(g.index(im2, j, k), g.index(im1, j, k),
                    g.index(ip1, j, k), g.index(ip2, j, k)) +
              d4col(g.index(static_cast<int>(i), jm2, k),
                    g.index(static_cast<int>(i), jm1, k),
                    g.index(static_cast<int>(i), jp1, k),
                    g.index(static_cast<int>(i), jp2, k)) +
              d4col(g.index(static_cast<int>(i), j, km2),
                    g.index(static_cast<int>(i), j, km1),
                    g.index(static_cast<int>(i), j, kp1),
                    g.index(static_cast<int>(i), j, kp2));
          acc -= eps_diss * diss;
        }
        r.col(c) = acc;
      }
    }
  });
}

Real max_speed_over_step(Real t, Real dt, Real H) {
  return std::max(std::exp(-H * t), std::exp(-H * (t + dt)));
}

// Largest dt with dt * max_speed_over_step(t, dir*dt) <= budget. When the
// characteristic speed grows along the step the condition is transcendental;
// g(dt) = dt * speed(dt) is monotone, so bisection is safe.
Real admissible_dt(Real t, Real dir, Real H, Real budget) {
  const Real easy = budget / std::exp(-H * t);
  if (easy * max_speed_over_step(t, dir * easy, H) <= budget * (1 + 1e-12)) {
    return easy;
  }
  Real lo = 0.0, hi = easy;
  for (int it = 0; it < 60; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (mid * max_speed_over_step(t, dir * mid, H) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

SpinorField rhs(const SpinorField& field, Real t, const PhysicalParams& p) {
  SpinorField out(field.grid, field.time);
  rhs_into(field, t, p, out);
  return out;
}

SpinorField step(const SpinorField& field, Real t, Real dt,
                 const PhysicalParams& p) {
  const Real dx = field.grid.dx();
  const Real speed = max_speed_over_step(t, dt, p.H);
  if (std::abs(dt) > kCflHardCap * dx / speed * (1.0 + 1e-9)) {
    throw PreconditionError("step: dt violates the CFL stability bound");
  }
  if (dt == 0.0) return field;

  SpinorField k1(field.grid, t), k2(field.grid, t), k3(field.grid, t),
      k4(field.grid, t);
  SpinorField tmp(field.grid, t);

  rhs_into(field, t, p, k1);
  tmp.values = field.values + (0.5 * dt) * k1.values;
  rhs_into(tmp, t + 0.5 * dt, p, k2);
  tmp.values = field.values + (0.5 * dt) * k2.values;
  rhs_into(tmp, t + 0.5 * dt, p, k3);
  tmp.values = field.values + dt * k3.values;
  rhs_into(tmp, t + dt, p, k4);

  SpinorField out(field.grid, t + dt);
  out.values = field.values + (dt / 6.0) * (k1.values + 2.0 * k2.values +
                                            2.0 * k3.values + k4.values);
  return out;
}

Trajectory evolve(const SpinorField& initial, Real t_end,
                  const PhysicalParams& p, const EvolveOptions& opts) {
  if (t_end == initial.time) {
    throw PreconditionError("evolve: t_end must differ from the start time");
  }
  const Real dir = (t_end > initial.time) ? 1.0 : -1.0;
  if (dir < 0 && !p.is_linear()) {
    throw PreconditionError("evolve: backward runs must be linear");
  }
  validate(p.nonlin);

  Trajectory traj;
  traj.params = p;
  traj.options = opts;
  traj.initial_energy = energy(initial);
  const Real cap_energy =
      opts.norm_cap_factor * opts.norm_cap_factor * traj.initial_energy;

  const Real dx = initial.grid.dx();
  const Real cfl = std::min(opts.cfl, kCflHardCap);

  SpinorField u = initial;
  Real t = initial.time;
  int sample_no = 0;
  Real last_dt = 0, last_cfl = 0;

  const auto record = [&](Real dt_used, Real cfl_used) {
    TrajectorySample s;
    s.t = t;
    s.energy = energy(u);
    s.xi_integral = xi_integral(u);
    s.q_gamma2 = gamma2_bilinear(u);
    s.rho_integral = chiral_charge(u);
    if (opts.majorana_z) s.defect = defect_integral(u, *opts.majorana_z);
    if (opts.record_support) {
      s.support_radius = support_radius(u, 1e-8, opts.support_center);
    }
    s.dt_used = dt_used;
    s.cfl_number = cfl_used;
    const int idx = static_cast<int>(traj.samples.size());
    traj.samples.push_back(s);
    if (opts.keep_fields_stride > 0 &&
        (idx % opts.keep_fields_stride) == 0) {
      traj.kept_sample_index.push_back(idx);
      traj.kept_fields.push_back(u);
    }
  };

  // The advective bound vanishes as exp(-Ht) dies, but the mass rotation
  // and damping still set a timescale RK4 must resolve.
  const Real rate_scale = 1.5 * std::abs(p.H) + std::abs(p.m);
  const Real dt_accuracy =
      rate_scale > 0 ? cfl / rate_scale : std::numeric_limits<Real>::max();

  record(0.0, 0.0);
  while (dir * (t_end - t) > 1e-13 * (1.0 + std::abs(t_end))) {
    // Admissible step from the worst characteristic speed over the step.
    Real dt = admissible_dt(t, dir, p.H, cfl * dx);
    dt = std::min({dt, opts.max_dt, dt_accuracy});
    const Real next_sample = initial.time + dir * (sample_no + 1) * opts.sample_dt;
    const Real to_sample = dir * (next_sample - t);
    const Real to_end = dir * (t_end - t);
    dt = std::min(dt, to_end);
    if (to_sample > 1e-13) dt = std::min(dt, to_sample);
    // Merge a sample boundary that sits within round-off of t_end; otherwise
    // the run would emit two samples separated by a ~1e-10 sliver.
    if (to_end - dt < 1e-9 * (1.0 + std::abs(t_end))) dt = to_end;
    if (dt < 1e-12) {
      traj.outcome = RunOutcome::BlowUp;
      traj.trigger_time = t;
      break;
    }

    u = step(u, t, dir * dt, p);
    t = u.time;
    last_dt = dir * dt;
    last_cfl = dt * std::exp(-p.H * t) / dx;

    if (!u.all_finite()) {
      traj.outcome = RunOutcome::BlowUp;
      traj.trigger_time = t;
      break;
    }
    const Real E = energy(u);
    const bool capped = E > cap_energy;
    const bool at_sample =
        dir * (t - (initial.time + dir * (sample_no + 1) * opts.sample_dt)) >
        -1e-12;
    if (at_sample || capped || dir * (t_end - t) <= 1e-13) {
      if (at_sample) ++sample_no;
      record(last_dt, last_cfl);
    }
    if (capped) {
      traj.outcome = RunOutcome::BlowUp;
      traj.trigger_time = t;
      break;
    }
  }
  traj.final_field = u;
  return traj;
}

SpinorField propagator_apply(const SpinorField& g, Real s, Real t,
                             const PhysicalParams& p,
                             const EvolveOptions& opts) {
  if (!p.is_linear()) {
    throw PreconditionError("propagator_apply: params must be linear");
  }
  if (std::abs(g.time - s) > 1e-12 * (1.0 + std::abs(s))) {
    throw PreconditionError("propagator_apply: g is not a time-s snapshot");
  }
  if (t == s) return g;
  EvolveOptions o = opts;
  o.sample_dt = std::abs(t - s);
  o.keep_fields_stride = 0;
  o.record_support = false;
  SpinorField g0 = g;
  g0.time = s;
  return evolve(g0, t, p, o).final_field;
}

Spinor free_solution_checked(const SpinorData& data, const Vec3& x, Real t,
                             const PhysicalParams& p) {
  if (!p.potential.is_zero()) {
    throw PreconditionError(
        "free_solution_checked: the representation formula requires V = 0");
  }
  if (!p.nonlin.is_none()) {
    throw PreconditionError(
        "free_solution_checked: the representation formula is linear");
  }
  return free_dirac_solution(data, x, t, p.H, p.m);
}

}  // namespace dsdirac

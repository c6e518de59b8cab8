#include "dsdirac/diagnostics.hpp"

#include "dsdirac/desitter.hpp"
#include "dsdirac/spinor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dsdirac {

namespace {

// Sums per-site values slab by slab (outer index), then adds the slab
// partials in order.
template <typename SiteFn>
Real slab_sum(const Grid3& g, const SiteFn& site_value) {
  Real total = 0.0;
  for (int i = 0; i < g.n; ++i) {
    Real partial = 0.0;
    long idx = g.index(i, 0, 0);
    for (int j = 0; j < g.n; ++j) {
      for (int k = 0; k < g.n; ++k, ++idx) {
        partial += site_value(idx);
      }
    }
    total += partial;
  }
  return total;
}

Real pointwise_xi(const SpinorArray& u, long c) {
  return std::norm(u(0, c)) + std::norm(u(1, c)) - std::norm(u(2, c)) -
         std::norm(u(3, c));
}

Real pointwise_eta(const SpinorArray& u, long c) {
  return 2.0 * (u(0, c) * std::conj(u(2, c))).imag() +
         2.0 * (u(1, c) * std::conj(u(3, c))).imag();
}

// History integral int_0^{t_k} g(s) ds for every sample index k by
// trapezoid; on uniform sample spacing the Euler-Maclaurin endpoint
// correction -(h^2/12)(g'(t_k) - g'(0)) is applied with one-sided
// 3rd-order difference estimates of g'.
std::vector<Real> cumulative_integral(const std::vector<Real>& t,
                                      const std::vector<Real>& g) {
  const size_t n = t.size();
  std::vector<Real> I(n, 0.0);
  for (size_t k = 1; k < n; ++k) {
    I[k] = I[k - 1] + 0.5 * (t[k] - t[k - 1]) * (g[k] + g[k - 1]);
  }
  if (n < 5) return I;
  const Real h = t[1] - t[0];
  bool uniform = true;
  for (size_t k = 1; k + 1 < n; ++k) {
    if (std::abs((t[k + 1] - t[k]) - h) > 1e-9 * (std::abs(h) + 1e-12)) {
      uniform = false;
      break;
    }
  }
  if (!uniform || h == 0.0) return I;
  // 3rd-order one-sided estimates of g' for the h^2/12 endpoint correction.
  const auto deriv_at = [&](size_t k) {
    if (k + 3 < n) {
      return (-11.0 * g[k] + 18.0 * g[k + 1] - 9.0 * g[k + 2] +
              2.0 * g[k + 3]) /
             (6.0 * h);
    }
    return (11.0 * g[k] - 18.0 * g[k - 1] + 9.0 * g[k - 2] - 2.0 * g[k - 3]) /
           (6.0 * h);
  };
  const Real g0p = deriv_at(0);
  for (size_t k = 1; k < n; ++k) {
    I[k] -= h * h / 12.0 * (deriv_at(k) - g0p);
  }
  return I;
}

}  // namespace

Real energy(const SpinorField& f) {
  const Real cell = std::pow(f.grid.dx(), 3);
  const SpinorArray& u = f.values;
  return cell * slab_sum(f.grid, [&](long c) {
           return std::norm(u(0, c)) + std::norm(u(1, c)) +
                  std::norm(u(2, c)) + std::norm(u(3, c));
         });
}

Real xi_integral(const SpinorField& f) {
  const Real cell = std::pow(f.grid.dx(), 3);
  const SpinorArray& u = f.values;
  return cell * slab_sum(f.grid, [&](long c) { return pointwise_xi(u, c); });
}

Complex gamma2_bilinear(const SpinorField& f) {
  const Real cell = std::pow(f.grid.dx(), 3);
  const SpinorArray& u = f.values;
  // psi^T g2 psi = 2i (psi_2 psi_3 - psi_1 psi_4), no conjugation.
  const Real re = cell * slab_sum(f.grid, [&](long c) {
    return (2.0 * kImag * (u(1, c) * u(2, c) - u(0, c) * u(3, c))).real();
  });
  const Real im = cell * slab_sum(f.grid, [&](long c) {
    return (2.0 * kImag * (u(1, c) * u(2, c) - u(0, c) * u(3, c))).imag();
  });
  return Complex(re, im);
}

Real chiral_charge(const SpinorField& f) {
  const Real cell = std::pow(f.grid.dx(), 3);
  const SpinorArray& u = f.values;
  return cell * slab_sum(f.grid, [&](long c) {
           const Real xi = pointwise_xi(u, c);
           const Real eta = pointwise_eta(u, c);
           return std::sqrt(xi * xi + eta * eta);
         });
}

Real defect_integral(const SpinorField& f, Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-9) {
    throw PreconditionError("defect_integral: |z| must equal 1");
  }
  const Real cell = std::pow(f.grid.dx(), 3);
  const SpinorArray& u = f.values;
  // |psi - z g2 conj(psi)|^2 with g2 conj(psi) =
  // (-i conj(p4), i conj(p3), i conj(p2), -i conj(p1)).
  return cell * slab_sum(f.grid, [&](long c) {
           const Complex r0 = u(0, c) - z * (-kImag * std::conj(u(3, c)));
           const Complex r1 = u(1, c) - z * (kImag * std::conj(u(2, c)));
           const Complex r2 = u(2, c) - z * (kImag * std::conj(u(1, c)));
           const Complex r3 = u(3, c) - z * (-kImag * std::conj(u(0, c)));
           return std::norm(r0) + std::norm(r1) + std::norm(r2) +
                  std::norm(r3);
         });
}

Real support_radius(const SpinorField& f, Real threshold, const Vec3& center) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw PreconditionError("support_radius: threshold must be in (0,1)");
  }
  const Grid3& g = f.grid;
  const SpinorArray& u = f.values;
  std::vector<std::pair<Real, Real>> mass;  // (radius^2, site mass)
  mass.reserve(g.size());
  Real total = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int k = 0; k < g.n; ++k) {
        const long c = g.index(i, j, k);
        const Real m = std::norm(u(0, c)) + std::norm(u(1, c)) +
                       std::norm(u(2, c)) + std::norm(u(3, c));
        mass.emplace_back((g.point(i, j, k) - center).squaredNorm(), m);
        total += m;
      }
    }
  }
  if (total <= 0.0) return 0.0;
  std::sort(mass.begin(), mass.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Real outside = total;
  for (const auto& [r2, m] : mass) {
    if (outside <= threshold * total) return std::sqrt(r2);
    outside -= m;
  }
  return std::sqrt(mass.back().first);
}

CheckResult check_energy_identity(const Trajectory& traj,
                                  const PhysicalParams& p, Real tol_rel) {
  CheckResult res;
  res.name = "energy_identity";
  const bool m_form = p.nonlin.kind == NonlinKind::ChiralF || p.is_linear();
  if (!m_form || p.forcing) {
    res.applicable = false;
    res.detail = "requires an M-form nonlinearity or an unforced linear run";
    return res;
  }
  const auto& s = traj.samples;
  if (s.size() < 2) {
    res.applicable = false;
    return res;
  }
  std::vector<Real> t(s.size()), g(s.size());
  for (size_t k = 0; k < s.size(); ++k) {
    t[k] = s[k].t;
    g[k] = std::exp(3.0 * p.H * s[k].t) * s[k].xi_integral;
  }
  const std::vector<Real> hist = cumulative_integral(t, g);
  const Real E0 = s[0].energy;
  Real worst = 0.0, at = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    const Real damp = std::exp(-3.0 * p.H * (t[k] - t[0]));
    const Real predicted =
        damp * E0 + 2.0 * p.m.imag() * std::exp(-3.0 * p.H * t[k]) * hist[k];
    const Real scale = std::max(std::abs(predicted), 1e-14 * std::max(E0, 1.0));
    const Real rel = std::abs(s[k].energy - predicted) / scale;
    if (rel > worst) {
      worst = rel;
      at = t[k];
    }
  }
  res.max_violation = worst;
  res.at_t = at;
  res.passed = worst <= tol_rel;
  return res;
}

CheckResult check_decay_envelope(const Trajectory& traj,
                                 const PhysicalParams& p, Real tol) {
  CheckResult res;
  res.name = "decay_envelope";
  if (!p.is_linear() || !p.potential.is_zero() || p.forcing) {
    res.applicable = false;
    res.detail = "requires a free linear run";
    return res;
  }
  const auto& s = traj.samples;
  const Real n0 = std::sqrt(std::max(s[0].energy, 0.0));
  if (n0 == 0.0) {
    res.passed = true;
    return res;
  }
  const Real dp = delta_plus(p), dm = delta_minus(p);
  Real worst = 0.0, at = 0.0;
  for (const auto& rec : s) {
    const Real tau = rec.t - s[0].t;
    const Real norm = std::sqrt(std::max(rec.energy, 0.0));
    const Real hi = n0 * std::exp(0.5 * dp * tau);
    const Real lo = n0 * std::exp(0.5 * dm * tau);
    const Real excess = std::max(norm / hi - 1.0, lo / norm - 1.0);
    if (excess > worst) {
      worst = excess;
      at = rec.t;
    }
  }
  res.max_violation = std::max(worst, 0.0);
  res.at_t = at;
  res.passed = res.max_violation <= tol;
  return res;
}

CheckResult check_gamma2_law(const Trajectory& traj, const PhysicalParams& p,
                             Real tol_rel) {
  CheckResult res;
  res.name = "gamma2_law";
  const bool m_form = p.nonlin.kind == NonlinKind::ChiralF || p.is_linear();
  PotentialCheck pc;
  if (!p.potential.is_zero()) {
    pc = verify_potential(p.potential, traj.final_field.grid, traj.samples.back().t);
  }
  if (!m_form || !pc.gamma2_condition || std::abs(p.m.imag()) > 1e-12 ||
      p.forcing) {
    res.applicable = false;
    res.detail =
        "requires real m, an M-form or absent nonlinearity, and a potential "
        "with V^T g2 + g2 V = 0";
    return res;
  }
  const auto& s = traj.samples;
  const Complex q0 = s[0].q_gamma2;
  const Real E0 = std::max(s[0].energy, 1e-300);
  Real worst = 0.0, at = 0.0;
  for (const auto& rec : s) {
    const Real dev =
        std::abs(rec.q_gamma2 * std::exp(3.0 * p.H * (rec.t - s[0].t)) - q0) /
        E0;
    if (dev > worst) {
      worst = dev;
      at = rec.t;
    }
  }
  res.max_violation = worst;
  res.at_t = at;
  res.passed = worst <= tol_rel;
  return res;
}

CheckResult check_chiral_bound(const Trajectory& traj,
                               const PhysicalParams& p, Real tol,
                               Real abs_floor_rel) {
  CheckResult res;
  res.name = "chiral_bound";
  if (!traj.options.majorana_z) {
    res.applicable = false;
    res.detail = "requires Majorana-type data (z recorded by the run)";
    return res;
  }
  const auto& s = traj.samples;
  const Real E0 = std::max(s[0].energy, 1e-300);
  if (s[0].defect > 1e-10 * E0) {
    res.applicable = false;
    res.detail = "initial defect is not zero";
    return res;
  }
  std::vector<Real> t(s.size()), grho(s.size()), gxi(s.size());
  for (size_t k = 0; k < s.size(); ++k) {
    t[k] = s[k].t;
    grho[k] = std::exp(3.0 * p.H * s[k].t) * s[k].rho_integral;
    gxi[k] = std::exp(3.0 * p.H * s[k].t) * s[k].xi_integral;
  }
  const std::vector<Real> hist = cumulative_integral(t, grho);
  const std::vector<Real> hist_xi = cumulative_integral(t, gxi);
  const Real mu = std::abs(p.m.imag());
  std::vector<Real> bound(s.size());
  Real bound_peak = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    bound[k] = 4.0 * mu * std::exp(-3.0 * p.H * t[k]) * hist[k];
    bound_peak = std::max(bound_peak, bound[k]);
  }
  // Both sides vanish at t -> 0, so the relative tolerance is anchored to
  // the bound's scale over the run, with an absolute floor for Im m = 0.
  const Real slack = tol * bound_peak + abs_floor_rel * E0;
  Real worst = 0.0, at = 0.0, eq_residual = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    const Real excess = s[k].defect - (1.0 + tol) * bound[k] - slack;
    if (excess > worst) {
      worst = excess;
      at = t[k];
    }
    // Equality-form residual (reported, not gated).
    const Real eq = s[k].defect -
                    4.0 * p.m.imag() * std::exp(-3.0 * p.H * t[k]) * hist_xi[k];
    eq_residual = std::max(eq_residual, std::abs(eq) / E0);
  }
  res.max_violation = std::max(worst, 0.0) / E0;
  res.at_t = at;
  res.passed = worst <= 0.0;
  res.detail = "equality-form residual / E0 = " + format17(eq_residual);
  return res;
}

CheckResult check_support(const Trajectory& traj, const PhysicalParams& p) {
  CheckResult res;
  res.name = "finite_speed_support";
  if (!traj.options.record_support) {
    res.applicable = false;
    return res;
  }
  const auto& s = traj.samples;
  const Real R0 = s[0].support_radius;
  const Real margin = 3.0 * traj.final_field.grid.dx();
  Real worst = 0.0, at = 0.0;
  for (const auto& rec : s) {
    const Real allowed = R0 + phi(rec.t - s[0].t, p.H) + margin;
    const Real excess = rec.support_radius - allowed;
    if (excess > worst) {
      worst = excess;
      at = rec.t;
    }
  }
  res.max_violation = std::max(worst, 0.0);
  res.at_t = at;
  res.passed = worst <= 0.0;
  return res;
}

DiagnosticReport run_all_checks(const Trajectory& traj,
                                const PhysicalParams& p) {
  DiagnosticReport rep;
  rep.checks.push_back(check_energy_identity(traj, p));
  rep.checks.push_back(check_decay_envelope(traj, p));
  rep.checks.push_back(check_gamma2_law(traj, p));
  rep.checks.push_back(check_chiral_bound(traj, p));
  rep.checks.push_back(check_support(traj, p));
  return rep;
}

std::string format17(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string timeseries_csv(const Trajectory& traj, const PhysicalParams& p) {
  std::ostringstream out;
  out << "t,E,E_envelope_hi,E_envelope_lo,Q_re,Q_im,chiral_charge,"
         "support_radius\n";
  const Real E0 = traj.samples.empty() ? 0.0 : traj.samples[0].energy;
  const Real t0 = traj.samples.empty() ? 0.0 : traj.samples[0].t;
  for (const auto& s : traj.samples) {
    const Real tau = s.t - t0;
    out << format17(s.t) << ',' << format17(s.energy) << ','
        << format17(E0 * std::exp(delta_plus(p) * tau)) << ','
        << format17(E0 * std::exp(delta_minus(p) * tau)) << ','
        << format17(s.q_gamma2.real()) << ',' << format17(s.q_gamma2.imag())
        << ',' << format17(s.rho_integral) << ','
        << format17(s.support_radius) << '\n';
  }
  return out.str();
}

}  // namespace dsdirac

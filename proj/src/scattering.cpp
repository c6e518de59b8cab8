#include "dsdirac/scattering.hpp"

#include "dsdirac/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace dsdirac {

ScatteringCondition check_scattering_condition(const PhysicalParams& p,
                                               Real alpha) {
  ScatteringCondition c;
  const Real mu = std::abs(p.m.imag());
  c.lhs = 4.0 * mu + 2.0 * mu * alpha;
  c.rhs = 3.0 * p.H * alpha;
  c.holds = c.lhs < c.rhs;
  c.kappa = -0.5 * delta_minus(p) + 0.5 * delta_plus(p) * (1.0 + alpha);
  c.residual_rate = 0.5 * delta_plus(p) * (1.0 + alpha);
  return c;
}

namespace {

PhysicalParams linear_of(const PhysicalParams& p) {
  PhysicalParams lin = p;
  lin.nonlin = NonlinSpec{};
  lin.forcing = nullptr;
  return lin;
}

SpinorField source_field(const SpinorField& psi, const NonlinSpec& nl) {
  SpinorField f(psi.grid, psi.time);
  for (long c = 0; c < psi.values.cols(); ++c) {
    f.values.col(c) = dirac_source(Spinor(psi.values.col(c)), nl);
  }
  return f;
}

}  // namespace

ScatteringReport compute_psi_plus0(const Trajectory& traj,
                                   const PhysicalParams& p, Real T_max,
                                   int max_nodes) {
  const Real alpha = lipschitz_exponent(p.nonlin);
  const ScatteringCondition cond = check_scattering_condition(p, alpha);
  if (!p.nonlin.is_none() && !cond.holds) {
    std::ostringstream msg;
    msg << "compute_psi_plus0: scattering condition fails: "
        << cond.lhs << " < " << cond.rhs << " does not hold";
    throw PreconditionError(msg.str());
  }
  if (traj.kept_fields.empty() ||
      std::abs(traj.kept_fields.front().time) > 1e-12) {
    throw PreconditionError(
        "compute_psi_plus0: trajectory must keep fields starting at t = 0");
  }
  if (traj.samples.back().t < T_max * (1.0 - 1e-9)) {
    throw PreconditionError("compute_psi_plus0: trajectory ends before T_max");
  }

  // Thin the kept fields within [0, T_max] to at most max_nodes.
  std::vector<const SpinorField*> nodes;
  for (const auto& f : traj.kept_fields) {
    if (f.time <= T_max * (1.0 + 1e-12)) nodes.push_back(&f);
  }
  while (static_cast<int>(nodes.size()) > max_nodes) {
    std::vector<const SpinorField*> thin;
    for (size_t i = 0; i < nodes.size(); i += 2) thin.push_back(nodes[i]);
    if (thin.back() != nodes.back()) thin.push_back(nodes.back());
    nodes.swap(thin);
  }
  if (nodes.size() < 3) {
    throw PreconditionError("compute_psi_plus0: too few quadrature nodes");
  }

  const PhysicalParams lin = linear_of(p);
  const SpinorField& psi0 = *nodes.front();

  ScatteringReport rep;
  rep.T_max = nodes.back()->time;
  rep.kappa = cond.kappa;
  rep.nodes_used = static_cast<int>(nodes.size());
  rep.psi_plus0 = psi0;

  // Trapezoid weights on the node times; on uniform spacing the
  // Euler-Maclaurin endpoint correction is folded into the first and last
  // four weights (one-sided 3rd-order derivative stencils), which keeps the
  // early part of the integral accurate enough that the residual rate fit
  // is not limited by quadrature error.
  const size_t nn = nodes.size();
  std::vector<Real> weights(nn, 0.0);
  for (size_t j = 0; j < nn; ++j) {
    const Real tau = nodes[j]->time;
    if (j == 0) {
      weights[j] = 0.5 * (nodes[1]->time - tau);
    } else if (j + 1 == nn) {
      weights[j] = 0.5 * (tau - nodes[j - 1]->time);
    } else {
      weights[j] = 0.5 * (nodes[j + 1]->time - nodes[j - 1]->time);
    }
  }
  {
    const Real hstep = nodes[1]->time - nodes[0]->time;
    bool uniform = nn >= 8 && hstep > 0;
    for (size_t j = 1; j + 1 < nn && uniform; ++j) {
      uniform = std::abs((nodes[j + 1]->time - nodes[j]->time) - hstep) <
                1e-6 * hstep;
    }
    if (uniform) {
      static const Real stencil[4] = {-11.0, 18.0, -9.0, 2.0};
      for (int q = 0; q < 4; ++q) {
        weights[q] += hstep / 72.0 * stencil[q];
        weights[nn - 1 - q] += hstep / 72.0 * stencil[q];
      }
    }
  }

  SpinorArray acc = SpinorArray::Zero(4, psi0.values.cols());
  for (size_t j = 0; j < nn; ++j) {
    const Real tau = nodes[j]->time;
    const SpinorField f = source_field(*nodes[j], p.nonlin);
    const SpinorField pulled =
        (tau == 0.0) ? f : propagator_apply(f, tau, 0.0, lin, traj.options);
    rep.integrand_norms.emplace_back(tau, std::sqrt(energy(pulled)));
    acc += weights[j] * pulled.values;
  }
  rep.psi_plus0.values += acc;

  // Tail bound from the Lemma-2.3 exponent with the constant estimated on
  // the late nodes.
  const Real norm0 = std::sqrt(energy(psi0));
  if (cond.kappa < 0.0 && !rep.integrand_norms.empty()) {
    Real cbound = 0.0;
    const size_t nlate = std::min<size_t>(5, rep.integrand_norms.size());
    for (size_t i = rep.integrand_norms.size() - nlate;
         i < rep.integrand_norms.size(); ++i) {
      const auto& [tau, nrm] = rep.integrand_norms[i];
      cbound = std::max(cbound, nrm * std::exp(-cond.kappa * tau));
    }
    rep.tail_bound =
        cbound * std::exp(cond.kappa * rep.T_max) / std::abs(cond.kappa);
  } else {
    rep.tail_bound = std::numeric_limits<Real>::infinity();
  }
  if (!p.nonlin.is_none() && !(rep.tail_bound < 1e-6 * norm0)) {
    Real treq = rep.T_max;
    if (cond.kappa < 0 && rep.tail_bound > 0 &&
        std::isfinite(rep.tail_bound)) {
      treq += std::log(1e-6 * norm0 / rep.tail_bound) / cond.kappa;
    }
    std::ostringstream msg;
    msg << "compute_psi_plus0: T_max too small, tail bound "
        << rep.tail_bound << " exceeds 1e-6*||psi0||; need T_max >= " << treq;
    throw PreconditionError(msg.str());
  }

  SpinorField diff = rep.psi_plus0;
  diff.values -= psi0.values;
  rep.correction_norm = std::sqrt(energy(diff));
  return rep;
}

ResidualReport verify_asymptotic_freeness(const Trajectory& traj,
                                          const SpinorField& psi_plus0,
                                          const PhysicalParams& p,
                                          Real fit_t_lo, Real fit_t_hi) {
  ResidualReport rep;
  rep.predicted_rate =
      0.5 * delta_plus(p) * (1.0 + lipschitz_exponent(p.nonlin));
  if (traj.kept_fields.empty()) {
    throw PreconditionError(
        "verify_asymptotic_freeness: trajectory has no kept fields");
  }
  const PhysicalParams lin = linear_of(p);

  SpinorField free_state = psi_plus0;
  for (const auto& f : traj.kept_fields) {
    if (f.time > free_state.time) {
      free_state = propagator_apply(free_state, free_state.time, f.time, lin,
                                    traj.options);
    }
    SpinorField diff = f;
    diff.values -= free_state.values;
    rep.series.emplace_back(f.time, std::sqrt(energy(diff)));
  }

  // Window defaults to the late half of the run.
  const Real t0 = rep.series.front().first;
  const Real t1 = rep.series.back().first;
  if (fit_t_lo < t0) fit_t_lo = t0 + 0.5 * (t1 - t0);
  fit_t_hi = std::min(fit_t_hi, t1);

  rep.decreasing_late = true;
  Real st = 0, sy = 0, stt = 0, sty = 0;
  size_t cnt = 0;
  Real prev_r = -1.0;
  for (const auto& [t, r] : rep.series) {
    if (t < fit_t_lo || t > fit_t_hi) continue;
    if (prev_r >= 0 && r > prev_r * (1.0 + 1e-9)) {
      rep.decreasing_late = false;
    }
    prev_r = r;
    if (r > 0) {
      const Real y = std::log(r);
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
      ++cnt;
    }
  }
  if (cnt >= 2 && stt * cnt - st * st > 0) {
    rep.fitted_rate = (cnt * sty - st * sy) / (cnt * stt - st * st);
  }
  rep.passed =
      rep.decreasing_late && rep.fitted_rate <= 0.8 * rep.predicted_rate;
  return rep;
}

}  // namespace dsdirac

#include "dsdirac/runner.hpp"

#include "dsdirac/desitter.hpp"
#include "dsdirac/kernel_engine.hpp"
#include "dsdirac/quadrature.hpp"
#include "dsdirac/special_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace dsdirac {

namespace {

using nlohmann::json;

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  out << content;
}

json check_to_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"applicable", c.applicable},
              {"passed", c.passed},
              {"max_violation", c.max_violation},
              {"at_t", c.at_t},
              {"detail", c.detail}};
}

std::string out_dir(const Scenario& sc, const std::string& override_dir) {
  return override_dir.empty() ? sc.output_dir + "/" + sc.name : override_dir;
}

}  // namespace

RunArtifacts run_scenario(const Scenario& sc, bool write_files,
                          const std::string& out_dir_override) {
  RunArtifacts art;

  // Physical preconditions, validated and logged before any compute.
  art.potential_check =
      verify_potential(sc.params.potential, sc.grid, sc.run.t_end);
  if (!sc.params.potential.is_zero() && !art.potential_check.self_adjoint) {
    throw PreconditionError(
        "run_scenario: potential is not self-adjoint (max deviation " +
        format17(art.potential_check.max_self_adjoint_dev) + ")");
  }

  const SpinorField initial = build_initial_field(sc);
  const Trajectory traj =
      evolve(initial, sc.run.t_end, sc.params, evolve_options(sc));
  art.outcome = traj.outcome;
  art.detected_t_star =
      traj.outcome == RunOutcome::BlowUp
          ? std::optional<Real>(traj.trigger_time)
          : std::nullopt;

  DiagnosticReport rep;
  if (sc.checks.energy_identity) {
    rep.checks.push_back(check_energy_identity(traj, sc.params));
  }
  if (sc.checks.decay_envelope) {
    rep.checks.push_back(check_decay_envelope(traj, sc.params));
  }
  if (sc.checks.gamma2_law) {
    rep.checks.push_back(check_gamma2_law(traj, sc.params));
  }
  if (sc.checks.chiral_bound) {
    rep.checks.push_back(check_chiral_bound(traj, sc.params));
  }
  if (sc.checks.support) {
    rep.checks.push_back(check_support(traj, sc.params));
  }
  art.diagnostics = rep;
  art.timeseries = timeseries_csv(traj, sc.params);

  json summary;
  summary["scenario"] = sc.name;
  summary["outcome"] =
      traj.outcome == RunOutcome::BlowUp ? "blow_up" : "completed";
  if (art.detected_t_star) summary["trigger_time"] = *art.detected_t_star;
  summary["initial_energy"] = traj.initial_energy;
  summary["final_time"] = traj.samples.back().t;
  summary["final_energy"] = traj.samples.back().energy;
  summary["preconditions"] = {
      {"potential_self_adjoint", art.potential_check.self_adjoint},
      {"potential_self_adjoint_dev",
       art.potential_check.max_self_adjoint_dev},
      {"potential_gamma2_condition", art.potential_check.gamma2_condition},
      {"potential_gamma2_dev", art.potential_check.max_gamma2_dev}};
  json jchecks = json::array();
  for (const auto& c : rep.checks) jchecks.push_back(check_to_json(c));
  summary["checks"] = jchecks;
  summary["all_checks_passed"] = rep.all_passed();
  art.summary_json = summary.dump(2);

  if (write_files) {
    const std::string dir = out_dir(sc, out_dir_override);
    write_file(dir, "timeseries.csv", art.timeseries);
    write_file(dir, "summary.json", art.summary_json);
  }
  return art;
}

OracleComparison compare_oracles(const Scenario& sc, int n_points,
                                 unsigned seed, bool write_files,
                                 const std::string& out_dir_override) {
  if (!sc.params.is_linear() || !sc.params.potential.is_zero()) {
    throw PreconditionError("compare_oracles: requires a linear free scenario");
  }
  const SpinorData data = initial_data(sc);
  const SpinorField initial = build_initial_field(sc);
  if (sc.initial.normalize_energy) {
    throw PreconditionError(
        "compare_oracles: normalize_energy breaks the analytic datum match");
  }

  EvolveOptions opts = evolve_options(sc);
  opts.keep_fields_stride = 1;
  opts.record_support = false;
  const Trajectory traj = evolve(initial, sc.run.t_end, sc.params, opts);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<Real> uni(0.0, 1.0);
  const Real rdata = data.support_radius > 0 ? data.support_radius : sc.grid.L;

  OracleComparison cmp;
  std::vector<Spinor> fd, rep;
  for (int p = 0; p < n_points; ++p) {
    // Random sample time (away from 0) and a point inside the bulk of the
    // influence region at that time.
    const size_t nk = traj.kept_fields.size();
    const size_t ks = nk / 3 + static_cast<size_t>(uni(rng) * (nk - nk / 3));
    const SpinorField& snap = traj.kept_fields[std::min(ks, nk - 1)];
    const Real t = snap.time;
    const Real rmax = 0.8 * (rdata * 0.5 + phi(t, sc.params.H));
    Vec3 x;
    do {
      x = Vec3(2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0,
               2.0 * uni(rng) - 1.0) *
          rmax;
    } while (x.norm() > rmax);
    x += sc.initial.center;
    // Snap to the nearest grid node so no interpolation enters the
    // comparison.
    const Real h = sc.grid.dx();
    Eigen::Vector3i idx;
    for (int d = 0; d < 3; ++d) {
      idx(d) = sc.grid.wrap(
          static_cast<int>(std::llround((x(d) + sc.grid.L) / h)));
      x(d) = -sc.grid.L + h * idx(d);
    }
    const long col = sc.grid.index(idx(0), idx(1), idx(2));
    fd.push_back(Spinor(snap.values.col(col)));
    rep.push_back(
        free_dirac_solution(data, x, t, sc.params.H, sc.params.m));
    OraclePoint op;
    op.x = x;
    op.t = t;
    cmp.points.push_back(op);
  }
  Real scale = 0.0;
  for (size_t i = 0; i < fd.size(); ++i) {
    scale = std::max({scale, fd[i].norm(), rep[i].norm()});
  }
  cmp.scale = scale;
  for (size_t i = 0; i < fd.size(); ++i) {
    cmp.points[i].deviation =
        scale > 0 ? (fd[i] - rep[i]).norm() / scale : 0.0;
    cmp.max_rel_deviation =
        std::max(cmp.max_rel_deviation, cmp.points[i].deviation);
  }

  json summary;
  summary["scenario"] = sc.name;
  summary["max_rel_deviation"] = cmp.max_rel_deviation;
  summary["scale"] = cmp.scale;
  json pts = json::array();
  for (const auto& p : cmp.points) {
    pts.push_back({{"x", {p.x(0), p.x(1), p.x(2)}},
                   {"t", p.t},
                   {"deviation", p.deviation}});
  }
  summary["points"] = pts;
  cmp.summary_json = summary.dump(2);
  if (write_files) {
    write_file(out_dir(sc, out_dir_override), "compare_oracles.json",
               cmp.summary_json);
  }
  return cmp;
}

BlowupArtifacts run_predict_blowup(const Scenario& sc, bool write_files,
                                   const std::string& out_dir_override) {
  if (!sc.blowup) {
    throw ConfigError("run_predict_blowup: scenario has no 'blowup' block");
  }
  BlowupArtifacts art;
  const SpinorField initial = build_initial_field(sc);
  BlowupParams bp;
  bp.H = sc.params.H;
  bp.m = sc.params.m;
  bp.c0 = sc.blowup->c0;
  bp.alpha = sc.blowup->alpha;
  bp.R = sc.blowup->R;
  bp.E0 = energy(initial);
  art.measured_E0 = bp.E0;

  if (bp.H > 0) {
    art.threshold = threshold_energy(bp);
    art.predicted_T = predict_T_expanding(bp);
  } else if (bp.H < 0) {
    art.threshold =
        std::pow(0.5 * bp.c0 * bp.alpha *
                     cone_integral_limit(bp.R, bp.H, bp.alpha),
                 -2.0 / bp.alpha);
    art.predicted_T = predict_T_contracting(bp);
  } else {
    throw PreconditionError("run_predict_blowup: H must be nonzero");
  }

  const Trajectory traj =
      evolve(initial, sc.run.t_end, sc.params, evolve_options(sc));
  art.detected_t_star = detect_blowup(traj);
  if (art.predicted_T && art.detected_t_star) {
    art.margin = *art.detected_t_star / *art.predicted_T;
  }

  // Energy series with the proof's lower-bound envelope
  // E(t) >= e^{-At} [E0^{-a/2} - (a/2) c0 int_0^t K e^{-A a s/2} ds]^{-2/a}.
  const Real A = 3.0 * bp.H + 2.0 * std::abs(bp.m.imag());
  std::ostringstream csv;
  csv << "t,E,E_theory_lower_bound\n";
  for (const auto& s : traj.samples) {
    Real lb = std::numeric_limits<Real>::quiet_NaN();
    const Real hist = integrate_adaptive_real(
        [&](Real u) {
          return std::pow(bp.R + phi(u, bp.H), -1.5 * bp.alpha) *
                 std::exp(-0.5 * A * bp.alpha * u);
        },
        0.0, s.t, 1e-10);
    const Real bracket =
        std::pow(bp.E0, -0.5 * bp.alpha) - 0.5 * bp.alpha * bp.c0 * hist;
    if (bracket > 0) {
      lb = std::exp(-A * s.t) * std::pow(bracket, -2.0 / bp.alpha);
    }
    csv << format17(s.t) << ',' << format17(s.energy) << ',' << format17(lb)
        << '\n';
  }
  art.energy_csv = csv.str();

  json summary;
  summary["scenario"] = sc.name;
  summary["threshold"] = art.threshold;
  summary["measured_E0"] = art.measured_E0;
  if (art.predicted_T) {
    summary["predicted_T"] = *art.predicted_T;
  } else {
    summary["predicted_T"] = nullptr;
    summary["prediction_note"] = "outside theorem scope (subcritical data)";
  }
  if (art.detected_t_star) {
    summary["detected_t_star"] = *art.detected_t_star;
  } else {
    summary["detected_t_star"] = nullptr;
  }
  summary["margin"] = art.margin;
  art.summary_json = summary.dump(2);
  if (write_files) {
    const std::string dir = out_dir(sc, out_dir_override);
    write_file(dir, "blowup.json", art.summary_json);
    write_file(dir, "blowup_energy.csv", art.energy_csv);
  }
  return art;
}

ScatteringArtifacts run_scattering(const Scenario& sc, bool write_files,
                                   const std::string& out_dir_override) {
  if (!sc.scattering) {
    throw ConfigError("run_scattering: scenario has no 'scattering' block");
  }
  ScatteringArtifacts art;
  const Real alpha = lipschitz_exponent(sc.params.nonlin);
  art.condition = check_scattering_condition(sc.params, alpha);
  if (!sc.params.nonlin.is_none() && !art.condition.holds) {
    throw PreconditionError(
        "run_scattering: condition 4|Im m| + 2|Im m| a < 3 H a fails (" +
        format17(art.condition.lhs) + " >= " + format17(art.condition.rhs) +
        ")");
  }

  Scenario run_sc = sc;
  run_sc.run.t_end = std::max(sc.run.t_end, sc.scattering->T_max);
  EvolveOptions opts = evolve_options(run_sc);
  if (opts.keep_fields_stride <= 0) opts.keep_fields_stride = 1;
  const SpinorField initial = build_initial_field(run_sc);
  const Trajectory traj =
      evolve(initial, run_sc.run.t_end, run_sc.params, opts);

  art.report = compute_psi_plus0(traj, run_sc.params, sc.scattering->T_max,
                                 sc.scattering->max_nodes);
  art.residual = verify_asymptotic_freeness(
      traj, art.report.psi_plus0, run_sc.params, sc.scattering->fit_t_lo,
      sc.scattering->fit_t_hi);

  std::ostringstream csv;
  csv << "t,residual\n";
  for (const auto& [t, r] : art.residual.series) {
    csv << format17(t) << ',' << format17(r) << '\n';
  }
  art.residual_csv = csv.str();

  json summary;
  summary["scenario"] = sc.name;
  summary["condition"] = {{"holds", art.condition.holds},
                          {"lhs", art.condition.lhs},
                          {"rhs", art.condition.rhs}};
  summary["kappa"] = art.condition.kappa;
  summary["T_max"] = art.report.T_max;
  summary["tail_bound"] = art.report.tail_bound;
  summary["correction_norm"] = art.report.correction_norm;
  summary["nodes_used"] = art.report.nodes_used;
  summary["fitted_rate"] = art.residual.fitted_rate;
  summary["predicted_rate"] = art.residual.predicted_rate;
  summary["residual_decreasing"] = art.residual.decreasing_late;
  summary["passed"] = art.residual.passed;
  art.summary_json = summary.dump(2);
  if (write_files) {
    const std::string dir = out_dir(sc, out_dir_override);
    write_file(dir, "scattering.json", art.summary_json);
    write_file(dir, "scattering_residual.csv", art.residual_csv);
  }
  return art;
}

bool selftest(std::ostream& out) {
  bool all = true;
  const auto emit = [&](const std::string& name, Real value, bool pass) {
    out << name << ',' << format17(value) << ',' << (pass ? "pass" : "FAIL")
        << '\n';
    all = all && pass;
  };

  // Gamma-matrix identities, exact.
  {
    Real dev = 0.0;
    const Matrix4c eta = (Matrix4c() << 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0,
                          0, 0, 0, -1)
                             .finished();
    const auto gm = [&](int mu) -> const Matrix4c& {
      return mu == 0 ? gamma0() : gamma(mu);
    };
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        const Matrix4c anti = gm(mu) * gm(nu) + gm(nu) * gm(mu) -
                              2.0 * eta(mu, nu) * identity4();
        dev = std::max(dev, anti.cwiseAbs().maxCoeff());
      }
    }
    const Matrix4c g5 =
        -kImag * gamma0() * gamma(1) * gamma(2) * gamma(3);
    dev = std::max(dev, (g5 - gamma5()).cwiseAbs().maxCoeff());
    emit("gamma_identities_max_dev", dev, dev == 0.0);
  }

  // Kernel closed forms against the hypergeometric route.
  {
    Real worst = 0.0;
    for (Real H : {0.5, 1.0, 2.0}) {
      for (Real mval : {0.5, 1.5, -0.5}) {
        const KernelSpec spec{Complex(mval * H, 0.0), H};
        for (int it = 1; it <= 5; ++it) {
          const Real t = 0.4 * it / H;
          const Real r = 0.7 * phi(t, H);
          const Complex a = kernel_K1(r, t, spec);
          const Complex b = kernel_K1_generic(r, t, spec);
          worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
      }
    }
    emit("kernel_closed_form_rel_dev", worst, worst < 1e-10);
  }

  // Hypergeometric log identity.
  {
    const Complex f = gauss_2f1(1.0, 1.0, 2.0, 0.5);
    const Real dev = std::abs(f - Complex(2.0 * std::log(2.0)));
    emit("gauss_2f1_log_identity_dev", dev, dev < 1e-13);
  }

  // phi series switch-over.
  {
    const Real dev =
        std::abs(phi(2.5, 0.0) - 2.5) +
        std::abs(phi(1e-7, 1.0) - (1.0 - std::exp(-1e-7)));
    emit("phi_series_dev", dev, dev < 1e-15);
  }

  // Sphere rule exactness on an even monomial: mean of x^2 = 1/3.
  {
    const Complex m = sphere_mean(
        [](const Vec3& y) { return Complex(y(0) * y(0), 0.0); },
        sphere_rule());
    const Real dev = std::abs(m - Complex(1.0 / 3.0));
    emit("sphere_rule_monomial_dev", dev, dev < 1e-14);
  }

  // Free conservation on a small grid: E e^{3Ht} constant for real m.
  {
    Scenario sc;
    sc.name = "selftest_free";
    sc.grid = Grid3(16, 2.0);
    sc.params.H = 1.0;
    sc.params.m = 0.4;
    sc.initial.profile = InitialSpec::Profile::GaussianBump;
    sc.initial.amplitude = 1.0;
    sc.initial.width = 0.5;
    sc.run.t_end = 0.4;
    sc.run.cfl = 0.15;
    sc.run.sample_dt = 0.1;
    const SpinorField f0 = build_initial_field(sc);
    const Trajectory traj =
        evolve(f0, sc.run.t_end, sc.params, evolve_options(sc));
    Real worst = 0.0;
    for (const auto& s : traj.samples) {
      worst = std::max(worst, std::abs(s.energy * std::exp(3.0 * s.t) /
                                           traj.initial_energy -
                                       1.0));
    }
    emit("free_energy_law_dev", worst, worst < 1e-5);

    // Deterministic reduction: recomputing the same integral is bit-equal.
    const Real e1 = energy(traj.final_field);
    const Real e2 = energy(traj.final_field);
    emit("deterministic_reduction_dev", std::abs(e1 - e2), e1 == e2);
  }

  // Cone integral closed form vs quadrature (contracting branch).
  {
    const Real closed = cone_integral(1.2, 0.5, -1.0, 1.0);
    const Real quad = cone_integral_quadrature(1.2, 0.5, -1.0, 1.0);
    const Real dev = std::abs(closed - quad) / std::abs(quad);
    emit("cone_integral_closed_vs_quad", dev, dev < 1e-8);
  }

  return all;
}

}  // namespace dsdirac

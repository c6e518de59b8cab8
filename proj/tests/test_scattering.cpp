#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsdirac/diagnostics.hpp"
#include "dsdirac/scattering.hpp"

#include <cmath>

using namespace dsdirac;

namespace {

SpinorField gaussian_field(const Grid3& g, Real amp, Real sigma,
                           const Spinor& dir) {
  return sample_to_grid(
      spinor_data_from_profile(gaussian_profile(amp, sigma, Vec3::Zero()),
                               dir),
      g, 0.0);
}

Trajectory run_with_fields(const SpinorField& f0, Real t_end,
                           const PhysicalParams& p, Real sample_dt = 0.1,
                           Real cfl = 0.3) {
  EvolveOptions opts;
  opts.cfl = cfl;
  opts.sample_dt = sample_dt;
  opts.keep_fields_stride = 1;
  opts.record_support = false;
  return evolve(f0, t_end, p, opts);
}

}  // namespace

TEST_CASE("scattering condition: pinned inequality cases") {
  PhysicalParams p;
  p.H = 1.0;

  // real mass: condition holds for any positive exponent
  p.m = Complex(0.7, 0.0);
  for (Real alpha : {0.5, 1.0, 2.0}) {
    CHECK(check_scattering_condition(p, alpha).holds);
  }

  // H=1, m=0.5i, alpha=1: 4*0.5 + 2*0.5 = 3 is not < 3 (strictness)
  p.m = Complex(0.0, 0.5);
  {
    const auto c = check_scattering_condition(p, 1.0);
    CHECK(!c.holds);
    CHECK(c.lhs == doctest::Approx(3.0));
    CHECK(c.rhs == doctest::Approx(3.0));
  }
  // H=1, m=0.25i, alpha=1: 1 + 0.5 < 3
  p.m = Complex(0.0, 0.25);
  CHECK(check_scattering_condition(p, 1.0).holds);

  // exponents assembled from delta_+-: m real, alpha = 2 gives kappa = -3H
  p.m = Complex(0.4, 0.0);
  const auto c = check_scattering_condition(p, 2.0);
  CHECK(c.kappa == doctest::Approx(-3.0));
  CHECK(c.residual_rate == doctest::Approx(-4.5));
}

TEST_CASE("zero nonlinearity: psi_plus0 equals psi_0 exactly") {
  const Grid3 g(16, 1.5);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.4, 0.0);

  const SpinorField f0 = gaussian_field(
      g, 0.8, 0.45,
      (Spinor() << 1.0, Complex(0.2, 0.3), 0.0, 0.1).finished());
  const Trajectory traj = run_with_fields(f0, 2.0, p, 0.1, 0.12);
  const ScatteringReport rep = compute_psi_plus0(traj, p, 2.0);
  CHECK((rep.psi_plus0.values - f0.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rep.correction_norm == 0.0);

  // residual against the free solution is solver noise only
  const ResidualReport rr =
      verify_asymptotic_freeness(traj, rep.psi_plus0, p);
  for (const auto& [t, r] : rr.series) {
    CHECK(r < 1e-5 * std::sqrt(traj.initial_energy));
  }

  // zero data: residual identically zero
  const Trajectory zero_traj = run_with_fields(SpinorField(g, 0.0), 1.0, p);
  const ScatteringReport zrep = compute_psi_plus0(zero_traj, p, 1.0);
  const ResidualReport zr =
      verify_asymptotic_freeness(zero_traj, zrep.psi_plus0, p);
  for (const auto& [t, r] : zr.series) CHECK(r == 0.0);
}

TEST_CASE("cubic correction: amplitude scaling and source linearity") {
  const Grid3 g(16, 2.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.5, 0.0);
  p.nonlin = make_chiral_default();

  const Spinor dir =
      (Spinor() << 1.0, Complex(0.3, 0.2), 0.2, 0.1).finished().normalized();

  const auto correction = [&](Real amp) {
    const SpinorField f0 = gaussian_field(g, amp, 0.45, dir);
    const Trajectory traj = run_with_fields(f0, 6.0, p);
    return compute_psi_plus0(traj, p, 6.0).correction_norm;
  };
  const Real c1 = correction(0.5);
  const Real c2 = correction(0.25);
  CHECK(c1 > 0.0);
  const Real ratio = c1 / c2;
  CHECK(ratio > 6.4);   // cubic scaling: 8x per halving, within 20%
  CHECK(ratio < 9.6);

  // doubling the coefficient functions doubles the correction exactly
  const SpinorField f0 = gaussian_field(g, 0.5, 0.45, dir);
  const Trajectory traj = run_with_fields(f0, 6.0, p);
  const SpinorField base = compute_psi_plus0(traj, p, 6.0).psi_plus0;

  PhysicalParams p2 = p;
  p2.nonlin.alpha_fn = [](Real xi, Real) { return 2.0 * xi; };
  p2.nonlin.beta_fn = [](Real, Real eta) { return 2.0 * eta; };
  const SpinorField doubled = compute_psi_plus0(traj, p2, 6.0).psi_plus0;

  SpinorArray lin = f0.values + 2.0 * (base.values - f0.values);
  const Real dev = (doubled.values - lin).cwiseAbs().maxCoeff();
  CHECK(dev < 1e-13 * (1.0 + lin.cwiseAbs().maxCoeff()));
}

TEST_CASE("psi_plus0 is stable under T_max doubling") {
  const Grid3 g(16, 2.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.5, 0.0);
  p.nonlin = make_chiral_default();

  const SpinorField f0 = gaussian_field(
      g, 0.5, 0.45,
      (Spinor() << 1.0, Complex(0.3, 0.2), 0.2, 0.1).finished().normalized());
  const Trajectory traj = run_with_fields(f0, 12.0, p, 0.2);

  const ScatteringReport r1 = compute_psi_plus0(traj, p, 6.0);
  const ScatteringReport r2 = compute_psi_plus0(traj, p, 12.0);
  SpinorField diff = r2.psi_plus0;
  diff.values -= r1.psi_plus0.values;
  CHECK(std::sqrt(energy(diff)) <= r1.tail_bound);
  CHECK(r1.tail_bound < 1e-6 * std::sqrt(traj.initial_energy));
}

TEST_CASE("refusals: failed condition and insufficient horizon") {
  const Grid3 g(12, 1.5);

  // strict inequality fails at H=1, m=0.5i, alpha=1
  {
    PhysicalParams p;
    p.H = 1.0;
    p.m = Complex(0.0, 0.5);
    p.nonlin.kind = NonlinKind::PowerAbsPsi;
    p.nonlin.alpha = 1.0;
    const SpinorField f0 = gaussian_field(
        g, 0.05, 0.4, (Spinor() << 1, 0, 0, 0).finished());
    const Trajectory traj = run_with_fields(f0, 1.0, p);
    CHECK_THROWS_AS(compute_psi_plus0(traj, p, 1.0), PreconditionError);
  }

  // horizon too short for the 1e-6 tail bound
  {
    PhysicalParams p;
    p.H = 1.0;
    p.m = Complex(0.5, 0.0);
    p.nonlin = make_chiral_default();
    const SpinorField f0 = gaussian_field(
        g, 0.5, 0.4,
        (Spinor() << 1.0, 0.3, 0.2, 0.1).finished().normalized());
    const Trajectory traj = run_with_fields(f0, 1.0, p, 0.05);
    CHECK_THROWS_AS(compute_psi_plus0(traj, p, 1.0), PreconditionError);
  }
}

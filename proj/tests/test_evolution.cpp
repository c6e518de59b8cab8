#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsdirac/diagnostics.hpp"
#include "dsdirac/evolution.hpp"

#include <cmath>

using namespace dsdirac;

namespace {

constexpr Real kPi = 3.14159265358979323846264338327950288;

SpinorField constant_field(const Grid3& g, const Spinor& value) {
  SpinorField f(g, 0.0);
  for (long c = 0; c < f.values.cols(); ++c) f.values.col(c) = value;
  return f;
}

SpinorField gaussian_field(const Grid3& g, Real amp, Real sigma,
                           const Spinor& dir) {
  return sample_to_grid(
      spinor_data_from_profile(gaussian_profile(amp, sigma, Vec3::Zero()),
                               dir),
      g, 0.0);
}

// exp(-i m g0 t) psi: components 1,2 get exp(-i m t), components 3,4 the
// opposite phase.
Spinor mass_rotation(const Spinor& psi, Complex m, Real t) {
  Spinor out;
  const Complex up = std::exp(-kImag * m * t);
  const Complex dn = std::exp(kImag * m * t);
  out(0) = up * psi(0);
  out(1) = up * psi(1);
  out(2) = dn * psi(2);
  out(3) = dn * psi(3);
  return out;
}

}  // namespace

TEST_CASE("rhs: constants and zero field") {
  const Grid3 g(8, 1.0);
  PhysicalParams p;
  p.H = 0.7;
  p.m = Complex(0.4, 0.0);

  const SpinorField zero(g, 0.0);
  CHECK(rhs(zero, 0.3, p).values.cwiseAbs().maxCoeff() == 0.0);

  const Spinor c = (Spinor() << Complex(1.0, 0.5), Complex(-0.3, 0.2),
                    Complex(0.0, -1.1), Complex(0.6, 0.0))
                       .finished();
  const SpinorField cf = constant_field(g, c);
  const SpinorField r = rhs(cf, 0.3, p);
  const Spinor expect = -1.5 * p.H * c - kImag * p.m * (gamma0() * c);
  for (long col = 0; col < r.values.cols(); ++col) {
    CHECK((Spinor(r.values.col(col)) - expect).norm() < 1e-14);
  }
}

TEST_CASE("rhs: single Fourier mode reproduces the stencil symbol") {
  const Grid3 g(16, 1.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.3, -0.1);
  const Real t = 0.37;

  const Eigen::Vector3i mode(2, -1, 3);
  const Vec3 k(kPi / g.L * mode(0), kPi / g.L * mode(1), kPi / g.L * mode(2));
  const Spinor u = (Spinor() << Complex(0.7, 0.1), Complex(-0.2, 0.4),
                    Complex(0.3, 0.0), Complex(0.0, -0.5))
                       .finished();

  SpinorField f(g, t);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int kk = 0; kk < g.n; ++kk) {
        f.values.col(g.index(i, j, kk)) =
            u * std::exp(kImag * k.dot(g.point(i, j, kk)));
      }
    }
  }
  const SpinorField r = rhs(f, t, p);

  // modified wavenumber of the 4th-order stencil
  const Real dx = g.dx();
  Vec3 khat;
  for (int d = 0; d < 3; ++d) {
    khat(d) =
        (8.0 * std::sin(k(d) * dx) - std::sin(2.0 * k(d) * dx)) / (6.0 * dx);
  }
  Matrix4c sym = -1.5 * p.H * identity4();
  for (int d = 0; d < 3; ++d) {
    sym -= std::exp(-p.H * t) * kImag * khat(d) * alpha(d + 1);
  }
  sym -= kImag * p.m * gamma0();

  Real worst = 0.0;
  for (int i = 0; i < g.n; i += 5) {
    for (int j = 0; j < g.n; j += 3) {
      const long col = g.index(i, j, (2 * i) % g.n);
      const Spinor expect = sym * Spinor(f.values.col(col));
      worst = std::max(worst, (Spinor(r.values.col(col)) - expect).norm());
    }
  }
  CHECK(worst < 1e-12);

  // the stencil symbol is itself 4th-order close to the analytic one
  CHECK((khat - k).norm() < 0.05 * k.norm());
}

TEST_CASE("step: identity at dt = 0, exact ODE, 4th-order convergence") {
  const Grid3 g(8, 1.0);
  PhysicalParams p;
  p.H = 0.8;
  p.m = Complex(0.6, 0.25);  // complex mass

  const Spinor c = (Spinor() << Complex(0.9, -0.2), Complex(0.1, 0.3),
                    Complex(-0.4, 0.0), Complex(0.2, 0.6))
                       .finished();
  SpinorField f = constant_field(g, c);

  const SpinorField same = step(f, 0.0, 0.0, p);
  CHECK((same.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  const auto run_to = [&](Real dt, Real t_end) {
    SpinorField u = f;
    Real t = 0.0;
    while (t < t_end - 1e-12) {
      u = step(u, t, dt, p);
      t += dt;
    }
    return u;
  };
  const Real t_end = 0.2;
  const Spinor exact =
      std::exp(-1.5 * p.H * t_end) * mass_rotation(c, p.m, t_end);

  const Real e1 = (Spinor(run_to(0.02, t_end).values.col(0)) - exact).norm();
  const Real e2 = (Spinor(run_to(0.01, t_end).values.col(0)) - exact).norm();
  CHECK(e1 < 5e-9);
  CHECK(e1 / e2 > 10.0);  // consistent with 4th order (ratio 16)

  CHECK_THROWS_AS(step(f, 0.0, 2.0 * g.dx(), p), PreconditionError);
}

TEST_CASE("evolve: free decay norm law and the zero trajectory") {
  const Grid3 g(16, 2.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.5, 0.0);

  EvolveOptions opts;
  opts.cfl = 0.25;
  opts.sample_dt = 0.1;
  opts.record_support = false;

  const Spinor dir = (Spinor() << 1.0, Complex(0.2, 0.4), 0.0, 0.3)
                         .finished()
                         .normalized();
  const SpinorField f0 = gaussian_field(g, 1.0, 0.4, dir);
  const Trajectory traj = evolve(f0, 0.8, p, opts);
  CHECK(traj.outcome == RunOutcome::Completed);
  const Real expect = traj.initial_energy * std::exp(-3.0 * p.H * 0.8);
  CHECK(std::abs(traj.samples.back().energy - expect) < 1e-4 * expect);

  const Trajectory zero_traj = evolve(SpinorField(g, 0.0), 0.5, p, opts);
  for (const auto& s : zero_traj.samples) CHECK(s.energy == 0.0);

  // strictly monotone sample times
  for (size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
  }
}

TEST_CASE("evolve: backward nonlinear runs are rejected") {
  const Grid3 g(8, 1.0);
  PhysicalParams p;
  p.nonlin = make_chiral_default();
  SpinorField f(g, 1.0);
  f.values.setConstant(Complex(0.1, 0.0));
  CHECK_THROWS_AS(evolve(f, 0.0, p, {}), PreconditionError);
  CHECK_THROWS_AS(evolve(f, 1.0, p, {}), PreconditionError);  // t_end == t0
}

TEST_CASE("propagator: identity, round trip, group property") {
  const Grid3 g(16, 2.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = Complex(0.4, 0.15);

  EvolveOptions opts;
  opts.cfl = 0.1;
  opts.record_support = false;

  const Spinor dir =
      (Spinor() << 0.6, Complex(0.0, 0.8), 0.1, 0.0).finished().normalized();
  const SpinorField f0 = gaussian_field(g, 1.0, 0.4, dir);

  // S(s,s) = identity, exactly
  const SpinorField same = propagator_apply(f0, 0.0, 0.0, p, opts);
  CHECK((same.values - f0.values).cwiseAbs().maxCoeff() == 0.0);

  // round trip S(0,t) S(t,0)
  const Real t = 0.4;
  const SpinorField fwd = propagator_apply(f0, 0.0, t, p, opts);
  const SpinorField back = propagator_apply(fwd, t, 0.0, p, opts);
  const Real rel = std::sqrt((back.values - f0.values).squaredNorm() /
                             f0.values.squaredNorm());
  CHECK(rel < 1e-5);

  // group property S(t, r) S(r, 0) = S(t, 0)
  const Real r = 0.25;
  const SpinorField via_r =
      propagator_apply(propagator_apply(f0, 0.0, r, p, opts), r, t, p, opts);
  const Real dev = std::sqrt((via_r.values - fwd.values).squaredNorm() /
                             fwd.values.squaredNorm());
  CHECK(dev < 5e-6);

  PhysicalParams nl = p;
  nl.nonlin = make_chiral_default();
  CHECK_THROWS_AS(propagator_apply(f0, 0.0, t, nl, opts), PreconditionError);
}

TEST_CASE("forced linear solve matches the Duhamel representation") {
  const Grid3 g(16, 2.0);
  PhysicalParams base;
  base.H = 1.0;
  base.m = Complex(0.3, 0.0);

  const Spinor fdir =
      (Spinor() << 1.0, 0.0, Complex(0.0, 0.5), 0.0).finished();
  const auto profile = gaussian_profile(0.8, 0.5, Vec3(0.2, 0, 0));
  const auto forcing = [profile, fdir](const Vec3& x, Real t) -> Spinor {
    return std::exp(-t) * (1.0 + 0.3 * std::sin(3.0 * t)) * profile(x) * fdir;
  };

  PhysicalParams forced = base;
  forced.forcing = forcing;

  EvolveOptions opts;
  opts.cfl = 0.25;
  opts.sample_dt = 0.05;
  opts.record_support = false;

  const Spinor dir0 =
      (Spinor() << 0.5, 0.4, 0.0, Complex(0.2, -0.3)).finished();
  const SpinorField f0 = gaussian_field(g, 1.0, 0.45, dir0);
  const Real t_end = 0.4;
  const SpinorField lhs = evolve(f0, t_end, forced, opts).final_field;

  // S(t,0) psi0 + Simpson_j w_j S(t, tau_j) f(tau_j)
  SpinorField rhs_field = propagator_apply(f0, 0.0, t_end, base, opts);
  const int nseg = 16;  // Simpson with 17 nodes
  const Real h = t_end / nseg;
  for (int j = 0; j <= nseg; ++j) {
    const Real tau = j * h;
    Real w = (j == 0 || j == nseg) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    w *= h / 3.0;
    SpinorField src(g, tau);
    for (int i = 0; i < g.n; ++i) {
      for (int jj = 0; jj < g.n; ++jj) {
        for (int kk = 0; kk < g.n; ++kk) {
          src.values.col(g.index(i, jj, kk)) =
              forcing(g.point(i, jj, kk), tau);
        }
      }
    }
    const SpinorField prop =
        (tau == t_end) ? src : propagator_apply(src, tau, t_end, base, opts);
    rhs_field.values += w * prop.values;
  }
  const Real rel = std::sqrt((lhs.values - rhs_field.values).squaredNorm() /
                             lhs.values.squaredNorm());
  CHECK(rel < 1e-4);
}

TEST_CASE("forced energy law holds discretely") {
  const Grid3 g(16, 2.0);
  PhysicalParams p;
  p.H = 0.9;
  p.m = Complex(0.35, 0.0);  // Im m = 0
  const auto profile = gaussian_profile(0.6, 0.5, Vec3::Zero());
  const Spinor fdir = (Spinor() << 0.3, Complex(0, 0.4), 0.2, 0.0).finished();
  p.forcing = [profile, fdir](const Vec3& x, Real t) -> Spinor {
    return std::cos(2.0 * t) * profile(x) * fdir;
  };

  EvolveOptions opts;
  opts.cfl = 0.2;
  opts.sample_dt = 0.02;
  opts.keep_fields_stride = 1;
  opts.record_support = false;

  const SpinorField f0 = gaussian_field(
      g, 1.0, 0.45,
      (Spinor() << 1.0, 0.0, Complex(0.3, 0.1), 0.0).finished());
  const Real t_end = 0.4;
  const Trajectory traj = evolve(f0, t_end, p, opts);

  // d/dt (e^{3Ht} E) = e^{3Ht} * 2 Re int f* psi dx
  std::vector<Real> ts, integrand;
  for (size_t k = 0; k < traj.kept_fields.size(); ++k) {
    const SpinorField& u = traj.kept_fields[k];
    Real acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
      for (int jj = 0; jj < g.n; ++jj) {
        for (int kk = 0; kk < g.n; ++kk) {
          const long col = g.index(i, jj, kk);
          const Spinor fv = p.forcing(g.point(i, jj, kk), u.time);
          acc += fv.dot(Spinor(u.values.col(col))).real();
        }
      }
    }
    acc *= 2.0 * std::pow(g.dx(), 3);
    ts.push_back(u.time);
    integrand.push_back(std::exp(3.0 * p.H * u.time) * acc);
  }
  Real hist = 0.0;
  for (size_t k = 1; k < ts.size(); ++k) {
    hist += 0.5 * (ts[k] - ts[k - 1]) * (integrand[k] + integrand[k - 1]);
  }
  const Real lhs = std::exp(3.0 * p.H * t_end) * traj.samples.back().energy -
                   traj.initial_energy;
  CHECK(std::abs(lhs - hist) < 2e-4 * (std::abs(lhs) + traj.initial_energy));
}

TEST_CASE("blow-up family drives the norm past the cap") {
  const Grid3 g(8, 1.0);
  PhysicalParams p;
  p.H = 1.0;
  p.m = 0.0;
  p.nonlin = make_blowup(1.0, 2.0);

  EvolveOptions opts;
  opts.cfl = 0.3;
  opts.sample_dt = 0.01;
  opts.max_dt = 1e-3;
  opts.norm_cap_factor = 1e4;
  opts.record_support = false;

  // uniform large data on the upper eigenspace
  SpinorField f =
      constant_field(g, (Spinor() << 2.2, 0.0, 0.0, 0.0).finished());
  const Trajectory traj = evolve(f, 2.0, p, opts);
  CHECK(traj.outcome == RunOutcome::BlowUp);
  CHECK(traj.trigger_time > 0.0);
  CHECK(traj.trigger_time < 2.0);
}

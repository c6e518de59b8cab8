#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dsdirac/desitter.hpp"
#include "dsdirac/kernel_engine.hpp"
#include "dsdirac/quadrature.hpp"
#include "dsdirac/spinor_algebra.hpp"

#include "support/wave_oracle.hpp"

#include <cmath>
#include <random>

using namespace dsdirac;

namespace {

constexpr Real kPi = 3.14159265358979323846264338327950288;

Real double_factorial(int n) {
  Real r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

ScalarField3 unbounded(std::function<Complex(const Vec3&)> f) {
  ScalarField3 s;
  s.support_radius = 0.0;
  s.eval = std::move(f);
  return s;
}

}  // namespace

TEST_CASE("sphere rule: monomials up to the design degree") {
  // int_{S^2} x^a y^b z^c dS = 4 pi (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!! for
  // even exponents, 0 otherwise.
  const SphereRule& rule = sphere_rule();
  for (const auto& e : std::vector<std::array<int, 3>>{
           {0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {2, 2, 0},
           {4, 0, 0}, {2, 2, 2}, {6, 0, 0}, {4, 4, 2}, {8, 6, 4},
           {10, 8, 8}, {12, 8, 6}, {1, 0, 0}, {3, 2, 0}, {5, 1, 1}}) {
    Real integral = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3& y = rule.points[q];
      integral += rule.weights[q] * std::pow(y(0), e[0]) *
                  std::pow(y(1), e[1]) * std::pow(y(2), e[2]);
    }
    Real expect = 0.0;
    if (e[0] % 2 == 0 && e[1] % 2 == 0 && e[2] % 2 == 0 &&
        e[0] + e[1] + e[2] <= rule.degree) {
      expect = 4.0 * kPi * double_factorial(e[0] - 1) *
               double_factorial(e[1] - 1) * double_factorial(e[2] - 1) /
               double_factorial(e[0] + e[1] + e[2] + 1);
    }
    CHECK(std::abs(integral - expect) < 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("spherical mean: pinned values") {
  // constant: mean 1, V = radius
  const ScalarField3 one = unbounded([](const Vec3&) { return Complex(1.0); });
  CHECK(std::abs(spherical_mean(one, Vec3(0.3, -0.1, 0.2), 0.7) -
                 Complex(0.7)) < 1e-14);
  // odd integrand at the origin
  const ScalarField3 x1 =
      unbounded([](const Vec3& x) { return Complex(x(0)); });
  CHECK(std::abs(spherical_mean(x1, Vec3::Zero(), 0.9)) < 1e-15);
  // |x|^2 at the origin: mean r^2, V = r^3
  const ScalarField3 r2 =
      unbounded([](const Vec3& x) { return Complex(x.squaredNorm()); });
  for (Real r : {0.4, 1.3}) {
    CHECK(std::abs(spherical_mean(r2, Vec3::Zero(), r) - Complex(r * r * r)) <
          1e-13);
  }
}

TEST_CASE("spherical mean and wave action match the Gaussian closed form") {
  const Real sigma = 0.5;
  const ScalarField3 gauss = gaussian_profile(1.0, sigma, Vec3::Zero());
  std::mt19937 rng(31u);
  std::uniform_real_distribution<Real> uni(0.05, 1.4);
  for (int it = 0; it < 20; ++it) {
    const Real rho = uni(rng);
    const Real r = uni(rng);
    const Vec3 x(rho, 0.0, 0.0);
    const Real v_expect = wave_oracle::gaussian_V(rho, r, sigma);
    CHECK(std::abs(spherical_mean(gauss, x, r) - Complex(v_expect)) <
          1e-12 * (1.0 + std::abs(v_expect)));
    const Real dv_expect = wave_oracle::gaussian_dV_dr(rho, r, sigma);
    CHECK(std::abs(kirchhoff_wave(gauss, x, r) - Complex(dv_expect)) <
          1e-9 * (1.0 + std::abs(dv_expect)));
  }
}

TEST_CASE("kirchhoff wave: initial value and constants") {
  const ScalarField3 gauss = gaussian_profile(0.8, 0.4, Vec3(0.1, 0, -0.2));
  const Vec3 x(0.3, 0.2, 0.0);
  CHECK(std::abs(kirchhoff_wave(gauss, x, 0.0) - gauss(x)) < 1e-9);

  const ScalarField3 c = unbounded([](const Vec3&) { return Complex(2.5); });
  for (Real t : {0.2, 1.0, 2.3}) {
    CHECK(std::abs(kirchhoff_wave(c, Vec3(0.4, 0, 0), t) - Complex(2.5)) <
          1e-10);
  }
}

TEST_CASE("kirchhoff wave agrees with a spectral wave solve") {
  const Real sigma = 0.5;
  const Real L = 4.0;
  const int n = 64;
  const Real h = 2.0 * L / n;
  // smooth non-radial datum: Gaussian times (1 + x/2)
  const auto phi_fn = [sigma](const Vec3& x) {
    return std::exp(-x.squaredNorm() / (2.0 * sigma * sigma)) *
           (1.0 + 0.5 * x(0));
  };
  const ScalarField3 phi_field =
      unbounded([phi_fn](const Vec3& x) { return Complex(phi_fn(x)); });

  const Real t = 0.7;
  for (const auto& idx : std::vector<std::array<int, 3>>{
           {32, 32, 32}, {36, 30, 33}, {40, 32, 28}}) {
    const Vec3 x(-L + h * idx[0], -L + h * idx[1], -L + h * idx[2]);
    const Real ref = wave_oracle::spectral_wave_at_node(phi_fn, n, L, t,
                                                        idx[0], idx[1],
                                                        idx[2]);
    const Complex mine = kirchhoff_wave(phi_field, x, t);
    CHECK(std::abs(mine - Complex(ref)) < 1e-4 * (std::abs(ref) + 0.3));
  }
}

TEST_CASE("apply_K1: trivial time and the half-integer closed form") {
  const ScalarField3 gauss = gaussian_profile(1.0, 0.5, Vec3::Zero());
  const KernelSpec half{Complex(0.5, 0.0), 1.0};
  CHECK(apply_K1(gauss, Vec3(0.2, 0, 0), 0.0, half) == Complex(0.0));

  // K1minus12: apply_K1 at M = +-H/2 equals e^{Ht/2} V_phi(x, phi(t))
  for (Real H : {1.0, 2.0}) {
    for (Real mfac : {0.5, -0.5}) {
      const KernelSpec spec{Complex(mfac * H, 0.0), H};
      for (Real t : {0.4, 1.1}) {
        const Vec3 x(0.25, -0.1, 0.3);
        const Complex via_quad = apply_K1(gauss, x, t, spec);
        const Complex closed =
            std::exp(0.5 * H * t) * spherical_mean(gauss, x, phi(t, H));
        CHECK(std::abs(via_quad - closed) < 1e-7);
        CHECK(std::abs(apply_K1_fast(gauss, x, t, spec) - closed) < 1e-12);
      }
    }
  }
}

TEST_CASE("apply_K1: the 3H/2 closed form matches the quadrature route") {
  const ScalarField3 gauss = gaussian_profile(1.0, 0.5, Vec3::Zero());
  for (Real H : {1.0, 0.5}) {
    const KernelSpec spec{Complex(1.5 * H, 0.0), H};
    for (Real t : {0.5, 1.2}) {
      for (const Vec3& x : {Vec3(0.0, 0, 0), Vec3(0.4, 0.2, -0.1)}) {
        const Complex via_quad = apply_K1(gauss, x, t, spec);
        const Complex via_closed = apply_K1_fast(gauss, x, t, spec);
        CHECK(std::abs(via_quad - via_closed) < 1e-7);
      }
    }
  }
}

TEST_CASE("apply_K1: generic complex M is consistent under refinement") {
  const ScalarField3 gauss = gaussian_profile(1.0, 0.5, Vec3::Zero());
  const KernelSpec spec{Complex(0.5, 0.7), 1.0};  // M+ for m = 0.7, H = 1
  const Vec3 x(0.3, 0.1, 0.0);
  const Real t = 0.8;
  const Complex base = apply_K1(gauss, x, t, spec);
  const Real pt = phi(t, 1.0);
  const Complex tight =
      2.0 * integrate_adaptive(
                [&](Real s) {
                  return kernel_K1(s, t, spec) * kirchhoff_wave(gauss, x, s);
                },
                0.0, pt, 1e-10);
  CHECK(std::abs(base - tight) < 5e-8);
}

TEST_CASE("apply_G: zero source, zero horizon, and the collapsed oracle") {
  const KernelSpec spec{Complex(0.5, 0.35), 1.0};
  SourceField zero;
  zero.support_radius = 0.0;
  zero.eval = [](const Vec3&, Real) { return Complex(0.0); };
  CHECK(apply_G(zero, Vec3(0.1, 0, 0), 0.7, spec) == Complex(0.0));

  SourceField g;
  g.support_radius = 0.0;
  g.eval = [](const Vec3&, Real b) { return Complex(std::exp(-b), 0.1 * b); };
  CHECK(apply_G(g, Vec3(0.2, 0, 0), 0.0, spec) == Complex(0.0));

  // spatially constant source: the wave action collapses to g(b)
  const Real t = 0.9;
  const Complex mine = apply_G(g, Vec3(0.4, -0.2, 0.1), t, spec);
  const Complex expect =
      2.0 * integrate_adaptive(
                [&](Real b) {
                  const Real rmax = phi(t, 1.0) - phi(b, 1.0);
                  return Complex(std::exp(-b), 0.1 * b) *
                         integrate_adaptive(
                             [&](Real r) { return kernel_E(r, t, b, spec); },
                             0.0, rmax, 1e-10);
                },
                0.0, t, 1e-9);
  CHECK(std::abs(mine - expect) < 3e-7);
}

TEST_CASE("free solution: Cauchy datum at t = 0 and m = 0 assembly") {
  const Real H = 1.0;
  const Spinor dir = (Spinor() << Complex(0.8, 0.1), Complex(0.0, 0.3),
                      Complex(-0.2, 0.0), Complex(0.1, -0.4))
                         .finished();
  const SpinorData data =
      spinor_data_from_profile(gaussian_profile(1.0, 0.5, Vec3::Zero()), dir);

  const Vec3 x(0.3, -0.2, 0.1);
  const Spinor at0 = free_dirac_solution(data, x, 0.0, H, 0.0);
  CHECK((at0 - data(x)).norm() < 1e-12);

  // m = 0: independent assembly of the massless display
  const Real t = 0.6;
  const Spinor mine = free_dirac_solution(data, x, t, H, 0.0);

  const auto scalar_w = [&](int j, const Vec3& xp, Real tp) {
    return std::exp(0.5 * H * tp) *
           spherical_mean(data.component[j], xp, phi(tp, H));
  };
  const Real h = 1e-4;
  Spinor w, dwdt;
  std::array<Spinor, 3> dwdx;
  for (int j = 0; j < 4; ++j) {
    w(j) = scalar_w(j, x, t);
    dwdt(j) = derivative_richardson(
        [&](Real tp) { return scalar_w(j, x, tp); }, t, h);
    for (int d = 0; d < 3; ++d) {
      Vec3 e = Vec3::Zero();
      e(d) = 1.0;
      dwdx[d](j) = derivative_richardson(
          [&](Real s) { return scalar_w(j, x + s * e, t); }, 0.0, h);
    }
  }
  Spinor expect = dwdt - 0.5 * H * w;
  for (int d = 0; d < 3; ++d) {
    expect += std::exp(-H * t) * (gamma(d + 1) * (gamma0() * dwdx[d]));
  }
  expect *= std::exp(-H * t);
  CHECK((mine - expect).norm() < 1e-7 * (1.0 + expect.norm()));
}

TEST_CASE("free solution: Huygens support for m in {0, iH, -iH}") {
  const Real H = 1.0;
  const Real R = 0.8;
  const Spinor dir = (Spinor() << 1.0, Complex(0.2, -0.5), 0.3, 0.1)
                         .finished()
                         .normalized();
  const SpinorData data = spinor_data_from_profile(
      compact_bump_profile(1.0, R, Vec3::Zero()), dir);
  for (Complex m : {Complex(0.0, 0.0), Complex(0.0, H), Complex(0.0, -H)}) {
    for (Real t : {0.4, 1.0}) {
      const Real out = R + phi(t, H) + 0.1;
      for (const Vec3& x :
           {Vec3(out, 0, 0), Vec3(0, -out, 0),
            Vec3(out / std::sqrt(2.0), out / std::sqrt(2.0), 0)}) {
        const Spinor psi = free_dirac_solution(data, x, t, H, m);
        CHECK(psi.norm() < 1e-8);
      }
      // and it is genuinely nonzero inside
      const Spinor inside =
          free_dirac_solution(data, Vec3(0.2, 0.1, 0.0), t, H, m);
      CHECK(inside.norm() > 1e-4);
    }
  }
}

TEST_CASE("free solution: discrete Dirac residual falls at 2nd order") {
  const Real H = 1.0;
  const Complex m(0.0, H);  // Huygens path keeps this test fast
  const Spinor dir =
      (Spinor() << 1.0, 0.4, Complex(0.0, 0.3), 0.2).finished().normalized();
  const SpinorData data =
      spinor_data_from_profile(gaussian_profile(1.0, 0.5, Vec3::Zero()), dir);
  const Vec3 x(0.25, -0.15, 0.1);
  const Real t = 0.7;

  const auto psi_at = [&](const Vec3& xp, Real tp) {
    return free_dirac_solution(data, xp, tp, H, m);
  };
  const Spinor center = psi_at(x, t);
  const auto residual = [&](Real h) {
    Spinor acc = (psi_at(x, t + h) - psi_at(x, t - h)) / (2.0 * h);
    acc += 1.5 * H * center + kImag * m * (gamma0() * center);
    for (int d = 0; d < 3; ++d) {
      Vec3 e = Vec3::Zero();
      e(d) = 1.0;
      const Spinor dd =
          (psi_at(x + h * e, t) - psi_at(x - h * e, t)) / (2.0 * h);
      acc += std::exp(-H * t) * (alpha(d + 1) * dd);
    }
    return acc.norm();
  };
  const Real r1 = residual(0.08);
  const Real r2 = residual(0.04);
  CHECK(r2 < 0.35 * r1);  // consistent with 2nd order (exact ratio 4)
  CHECK(r2 < 5e-3);
}

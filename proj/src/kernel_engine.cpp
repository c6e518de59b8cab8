#include "dsdirac/kernel_engine.hpp"

#include "dsdirac/desitter.hpp"
#include "dsdirac/quadrature.hpp"
#include "dsdirac/spinor_algebra.hpp"

#include <cmath>

namespace dsdirac {

namespace {

constexpr Real kSmallTime = 5e-4;

Real wave_diff_step(Real r) { return 1e-4 * (0.5 + std::abs(r)); }

bool matches(Complex M, Real value, Real H) {
  return std::abs(M - Complex(value)) < 1e-12 * (1.0 + std::abs(H));
}

}  // namespace

Complex spherical_mean(const ScalarField3& phi, const Vec3& x, Real radius) {
  const Real r = std::abs(radius);
  if (phi.support_radius > 0.0 &&
      std::abs(x.norm() - r) > phi.support_radius) {
    return 0.0;  // the sphere misses the support entirely
  }
  const SphereRule& rule = sphere_rule();
  Complex acc = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    acc += rule.weights[q] * phi(x + radius * rule.points[q]);
  }
  constexpr Real kFourPi = 4.0 * 3.14159265358979323846264338327950288;
  return radius * (acc / kFourPi);
}

Complex kirchhoff_wave(const ScalarField3& phi, const Vec3& x, Real t) {
  const Real h = wave_diff_step(t);
  return derivative_richardson(
      [&](Real r) { return spherical_mean(phi, x, r); }, t, h);
}

Complex apply_K1(const ScalarField3& phi, const Vec3& x, Real t,
                 const KernelSpec& spec) {
  const Real pt = dsdirac::phi(t, spec.H);
  if (pt <= 0.0) return 0.0;
  const auto integrand = [&](Real s) {
    return kernel_K1(s, t, spec) * kirchhoff_wave(phi, x, s);
  };
  return 2.0 * integrate_adaptive(integrand, 0.0, pt, 1e-8);
}

Complex apply_K1_fast(const ScalarField3& phi, const Vec3& x, Real t,
                      const KernelSpec& spec) {
  const Real H = spec.H;
  const Real pt = dsdirac::phi(t, H);
  if (pt <= 0.0) return 0.0;
  if (matches(spec.M, 0.5 * H, H) || matches(spec.M, -0.5 * H, H)) {
    return std::exp(0.5 * H * t) * spherical_mean(phi, x, pt);
  }
  if (matches(spec.M, 1.5 * H, H)) {
    const Complex vp = spherical_mean(phi, x, pt);
    const Real e32 = std::exp(1.5 * H * t);
    const Complex volume = integrate_adaptive(
        [&](Real s) { return spherical_mean(phi, x, s) * s; }, 0.0, pt,
        1e-10 * (1.0 + std::abs(vp)));
    return 0.5 * e32 * (1.0 + std::exp(-2.0 * H * t)) * vp -
           0.5 * H * H * e32 * pt * pt * vp + H * H * e32 * volume;
  }
  return apply_K1(phi, x, t, spec);
}

Complex apply_G(const SourceField& f, const Vec3& x, Real t,
                const KernelSpec& spec) {
  if (t <= 0.0) return 0.0;
  const Real inner_tol = 2e-8 / std::max(1.0, t);
  const auto outer = [&](Real b) -> Complex {
    const Real rmax = dsdirac::phi(t, spec.H) - dsdirac::phi(b, spec.H);
    if (rmax <= 0.0) return 0.0;
    ScalarField3 slice;
    slice.support_radius = f.support_radius;
    slice.eval = [&f, b](const Vec3& y) { return f(y, b); };
    return integrate_adaptive(
        [&](Real r) {
          return kernel_E(r, t, b, spec) * kirchhoff_wave(slice, x, r);
        },
        0.0, rmax, inner_tol);
  };
  return 2.0 * integrate_adaptive(outer, 0.0, t, 5e-8);
}

Spinor free_dirac_solution(const SpinorData& data, const Vec3& x, Real t,
                           Real H, Complex m) {
  if (t < kSmallTime) return data(x);

  const KernelSpec spec_plus = kernel_M_plus(H, m);
  const KernelSpec spec_minus = kernel_M_minus(H, m);
  const auto represented = [&](const Vec3& xp, Real tp) -> Spinor {
    Spinor w;
    for (int j = 0; j < 4; ++j) {
      const KernelSpec& s = (j < 2) ? spec_plus : spec_minus;
      w(j) = apply_K1_fast(data.component[j], xp, tp, s);
    }
    return w;
  };

  const Real h = 1e-4 * std::max(1.0, t);
  const auto richardson4 = [](const Spinor& p1, const Spinor& m1,
                              const Spinor& p2, const Spinor& m2,
                              Real step) -> Spinor {
    const Spinor d1 = (p1 - m1) / (2.0 * step);
    const Spinor d2 = (p2 - m2) / step;  // half-step central difference
    return (4.0 * d2 - d1) / 3.0;
  };

  const Spinor w = represented(x, t);
  const Spinor dwdt =
      richardson4(represented(x, t + h), represented(x, t - h),
                  represented(x, t + 0.5 * h), represented(x, t - 0.5 * h), h);
  std::array<Spinor, 3> dwdx;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e(k) = 1.0;
    dwdx[k] = richardson4(represented(x + h * e, t), represented(x - h * e, t),
                          represented(x + 0.5 * h * e, t),
                          represented(x - 0.5 * h * e, t), h);
  }

  const Real damp = std::exp(-H * t);
  Spinor out = dwdt - 0.5 * H * w - kImag * m * (gamma0() * w);
  for (int k = 0; k < 3; ++k) {
    out += damp * (gamma(k + 1) * (gamma0() * dwdx[k]));
  }
  return damp * out;
}

}  // namespace dsdirac

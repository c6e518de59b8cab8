#pragma once

// Test-only oracles for the flat wave pieces of the kernel operators:
//  - closed-form spherical mean of an isotropic Gaussian (complex-step
//    differentiable in the radius), and
//  - a periodic spectral solve of v_tt = Lap v with data (phi, 0), evaluated
//    at a grid node.

#include "dsdirac/types.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <functional>
#include <vector>

namespace wave_oracle {

using dsdirac::Complex;
using dsdirac::Real;
using dsdirac::Vec3;

// mean_{|y|=1} exp(-|x + r y|^2 / (2 sigma^2)) for |x| = rho (any scalar r).
template <typename Scalar>
Scalar gaussian_sphere_mean(Real rho, Scalar r, Real sigma) {
  const Real s2 = sigma * sigma;
  const Scalar u = (rho / s2) * r;
  Scalar ratio;  // sinh(u)/u, series near 0
  if (std::abs(u) < 1e-4) {
    ratio = Scalar(1.0) + u * u / Scalar(6.0) +
            u * u * u * u / Scalar(120.0);
  } else {
    ratio = std::sinh(u) / u;
  }
  return std::exp(-(Scalar(rho * rho) + r * r) / Scalar(2.0 * s2)) * ratio;
}

// V(x, r) = r * mean; d/dr V by complex step (exact to roundoff).
inline Real gaussian_V(Real rho, Real r, Real sigma) {
  return r * gaussian_sphere_mean<Real>(rho, r, sigma);
}

inline Real gaussian_dV_dr(Real rho, Real r, Real sigma) {
  const Complex rc(r, 1e-100);
  const Complex v = rc * gaussian_sphere_mean<Complex>(rho, rc, sigma);
  return v.imag() / 1e-100;
}

// Spectral wave solve on [-L, L)^3 with n nodes per axis; returns the
// solution at node (ix, iy, iz) at time t.
inline Real spectral_wave_at_node(
    const std::function<Real(const Vec3&)>& phi, int n, Real L, Real t,
    int ix, int iy, int iz) {
  const Real h = 2.0 * L / n;
  std::vector<Complex> data(static_cast<size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        data[(static_cast<size_t>(i) * n + j) * n + k] =
            phi(Vec3(-L + h * i, -L + h * j, -L + h * k));
      }
    }
  }

  Eigen::FFT<Real> fft;
  const auto transform_axis = [&](int axis, bool inverse) {
    std::vector<Complex> line(n), out(n);
    const size_t stride = axis == 2 ? 1 : (axis == 1 ? n : n * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        size_t base;
        if (axis == 0) base = static_cast<size_t>(a) * n + b;           // vary i
        else if (axis == 1) base = static_cast<size_t>(a) * n * n + b;  // vary j
        else base = (static_cast<size_t>(a) * n + b) * n;               // vary k
        for (int m = 0; m < n; ++m) line[m] = data[base + m * stride];
        if (inverse) {
          fft.inv(out, line);
        } else {
          fft.fwd(out, line);
        }
        for (int m = 0; m < n; ++m) data[base + m * stride] = out[m];
      }
    }
  };
  for (int axis = 0; axis < 3; ++axis) transform_axis(axis, false);

  const Real kunit = 3.14159265358979323846 / L;  // 2 pi / (2L)
  for (int i = 0; i < n; ++i) {
    const Real ki = kunit * (i <= n / 2 ? i : i - n);
    for (int j = 0; j < n; ++j) {
      const Real kj = kunit * (j <= n / 2 ? j : j - n);
      for (int k = 0; k < n; ++k) {
        const Real kk = kunit * (k <= n / 2 ? k : k - n);
        const Real omega = std::sqrt(ki * ki + kj * kj + kk * kk);
        data[(static_cast<size_t>(i) * n + j) * n + k] *=
            std::cos(omega * t);
      }
    }
  }
  for (int axis = 0; axis < 3; ++axis) transform_axis(axis, true);

  return data[(static_cast<size_t>(ix) * n + iy) * n + iz].real();
}

}  // namespace wave_oracle

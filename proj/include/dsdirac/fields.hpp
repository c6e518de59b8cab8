#pragma once

#include "dsdirac/types.hpp"

#include <array>
#include <functional>

namespace dsdirac {

// Periodic cube [-L, L)^3 with n nodes per axis.
struct Grid3 {
  int n = 8;
  Real L = 1.0;

  Grid3() = default;
  Grid3(int n_, Real L_) : n(n_), L(L_) {
    if (n < 8) throw ConfigError("Grid3: n must be at least 8");
    if (!(L > 0)) throw ConfigError("Grid3: L must be positive");
  }

  Real dx() const { return 2.0 * L / n; }
  long size() const { return static_cast<long>(n) * n * n; }
  long index(int i, int j, int k) const {
    return (static_cast<long>(i) * n + j) * n + k;
  }
  int wrap(int i) const {
    i %= n;
    return i < 0 ? i + n : i;
  }
  Vec3 point(int i, int j, int k) const {
    const Real h = dx();
    return Vec3(-L + h * i, -L + h * j, -L + h * k);
  }
};

using SpinorArray = Eigen::Matrix<Complex, 4, Eigen::Dynamic>;

// Spinor-valued function sampled on a grid at a fixed time.
struct SpinorField {
  Grid3 grid;
  Real time = 0.0;
  SpinorArray values;  // 4 x n^3, column = grid site

  SpinorField() = default;
  SpinorField(const Grid3& g, Real t) : grid(g), time(t) {
    values = SpinorArray::Zero(4, g.size());
  }
  bool all_finite() const { return values.allFinite(); }
};

// Compactly supported complex function of space, given as a callable plus a
// declared support radius (used by cone bookkeeping and Huygens checks).
struct ScalarField3 {
  std::function<Complex(const Vec3&)> eval;
  Real support_radius = 0.0;

  Complex operator()(const Vec3& x) const { return eval(x); }
};

// Space-time source for the inhomogeneous kernel operator.
struct SourceField {
  std::function<Complex(const Vec3&, Real)> eval;
  Real support_radius = 0.0;

  Complex operator()(const Vec3& x, Real t) const { return eval(x, t); }
};

// Four scalar components plus a common support radius: the Cauchy datum of
// the kernel representation.
struct SpinorData {
  std::array<ScalarField3, 4> component;
  Real support_radius = 0.0;

  Spinor operator()(const Vec3& x) const {
    Spinor s;
    for (int j = 0; j < 4; ++j) s(j) = component[j](x);
    return s;
  }
};

// --- analytic radial profiles -------------------------------------------

// amplitude * exp(-|x-center|^2 / (2 width^2)); support hint 6.5 width.
ScalarField3 gaussian_profile(Real amplitude, Real width, const Vec3& center);

// amplitude * exp(1 - 1/(1 - (r/radius)^2)) inside r < radius, zero outside.
ScalarField3 compact_bump_profile(Real amplitude, Real radius,
                                  const Vec3& center);

// exp(i k . x); not compactly supported (support hint = infinity marker 0).
ScalarField3 plane_mode_profile(const Vec3& k);

SpinorData spinor_data_from_profile(const ScalarField3& profile,
                                    const Spinor& direction);

// Samples an analytic datum onto a grid at time t0.
SpinorField sample_to_grid(const SpinorData& data, const Grid3& grid, Real t0);

// Trilinear periodic interpolation of one spinor component of a grid field.
ScalarField3 scalar_from_grid(const SpinorField& field, int component);

}  // namespace dsdirac

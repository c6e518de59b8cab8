#pragma once

// Deterministic quadrature used by the kernel operators: a fixed-order
// sphere rule (Gauss-Legendre in the polar angle times a uniform longitude
// grid, exact for spherical harmonics up to the requested degree), an
// adaptive Gauss-Kronrod integrator for smooth 1D integrands, and
// Richardson-extrapolated central differences.

#include "dsdirac/types.hpp"

#include <functional>
#include <vector>

namespace dsdirac {

struct GaussLegendre {
  std::vector<Real> nodes;    // on (-1, 1)
  std::vector<Real> weights;  // sum = 2
};

GaussLegendre gauss_legendre(int n);

struct SphereRule {
  std::vector<Vec3> points;    // unit vectors
  std::vector<Real> weights;   // sum = 4 pi
  int degree = 0;              // polynomial exactness
};

// Rule exact for spherical harmonics of degree <= `degree` (default 26).
const SphereRule& sphere_rule(int degree = 26);

// Mean of f over the unit sphere (integral / 4 pi).
Complex sphere_mean(const std::function<Complex(const Vec3&)>& f,
                    const SphereRule& rule);

// Adaptive Gauss-Kronrod (G7,K15) to absolute tolerance. Throws
// ConvergenceError when the recursion depth limit is hit.
Complex integrate_adaptive(const std::function<Complex(Real)>& f, Real a,
                           Real b, Real abs_tol, int max_depth = 48);
Real integrate_adaptive_real(const std::function<Real(Real)>& f, Real a,
                             Real b, Real abs_tol, int max_depth = 48);

// Central difference with one Richardson step: O(h^4) accurate.
Complex derivative_richardson(const std::function<Complex(Real)>& f, Real x,
                              Real h);

}  // namespace dsdirac

#include "dsdirac/desitter.hpp"

#include <cmath>

namespace dsdirac {

Real phi(Real t, Real H) {
  const Real ht = H * t;
  if (std::abs(ht) < 1e-6) {
    // t * (1 - ht/2 + ht^2/6 - ht^3/24); avoids the 0/0 cancellation at H = 0.
    return t * (1.0 + ht * (-0.5 + ht * (1.0 / 6.0 - ht / 24.0)));
  }
  return (1.0 - std::exp(-ht)) / H;
}

Real phi_prime(Real t, Real H) { return std::exp(-H * t); }

bool in_backward_cone(const Vec3& x, Real t, const ConeSpec& cone) {
  return (x - cone.apex_x).norm() <= phi(cone.apex_t, cone.H) - phi(t, cone.H);
}

Real cone_slice_admissible_radius(const ConeSpec& cone) {
  return phi(cone.apex_t, cone.H);
}

Real cone_slice_time(Real s, const Vec3& x, const ConeSpec& cone) {
  const Real pT = phi(cone.apex_t, cone.H);
  if (s < 0 || s >= pT) {
    throw DomainError("cone_slice_time: s must lie in [0, phi(T))");
  }
  const Real r = (x - cone.apex_x).norm();
  if (r > pT * (1.0 + 1e-12)) {
    throw DomainError("cone_slice_time: x outside the admissible radius");
  }
  const Real radicand =
      (s - pT) * (s - pT) + (2.0 * s * pT - s * s) * (r / pT) * (r / pT);
  const Real root = std::sqrt(std::max(radicand, 0.0));
  const Real H = cone.H;
  if (std::abs(H) < 1e-12) {
    // Minkowski limit: -(1/H) log(1 - H (pT - root)) -> pT - root.
    return pT - root;
  }
  const Real arg = 1.0 - H * pT + H * root;
  if (!(arg > 0)) {
    throw DomainError("cone_slice_time: slice leaves the coordinate chart");
  }
  return -std::log(arg) / H;
}

}  // namespace dsdirac

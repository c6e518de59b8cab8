#pragma once

// Background geometry of the spatially flat universe with scale factor
// a(t) = exp(H t): the distance function phi, light cones, and the spacelike
// slices that fill a backward cone.

#include "dsdirac/types.hpp"

namespace dsdirac {

// phi(t) = (1 - exp(-H t)) / H, continued through H = 0 by its series.
Real phi(Real t, Real H);

// d phi / d t = exp(-H t).
Real phi_prime(Real t, Real H);

struct ConeSpec {
  Vec3 apex_x = Vec3::Zero();
  Real apex_t = 0;  // >= 0
  Real H = 0;
};

// |x - x0| <= phi(T) - phi(t), the backward influence region of the apex.
bool in_backward_cone(const Vec3& x, Real t, const ConeSpec& cone);

// Time coordinate tau(s, x) of the slice with parameter s in [0, phi(T)).
// Requires |x - x0| <= phi(T) (inclusive up to 1e-12 * phi(T)).
Real cone_slice_time(Real s, const Vec3& x, const ConeSpec& cone);

// Largest |x - x0| for which the slices are defined.
Real cone_slice_admissible_radius(const ConeSpec& cone);

}  // namespace dsdirac

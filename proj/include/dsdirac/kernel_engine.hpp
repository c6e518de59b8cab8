#pragma once

// Integral operators of the representation theory. The flat-wave action is
// always realized as the radial derivative of the spherical-mean primitive
// V(x,r) = r * mean_{|y|=1} phi(x + r y); the kernel operators then reduce
// to 1D integrals against K1 and E.

#include "dsdirac/fields.hpp"
#include "dsdirac/special_functions.hpp"

namespace dsdirac {

// V_phi(x, radius) = radius * (mean of phi over the sphere of that radius).
// Odd in the radius; exact for spherical harmonics up to the rule degree.
Complex spherical_mean(const ScalarField3& phi, const Vec3& x, Real radius);

// d/dr V_phi(x, r) at r = t: the flat wave solution with data (phi, 0).
Complex kirchhoff_wave(const ScalarField3& phi, const Vec3& x, Real t);

// 2 int_0^{phi(t)} K1(s,t;M) d/ds V_phi(x,s) ds, adaptive to 1e-8 absolute.
Complex apply_K1(const ScalarField3& phi, const Vec3& x, Real t,
                 const KernelSpec& spec);

// Same operator through the elementary closed forms when M is one of
// +-H/2, 3H/2 (within 1e-12); falls back to the quadrature form otherwise.
Complex apply_K1_fast(const ScalarField3& phi, const Vec3& x, Real t,
                      const KernelSpec& spec);

// 2 int_0^t db int_0^{phi(t)-phi(b)} E(r,t;0,b;M) [wave action of f(.,b)] dr,
// nested adaptive quadrature to 1e-7 absolute.
Complex apply_G(const SourceField& f, const Vec3& x, Real t,
                const KernelSpec& spec);

// Free-field solution of the Cauchy problem by the representation formula:
// the first two components are carried by M+ = H/2 + i m, the last two by
// M- = H/2 - i m; outer derivatives are Richardson central differences with
// step 1e-4 * max(1, t). For t below 5e-4 the Cauchy datum is returned.
Spinor free_dirac_solution(const SpinorData& data, const Vec3& x, Real t,
                           Real H, Complex m);

}  // namespace dsdirac

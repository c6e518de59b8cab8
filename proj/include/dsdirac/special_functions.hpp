#pragma once

// Gauss hypergeometric function and the scalar kernels of the representation
// formulas. The kernel E(r,t;0,t0;M) is evaluated from its hypergeometric
// form; K1(r,t;M) = E(r,t;0,0;M) with elementary closed forms at the
// Huygens-related parameters M in {H/2, -H/2, 3H/2}.

#include "dsdirac/types.hpp"

namespace dsdirac {

// Gamma function for complex argument (Lanczos, reflection for Re z < 1/2).
Complex complex_gamma(Complex z);

// Digamma function for complex argument.
Complex complex_digamma(Complex z);

// F(a,b;c;z). Terminating when a or b is a nonpositive integer. Direct
// series for small |z|; Pfaff map for z < 0; z -> 1-z connection formulas
// (including the logarithmic cases c-a-b integer) for real z in (1/2, 1).
// Throws DomainError for c a nonpositive integer, ConvergenceError if the
// series fails to meet the 1e-14 relative truncation bound within 1e6 terms.
Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z);

struct KernelSpec {
  Complex M;  // H/2 + i m or H/2 - i m for physical use; any value accepted
  Real H = 1.0;
};

inline KernelSpec kernel_M_plus(Real H, Complex m) {
  return {0.5 * H + kImag * m, H};
}
inline KernelSpec kernel_M_minus(Real H, Complex m) {
  return {0.5 * H - kImag * m, H};
}

// E(r,t;0,t0;M) for |r| <= |phi(t) - phi(t0)| (the hypergeometric argument
// then lies in [0,1)). Throws DomainError outside that cone (tolerance 1e-12).
Complex kernel_E(Real r, Real t, Real t0, const KernelSpec& spec);

// K1(r,t;M) = E(r,t;0,0;M); dispatches to the closed forms when M matches
// +-H/2 or 3H/2 to within 1e-12.
Complex kernel_K1(Real r, Real t, const KernelSpec& spec);

// Generic evaluation bypassing the closed-form dispatch (for cross-checks).
Complex kernel_K1_generic(Real r, Real t, const KernelSpec& spec);

}  // namespace dsdirac

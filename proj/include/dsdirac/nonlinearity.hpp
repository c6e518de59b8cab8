#pragma once

// Right-hand-side nonlinearities. eval_F returns each family in the variable
// the estimates are stated in; dirac_source converts that to the source term
// of the first-order symmetric-hyperbolic system the solver integrates
// (i gamma^0 factor for the chiral family, gamma^0 for the blow-up family).

#include "dsdirac/spinor_algebra.hpp"

#include <functional>

namespace dsdirac {

enum class NonlinKind {
  None,
  ChiralF,      // [alpha(xi,eta) I + i beta(xi,eta) g5] psi
  PowerAbs,     // +-|psi|^(1+alpha) in every component
  PowerAbsPsi,  // +-|psi|^alpha psi
  CubicGamma0,  // (g0 psi, psi) g0 psi
  BlowupG,      // G(psi) g0 psi with G = c0 |psi|^alpha
};

struct NonlinSpec {
  NonlinKind kind = NonlinKind::None;
  Real alpha = 2.0;  // exponent (PowerAbs*, BlowupG)
  Real c0 = 1.0;     // BlowupG strength, >= 0
  int sign = +1;     // PowerAbs / PowerAbsPsi sign convention
  // ChiralF coefficient functions of (xi, eta); defaults alpha = xi,
  // beta = eta (the simplest pair vanishing linearly at the origin).
  std::function<Real(Real, Real)> alpha_fn;
  std::function<Real(Real, Real)> beta_fn;

  bool is_none() const { return kind == NonlinKind::None; }
};

NonlinSpec make_chiral_default();
NonlinSpec make_blowup(Real c0, Real alpha);

void validate(const NonlinSpec& spec);

// Lipschitz exponent of the family in the sense of the contraction estimates.
Real lipschitz_exponent(const NonlinSpec& spec);

// Pointwise nonlinearity as stated per family (see enum comments).
Spinor eval_F(const Spinor& psi, const NonlinSpec& spec);

// Source term of d/dt psi = ... + dirac_source(psi): the form actually
// integrated by the solver and by the scattering quadrature.
Spinor dirac_source(const Spinor& psi, const NonlinSpec& spec);

// Reduced nonlinearity around a background solution: F(at Psi+chi)(Psi+chi).
// Vanishes when chi = 0 and Psi is Majorana-type. ChiralF only.
Spinor eval_reduced_f1(const Spinor& chi, const Spinor& Psi,
                       const NonlinSpec& spec);

// Empirical Lipschitz constant over random smooth field pairs (diagnostic).
Real lipschitz_probe(const NonlinSpec& spec, int samples);

}  // namespace dsdirac

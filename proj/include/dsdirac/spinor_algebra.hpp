#pragma once

// Fixed Dirac representation used throughout: gamma^0 = diag(I2, -I2),
// gamma^k off-diagonal Pauli blocks, gamma^5 = -i g0 g1 g2 g3,
// alpha^k = gamma^0 gamma^k. All entries lie in {0, +-1, +-i}, so matrix
// identities hold exactly in floating point.

#include "dsdirac/types.hpp"

namespace dsdirac {

enum class DiracMatrixName {
  Gamma0,
  Gamma1,
  Gamma2,
  Gamma3,
  Gamma5,
  Alpha1,
  Alpha2,
  Alpha3,
};

const Matrix2c& pauli(int k);  // k = 1, 2, 3
const Matrix2c& identity2();

const Matrix4c& gamma0();
const Matrix4c& gamma(int k);  // k = 1, 2, 3
const Matrix4c& gamma5();
const Matrix4c& alpha(int k);  // k = 1, 2, 3
const Matrix4c& identity4();

const Matrix4c& dirac_matrix(DiracMatrixName name);

// Pointwise chiral quantities of a spinor. xi = psi* g0 psi is real;
// psi* g0 g5 psi is purely imaginary and eta is its imaginary part, so that
// rho2 = xi^2 + eta^2 = |psi* g0 psi|^2 + |psi* g0 g5 psi|^2.
struct ChiralDensity {
  Real xi = 0;
  Real eta = 0;
  Real rho2 = 0;
};

ChiralDensity chiral_density(const Spinor& psi);

// |psi - z g2 conj(psi)|^2 for unimodular z. Rejects ||z|-1| > 1e-9.
Real majorana_defect(const Spinor& psi, Complex z);

// psi - z g2 conj(psi); the defect above is its squared norm.
Spinor majorana_residual_vector(const Spinor& psi, Complex z);

// Lower components from the upper pair so that psi = z g2 conj(psi) holds.
Spinor majorana_spinor(Complex upper1, Complex upper2, Complex z);

}  // namespace dsdirac

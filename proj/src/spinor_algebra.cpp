#include "dsdirac/spinor_algebra.hpp"

#include <cmath>

namespace dsdirac {

namespace {

Matrix2c make_pauli(int k) {
  Matrix2c s = Matrix2c::Zero();
  switch (k) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
      break;
    case 3:
      s << 1, 0, 0, -1;
      break;
    default:
      throw DomainError("pauli: index must be 1, 2 or 3");
  }
  return s;
}

Matrix4c block2x2(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c,
                  const Matrix2c& d) {
  Matrix4c m;
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(0, 2) = b;
  m.block<2, 2>(2, 0) = c;
  m.block<2, 2>(2, 2) = d;
  return m;
}

Matrix4c make_gamma0() {
  const Matrix2c z = Matrix2c::Zero();
  return block2x2(identity2(), z, z, -identity2());
}

Matrix4c make_gamma(int k) {
  const Matrix2c z = Matrix2c::Zero();
  return block2x2(z, pauli(k), -pauli(k), z);
}

Matrix4c make_gamma5() {
  const Matrix2c z = Matrix2c::Zero();
  return block2x2(z, -identity2(), -identity2(), z);
}

Matrix4c make_alpha(int k) {
  const Matrix2c z = Matrix2c::Zero();
  return block2x2(z, pauli(k), pauli(k), z);
}

}  // namespace

const Matrix2c& pauli(int k) {
  static const Matrix2c s1 = make_pauli(1);
  static const Matrix2c s2 = make_pauli(2);
  static const Matrix2c s3 = make_pauli(3);
  switch (k) {
    case 1:
      return s1;
    case 2:
      return s2;
    case 3:
      return s3;
    default:
      throw DomainError("pauli: index must be 1, 2 or 3");
  }
}

const Matrix2c& identity2() {
  static const Matrix2c id = Matrix2c::Identity();
  return id;
}

const Matrix4c& gamma0() {
  static const Matrix4c g = make_gamma0();
  return g;
}

const Matrix4c& gamma(int k) {
  static const Matrix4c g1 = make_gamma(1);
  static const Matrix4c g2 = make_gamma(2);
  static const Matrix4c g3 = make_gamma(3);
  switch (k) {
    case 1:
      return g1;
    case 2:
      return g2;
    case 3:
      return g3;
    default:
      throw DomainError("gamma: index must be 1, 2 or 3");
  }
}

const Matrix4c& gamma5() {
  static const Matrix4c g = make_gamma5();
  return g;
}

const Matrix4c& alpha(int k) {
  static const Matrix4c a1 = make_alpha(1);
  static const Matrix4c a2 = make_alpha(2);
  static const Matrix4c a3 = make_alpha(3);
  switch (k) {
    case 1:
      return a1;
    case 2:
      return a2;
    case 3:
      return a3;
    default:
      throw DomainError("alpha: index must be 1, 2 or 3");
  }
}

const Matrix4c& identity4() {
  static const Matrix4c id = Matrix4c::Identity();
  return id;
}

const Matrix4c& dirac_matrix(DiracMatrixName name) {
  switch (name) {
    case DiracMatrixName::Gamma0:
      return gamma0();
    case DiracMatrixName::Gamma1:
      return gamma(1);
    case DiracMatrixName::Gamma2:
      return gamma(2);
    case DiracMatrixName::Gamma3:
      return gamma(3);
    case DiracMatrixName::Gamma5:
      return gamma5();
    case DiracMatrixName::Alpha1:
      return alpha(1);
    case DiracMatrixName::Alpha2:
      return alpha(2);
    case DiracMatrixName::Alpha3:
      return alpha(3);
  }
  throw DomainError("dirac_matrix: unknown name");
}

ChiralDensity chiral_density(const Spinor& psi) {
  const Complex xi_c = psi.dot(gamma0() * psi);           // psi* g0 psi
  const Complex eta_c = psi.dot(gamma0() * gamma5() * psi);  // psi* g0 g5 psi
  const Real scale = 1.0 + psi.squaredNorm();
  // xi is real and psi* g0 g5 psi is purely imaginary; the off parts are
  // rounding noise and must stay below 1e-12 * (1 + |psi|^2).
  if (std::abs(xi_c.imag()) > 1e-12 * scale ||
      std::abs(eta_c.real()) > 1e-12 * scale) {
    throw DomainError("chiral_density: bilinear reality check failed");
  }
  ChiralDensity d;
  d.xi = xi_c.real();
  d.eta = eta_c.imag();
  d.rho2 = d.xi * d.xi + d.eta * d.eta;
  return d;
}

Spinor majorana_residual_vector(const Spinor& psi, Complex z) {
  return psi - z * (gamma(2) * psi.conjugate());
}

Real majorana_defect(const Spinor& psi, Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-9) {
    throw PreconditionError("majorana_defect: |z| must equal 1");
  }
  return majorana_residual_vector(psi, z).squaredNorm();
}

Spinor majorana_spinor(Complex upper1, Complex upper2, Complex z) {
  Spinor psi;
  psi(0) = upper1;
  psi(1) = upper2;
  psi(2) = kImag * z * std::conj(upper2);
  psi(3) = -kImag * z * std::conj(upper1);
  return psi;
}

}  // namespace dsdirac

#include "dsdirac/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace dsdirac {

NonlinSpec make_chiral_default() {
  NonlinSpec s;
  s.kind = NonlinKind::ChiralF;
  s.alpha_fn = [](Real xi, Real) { return xi; };
  s.beta_fn = [](Real, Real eta) { return eta; };
  return s;
}

NonlinSpec make_blowup(Real c0, Real alpha) {
  NonlinSpec s;
  s.kind = NonlinKind::BlowupG;
  s.c0 = c0;
  s.alpha = alpha;
  return s;
}

void validate(const NonlinSpec& spec) {
  switch (spec.kind) {
    case NonlinKind::None:
      return;
    case NonlinKind::ChiralF:
      if (!spec.alpha_fn || !spec.beta_fn) {
        throw ConfigError("NonlinSpec: ChiralF needs alpha_fn and beta_fn");
      }
      return;
    case NonlinKind::PowerAbs:
    case NonlinKind::PowerAbsPsi:
      if (!(spec.alpha > 0)) {
        throw ConfigError("NonlinSpec: exponent must be positive");
      }
      if (spec.sign != 1 && spec.sign != -1) {
        throw ConfigError("NonlinSpec: sign must be +-1");
      }
      return;
    case NonlinKind::CubicGamma0:
      return;
    case NonlinKind::BlowupG:
      if (!(spec.alpha > 0) || !(spec.c0 >= 0)) {
        throw ConfigError("NonlinSpec: BlowupG needs alpha > 0, c0 >= 0");
      }
      return;
  }
  throw ConfigError("NonlinSpec: unknown kind");
}

Real lipschitz_exponent(const NonlinSpec& spec) {
  switch (spec.kind) {
    case NonlinKind::None:
      return 0.0;
    case NonlinKind::ChiralF:
    case NonlinKind::CubicGamma0:
      return 2.0;
    default:
      return spec.alpha;
  }
}

Spinor eval_F(const Spinor& psi, const NonlinSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case NonlinKind::None:
      return Spinor::Zero();
    case NonlinKind::ChiralF: {
      const ChiralDensity d = chiral_density(psi);
      const Real a = spec.alpha_fn(d.xi, d.eta);
      const Real b = spec.beta_fn(d.xi, d.eta);
      return a * psi + kImag * b * (gamma5() * psi);
    }
    case NonlinKind::PowerAbs: {
      const Real mag = std::pow(psi.norm(), 1.0 + spec.alpha);
      return Spinor::Constant(Complex(spec.sign * mag, 0.0));
    }
    case NonlinKind::PowerAbsPsi:
      return static_cast<Real>(spec.sign) * std::pow(psi.norm(), spec.alpha) *
             psi;
    case NonlinKind::CubicGamma0: {
      const Real xi = chiral_density(psi).xi;
      return xi * (gamma0() * psi);
    }
    case NonlinKind::BlowupG:
      return spec.c0 * std::pow(psi.norm(), spec.alpha) * (gamma0() * psi);
  }
  return Spinor::Zero();
}

Spinor dirac_source(const Spinor& psi, const NonlinSpec& spec) {
  switch (spec.kind) {
    case NonlinKind::None:
      return Spinor::Zero();
    case NonlinKind::ChiralF:
      return -kImag * (gamma0() * eval_F(psi, spec));
    case NonlinKind::BlowupG:
      return gamma0() * eval_F(psi, spec);
    default:
      return eval_F(psi, spec);
  }
}

Spinor eval_reduced_f1(const Spinor& chi, const Spinor& Psi,
                       const NonlinSpec& spec) {
  if (spec.kind != NonlinKind::ChiralF) {
    throw PreconditionError("eval_reduced_f1: requires the ChiralF family");
  }
  return eval_F(Psi + chi, spec);
}

Real lipschitz_probe(const NonlinSpec& spec, int samples) {
  if (samples < 2) {
    throw PreconditionError("lipschitz_probe: needs at least 2 samples");
  }
  validate(spec);
  const Real expo = lipschitz_exponent(spec);

  // Smooth random fields on a small periodic cube, built from a handful of
  // low modes so the Sobolev content is bounded.
  constexpr int n = 8;
  constexpr Real L = 1.0;
  std::mt19937 rng(20240517u);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  const Real two_pi_over = 3.14159265358979323846 / L;

  const auto random_field = [&]() {
    std::vector<Spinor> f(n * n * n, Spinor::Zero());
    for (int mode = 0; mode < 4; ++mode) {
      Vec3 k(two_pi_over * (rng() % 3), two_pi_over * (rng() % 3),
             two_pi_over * (rng() % 3));
      Spinor amp;
      for (int j = 0; j < 4; ++j) amp(j) = Complex(gauss(rng), gauss(rng));
      amp /= (1.0 + k.squaredNorm());
      long idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
          for (int kk = 0; kk < n; ++kk, ++idx) {
            const Vec3 x(-L + 2.0 * L * i / n, -L + 2.0 * L * jj / n,
                         -L + 2.0 * L * kk / n);
            f[idx] += amp * std::exp(kImag * k.dot(x));
          }
        }
      }
    }
    return f;
  };
  const Real cell = std::pow(2.0 * L / n, 3);
  const auto l2 = [&](const std::vector<Spinor>& f) {
    Real acc = 0;
    for (const auto& s : f) acc += s.squaredNorm();
    return std::sqrt(cell * acc);
  };

  Real cmax = 0.0;
  for (int it = 0; it < samples; ++it) {
    const auto f1 = random_field();
    const auto f2 = random_field();
    Real diff2 = 0.0, fdiff2 = 0.0;
    for (size_t i = 0; i < f1.size(); ++i) {
      diff2 += (f1[i] - f2[i]).squaredNorm();
      fdiff2 += (eval_F(f1[i], spec) - eval_F(f2[i], spec)).squaredNorm();
    }
    const Real denom =
        std::sqrt(cell * diff2) *
        (std::pow(l2(f1), expo) + std::pow(l2(f2), expo));
    if (denom > 1e-14) {
      cmax = std::max(cmax, std::sqrt(cell * fdiff2) / denom);
    }
  }
  return cmax;
}

}  // namespace dsdirac

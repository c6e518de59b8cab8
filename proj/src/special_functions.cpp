#include "dsdirac/special_functions.hpp"

#include <cmath>
#include <limits>

namespace dsdirac {

namespace {

constexpr Real kPi = 3.14159265358979323846264338327950288;
constexpr Real kSeriesTol = 1e-14;
constexpr long kMaxTerms = 1000000;

bool near_real_integer(Complex w, Real tol = 1e-12) {
  return std::abs(w.imag()) < tol &&
         std::abs(w.real() - std::round(w.real())) < tol;
}

bool is_nonpositive_integer(Complex w, Real tol = 1e-12) {
  return near_real_integer(w, tol) && std::round(w.real()) <= 0.0;
}

// Direct power series sum_{n} (a)_n (b)_n / ((c)_n n!) z^n. Terminates when
// the geometric tail bound drops below kSeriesTol * |partial sum|.
Complex series_2f1(Complex a, Complex b, Complex c, Complex z) {
  Complex term = 1.0;
  Complex sum = 1.0;
  const Real ratio_cap = std::min(std::abs(z) * 1.05 + 0.01, 0.999);
  for (long n = 0; n < kMaxTerms; ++n) {
    const Real dn = static_cast<Real>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
    if (term == Complex(0.0, 0.0)) return sum;  // terminating case
    const Real tail = std::abs(term) / (1.0 - ratio_cap);
    if (dn > std::max({std::abs(a), std::abs(b)}) &&
        tail < kSeriesTol * std::abs(sum)) {
      return sum;
    }
  }
  throw ConvergenceError("gauss_2f1: series exceeded the term cap");
}

Complex terminating_2f1(Complex a, Complex b, Complex c, Complex z) {
  long n_a = is_nonpositive_integer(a)
                 ? static_cast<long>(-std::llround(a.real()))
                 : std::numeric_limits<long>::max();
  long n_b = is_nonpositive_integer(b)
                 ? static_cast<long>(-std::llround(b.real()))
                 : std::numeric_limits<long>::max();
  const long nmax = std::min(n_a, n_b);
  Complex term = 1.0;
  Complex sum = 1.0;
  for (long n = 0; n < nmax; ++n) {
    const Real dn = static_cast<Real>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
  }
  return sum;
}

// Connection at 1-z for c-a-b not an integer.
Complex connection_generic(Complex a, Complex b, Complex c, Complex z) {
  const Complex s = c - a - b;
  const Complex w = 1.0 - z;
  const Complex g1 = complex_gamma(c) * complex_gamma(s) /
                     (complex_gamma(c - a) * complex_gamma(c - b));
  const Complex g2 = complex_gamma(c) * complex_gamma(-s) /
                     (complex_gamma(a) * complex_gamma(b));
  return g1 * series_2f1(a, b, 1.0 - s, w) +
         g2 * std::pow(w, s) * series_2f1(c - a, c - b, 1.0 + s, w);
}

// Logarithmic connection for c = a + b (Abramowitz-Stegun 15.3.10).
Complex connection_log0(Complex a, Complex b, Complex z) {
  const Complex w = 1.0 - z;
  const Complex logw = std::log(w);
  Complex poch = 1.0;  // (a)_n (b)_n / (n!)^2 w^n
  Complex sum = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    const Real dn = static_cast<Real>(n);
    const Complex bracket = 2.0 * complex_digamma(dn + 1.0) -
                            complex_digamma(a + dn) -
                            complex_digamma(b + dn) - logw;
    const Complex term = poch * bracket;
    sum += term;
    if (n > 2 && std::abs(term) < kSeriesTol * std::abs(sum) &&
        std::abs(poch) < kSeriesTol * std::abs(sum)) {
      break;
    }
    poch *= (a + dn) * (b + dn) / ((dn + 1.0) * (dn + 1.0)) * w;
  }
  return sum * complex_gamma(a + b) / (complex_gamma(a) * complex_gamma(b));
}

// Logarithmic connection for c = a + b + m, m >= 1 (A-S 15.3.11).
Complex connection_logm(Complex a, Complex b, long m, Complex z) {
  const Complex c = a + b + static_cast<Real>(m);
  const Complex w = 1.0 - z;
  const Complex logw = std::log(w);

  Complex finite = 0.0;
  Complex poch = 1.0;  // (a)_n (b)_n / (n! (1-m)_n) w^n
  for (long n = 0; n < m; ++n) {
    finite += poch;
    const Real dn = static_cast<Real>(n);
    if (n + 1 < m) {
      poch *= (a + dn) * (b + dn) /
              ((dn + 1.0) * (1.0 - static_cast<Real>(m) + dn)) * w;
    }
  }
  finite *= complex_gamma(static_cast<Real>(m)) * complex_gamma(c) /
            (complex_gamma(a + static_cast<Real>(m)) *
             complex_gamma(b + static_cast<Real>(m)));

  Complex series = 0.0;
  Complex poch2 = 1.0;  // (a+m)_n (b+m)_n / (n! (n+m)!) w^n, scaled below
  Real fact_nm = 1.0;   // m! at n = 0
  for (long k = 1; k <= m; ++k) fact_nm *= static_cast<Real>(k);
  poch2 /= fact_nm;
  for (long n = 0; n < kMaxTerms; ++n) {
    const Real dn = static_cast<Real>(n);
    const Complex am = a + static_cast<Real>(m);
    const Complex bm = b + static_cast<Real>(m);
    const Complex bracket =
        logw - complex_digamma(dn + 1.0) -
        complex_digamma(dn + static_cast<Real>(m) + 1.0) +
        complex_digamma(am + dn) + complex_digamma(bm + dn);
    const Complex term = poch2 * bracket;
    series += term;
    if (n > 2 && std::abs(term) < kSeriesTol * std::abs(series) &&
        std::abs(poch2) < kSeriesTol * std::abs(series)) {
      break;
    }
    poch2 *= (am + dn) * (bm + dn) /
             ((dn + 1.0) * (dn + static_cast<Real>(m) + 1.0)) * w;
  }
  const Real sign = (m % 2 == 0) ? 1.0 : -1.0;
  series *= -sign * complex_gamma(c) / (complex_gamma(a) * complex_gamma(b)) *
            std::pow(w, static_cast<Real>(m));
  return finite + series;
}

Complex near_one_2f1(Complex a, Complex b, Complex c, Complex z) {
  Complex s = c - a - b;
  if (!near_real_integer(s, 1e-10)) {
    return connection_generic(a, b, c, z);
  }
  long m = std::llround(s.real());
  if (m < 0) {
    // Euler transformation flips the sign of c-a-b.
    return std::pow(1.0 - z, s) * gauss_2f1(c - a, c - b, c, z);
  }
  // Snap to the exact integer so the digamma arguments are consistent.
  const Complex a_adj = a;
  const Complex b_adj = c - a - static_cast<Real>(m);
  if (m == 0) return connection_log0(a_adj, b_adj, z);
  return connection_logm(a_adj, b_adj, m, z);
}

}  // namespace

Complex complex_gamma(Complex z) {
  // Lanczos approximation, g = 7, 9 coefficients.
  static const Real coeff[9] = {
      0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection. Poles at nonpositive integers surface as division by 0.
    const Complex spz = std::sin(kPi * z);
    return kPi / (spz * complex_gamma(1.0 - z));
  }
  const Complex zm1 = z - 1.0;
  Complex x = coeff[0];
  for (int i = 1; i < 9; ++i) x += coeff[i] / (zm1 + static_cast<Real>(i));
  const Complex t = zm1 + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * x;
}

Complex complex_digamma(Complex z) {
  if (z.real() < 0.5) {
    return complex_digamma(1.0 - z) - kPi / std::tan(kPi * z);
  }
  Complex shift = 0.0;
  while (z.real() < 9.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  // Asymptotic series with Bernoulli numbers.
  Complex s = std::log(z) - 0.5 * inv;
  Complex p = inv2;
  static const Real bern[7] = {1.0 / 12.0,   -1.0 / 120.0,    1.0 / 252.0,
                               -1.0 / 240.0, 1.0 / 132.0,     -691.0 / 32760.0,
                               1.0 / 12.0};
  for (int k = 0; k < 7; ++k) {
    s -= bern[k] * p;
    p *= inv2;
  }
  return s + shift;
}

Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z) {
  if (is_nonpositive_integer(c)) {
    throw DomainError("gauss_2f1: c must not be a nonpositive integer");
  }
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return terminating_2f1(a, b, c, z);
  }
  if (std::abs(z) < 1e-300) return 1.0;

  const bool real_z = std::abs(z.imag()) < 1e-14;
  if (real_z && z.real() >= 1.0) {
    throw DomainError("gauss_2f1: real z must satisfy z < 1");
  }
  if (real_z && z.real() < 0.0) {
    // Pfaff map w = z/(z-1) in (0,1); w <= 1/2 iff z >= -1.
    const Complex w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * gauss_2f1(a, c - b, c, w);
  }
  if (real_z && z.real() > 0.5) {
    return near_one_2f1(a, b, c, z);
  }
  if (std::abs(z) <= 0.6) {
    return series_2f1(a, b, c, z);
  }
  // Complex z of larger modulus: pick the better-conditioned of z and the
  // Pfaff image, or fail loudly.
  const Complex w = z / (z - 1.0);
  if (std::abs(w) < std::abs(z) && std::abs(w) < 0.95) {
    return std::pow(1.0 - z, -a) * gauss_2f1(a, c - b, c, w);
  }
  if (std::abs(z) < 0.95) {
    return series_2f1(a, b, c, z);
  }
  throw ConvergenceError("gauss_2f1: argument too close to the unit circle");
}

Complex kernel_E(Real r, Real t, Real t0, const KernelSpec& spec) {
  const Real H = spec.H;
  if (H == 0.0) {
    throw DomainError("kernel_E: requires H != 0");
  }
  const Real em_t = std::exp(-H * t);
  const Real em_t0 = std::exp(-H * t0);
  const Real hr2 = (H * r) * (H * r);
  const Real base = (em_t + em_t0) * (em_t + em_t0) - hr2;
  Real znum = (em_t - em_t0) * (em_t - em_t0) - hr2;
  // In the cone |r| <= |phi(t)-phi(t0)| we have znum >= 0 and base > 0.
  if (znum < 0.0) {
    if (znum > -1e-12 * base) {
      znum = 0.0;
    } else {
      throw DomainError("kernel_E: point outside the light cone of (x0,t0)");
    }
  }
  const Real zarg = znum / base;
  if (!(zarg < 1.0)) {
    throw DomainError("kernel_E: hypergeometric argument reached 1");
  }
  const Complex mu = spec.M / H;
  const Complex pref = std::pow(Complex(4.0, 0.0), -mu) *
                       std::exp(spec.M * (t0 + t)) *
                       std::pow(Complex(base, 0.0), mu - 0.5);
  return pref * gauss_2f1(0.5 - mu, 0.5 - mu, 1.0, zarg);
}

Complex kernel_K1_generic(Real r, Real t, const KernelSpec& spec) {
  return kernel_E(r, t, 0.0, spec);
}

Complex kernel_K1(Real r, Real t, const KernelSpec& spec) {
  const Real H = spec.H;
  if (H == 0.0) {
    throw DomainError("kernel_K1: requires H != 0");
  }
  const Real pt = (1.0 - std::exp(-H * t)) / H;
  if (r < 0.0 || r > pt * (1.0 + 1e-12) + 1e-300) {
    throw DomainError("kernel_K1: requires 0 <= r <= phi(t)");
  }
  const Real tol = 1e-12 * (1.0 + std::abs(H));
  if (std::abs(spec.M - Complex(0.5 * H)) < tol ||
      std::abs(spec.M - Complex(-0.5 * H)) < tol) {
    return 0.5 * std::exp(0.5 * H * t);
  }
  if (std::abs(spec.M - Complex(1.5 * H)) < tol) {
    return 0.25 * std::exp(-0.5 * H * t) *
           ((1.0 - H * H * r * r) * std::exp(2.0 * H * t) + 1.0);
  }
  return kernel_K1_generic(r, t, spec);
}

}  // namespace dsdirac

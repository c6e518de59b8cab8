#include "dsdirac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace dsdirac {

namespace {

constexpr Real kPi = 3.14159265358979323846264338327950288;

// Gauss-Kronrod 15-point nodes/weights (positive half; node 0 included).
// Standard QUADPACK constants.
constexpr Real kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr Real kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr Real kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GK15Result {
  Complex value;
  Real error;
};

GK15Result gk15(const std::function<Complex(Real)>& f, Real a, Real b) {
  const Real h = 0.5 * (b - a);
  const Real c = 0.5 * (a + b);
  Complex kron = 0.0;
  Complex gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Real dx = h * kXgk[i];
    Complex fsum;
    if (i == 7) {
      fsum = f(c);
    } else {
      fsum = f(c - dx) + f(c + dx);
    }
    kron += kWgk[i] * fsum;
    if (i % 2 == 1) {
      gauss += kWg[i / 2] * fsum;
    }
  }
  GK15Result r;
  r.value = kron * h;
  r.error = std::abs(kron - gauss) * std::abs(h);
  return r;
}

Complex integrate_recursive(const std::function<Complex(Real)>& f, Real a,
                            Real b, Real tol, int depth, int max_depth) {
  const GK15Result whole = gk15(f, a, b);
  if (whole.error <= tol || b - a < 1e-14 * (1.0 + std::abs(a))) {
    return whole.value;
  }
  if (depth >= max_depth) {
    throw ConvergenceError("integrate_adaptive: depth limit reached");
  }
  const Real c = 0.5 * (a + b);
  return integrate_recursive(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         integrate_recursive(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const Real dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[n - 1 - i] = x;
    gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return gl;
}

const SphereRule& sphere_rule(int degree) {
  static std::map<int, SphereRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;

  SphereRule rule;
  rule.degree = degree;
  const int ntheta = (degree + 2) / 2;  // GL(n) exact to degree 2n-1
  const int nphi = degree + 1;
  const GaussLegendre gl = gauss_legendre(ntheta);
  const Real wphi = 2.0 * kPi / nphi;
  rule.points.reserve(static_cast<size_t>(ntheta) * nphi);
  rule.weights.reserve(static_cast<size_t>(ntheta) * nphi);
  for (int i = 0; i < ntheta; ++i) {
    const Real ct = gl.nodes[i];
    const Real st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < nphi; ++j) {
      const Real ph = wphi * j;
      rule.points.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
      rule.weights.push_back(gl.weights[i] * wphi);
    }
  }
  return cache.emplace(degree, std::move(rule)).first->second;
}

Complex sphere_mean(const std::function<Complex(const Vec3&)>& f,
                    const SphereRule& rule) {
  Complex acc = 0.0;
  for (size_t i = 0; i < rule.points.size(); ++i) {
    acc += rule.weights[i] * f(rule.points[i]);
  }
  return acc / (4.0 * kPi);
}

Complex integrate_adaptive(const std::function<Complex(Real)>& f, Real a,
                           Real b, Real abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return integrate_recursive(f, a, b, abs_tol, 0, max_depth);
}

Real integrate_adaptive_real(const std::function<Real(Real)>& f, Real a,
                             Real b, Real abs_tol, int max_depth) {
  return integrate_adaptive([&f](Real x) { return Complex(f(x), 0.0); }, a, b,
                            abs_tol, max_depth)
      .real();
}

Complex derivative_richardson(const std::function<Complex(Real)>& f, Real x,
                              Real h) {
  const Complex d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const Complex d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace dsdirac

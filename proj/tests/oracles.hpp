#ifndef LOGLAP_TESTS_ORACLES_HPP
#define LOGLAP_TESTS_ORACLES_HPP

// Reference integrators that share no code with the library: fixed-step
// double-exponential rules and plain composite rules.  Tests compare the
// library against these, never against itself.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGamma = std::numbers::egamma;
inline constexpr double kLn2 = std::numbers::ln2;

/// tanh-sinh rule on (a, b); tolerates integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double h = 1.0 / 64) {
  const double r = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = -static_cast<int>(4.0 / h); k <= static_cast<int>(4.0 / h); ++k) {
    const double t = k * h;
    const double u = 0.5 * kPi * std::sinh(t);
    const double w = 0.5 * kPi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    // distance to the nearer endpoint, free of cancellation
    const double d = 2.0 * r / (std::exp(2.0 * std::abs(u)) + 1.0);
    const double y = u < 0.0 ? a + d : b - d;
    if (d == 0.0 || y <= a || y >= b) continue;
    sum += f(y) * w;
  }
  return sum * r * h;
}

/// exp-sinh rule on (0, inf).
inline double exp_sinh(const std::function<double(double)>& f, double h = 1.0 / 64) {
  double sum = 0.0;
  for (int k = -static_cast<int>(4.5 / h); k <= static_cast<int>(4.5 / h); ++k) {
    const double t = k * h;
    const double x = std::exp(0.5 * kPi * std::sinh(t));
    if (x == 0.0 || !std::isfinite(x)) continue;
    const double w = 0.5 * kPi * std::cosh(t) * x;
    const double v = f(x) * w;
    if (std::isfinite(v)) sum += v;
  }
  return sum * h;
}

/// Composite trapezoid with n intervals on [a, b].
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

/// Periodic trapezoid in theta of g(r, theta) over the disc of radius R
/// centered at the origin, tanh-sinh in r.
inline double disc(const std::function<double(double, double)>& g, double R, int n_theta = 256) {
  auto ring = [&](double r) {
    double s = 0.0;
    for (int j = 0; j < n_theta; ++j) s += g(r, 2.0 * kPi * j / n_theta);
    return r * s * 2.0 * kPi / n_theta;
  };
  return tanh_sinh(ring, 0.0, R);
}

/// Bump profile exp(1 - 1/(1 - q^2)) written out independently.
inline double bump(double q) { return std::abs(q) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q * q)) : 0.0; }

/// -(gamma + ln 2) from the Fourier side: (1/2pi) int 2 ln|xi| sqrt(2pi) e^{-xi^2/2} dxi.
inline double gaussian_loglap_origin_1d() {
  const double half = exp_sinh([](double xi) { return std::log(xi) * std::exp(-0.5 * xi * xi); });
  return 2.0 * 2.0 * half * std::sqrt(2.0 * kPi) / (2.0 * kPi);
}

}  // namespace oracle

#endif  // LOGLAP_TESTS_ORACLES_HPP

#ifndef LOGLAP_OPERATOR_HPP
#define LOGLAP_OPERATOR_HPP

// The log-Laplacian by its singular-integral representation, plus the
// closed-form semigroup evaluation used for Gaussians.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "loglap/field.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/radial.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

/// Split radius for the near-field integral.
inline constexpr double kNearFieldSplit = 1e-3;

/// L u(x) = c_N int_{B_1} (u(x) - u(x+y)) |y|^{-N} dy        (principal value)
///        - c_N int_{|y|>=1} u(x+y) |y|^{-N} dy + rho_N u(x).
///
/// With c_N omega_N = 2 and the spherical mean M = M_x this is
///
///   2 int_0^1 (u(x) - M(r))/r dr - 2 int_1^inf M(r)/r dr + rho_N u(x).
///
/// Averaging over spheres is the symmetrization 2u(x) - u(x+y) - u(x-y) of
/// the principal value, so the near-field integrand is bounded for C^{1,1}
/// fields and is integrated as an ordinary integral.
inline PointValue loglap_direct(const ScalarField& u, const Point& x, const QuadratureConfig& cfg = {}) {
  if (u.is_zero()) return {};
  if (!u.metadata().in_L10) throw std::domain_error("loglap_direct: field is not in L^1_0");
  const int N = u.dim();
  const double ux = u(x);
  const QuadratureConfig inner = spherical_mean_config(cfg);

  auto near = [&](double r) { return (ux - u.spherical_mean(x, r, inner)) / r; };
  std::vector<double> hints{kNearFieldSplit};
  for (double b : u.radial_breaks(x))
    if (b < 1.0) hints.push_back(b);
  QuadResult qn = integrate_1d(near, 0.0, 1.0, cfg.with_hints(hints));

  auto far_kernel = [](double r) { return 1.0 / r; };
  const QuadResult qf = radial_kernel_integral(u, x, far_kernel, 1.0, kInf, {}, cfg);

  PointValue out;
  out.value = 2.0 * qn.value - 2.0 * qf.value + rho_constant(N) * ux;
  out.error = 2.0 * (qn.error + qf.error);
  out.converged = qn.converged && qf.converged;
  return out;
}

/// L applied to exp(-|x|^2/(2 sigma^2)) at distance r from its center, via
/// 2 ln|xi| = int_0^inf (e^{-tau} - e^{-tau |xi|^2}) dtau / tau and the heat
/// semigroup acting on the Gaussian in closed form.
inline PointValue gaussian_loglap_semigroup(int dim, double sigma, double r, const QuadratureConfig& cfg = {}) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_loglap_semigroup: sigma must be positive");
  const double s2 = sigma * sigma;
  const double g = std::exp(-r * r / (2.0 * s2));
  // e^{-tau} g - H_tau g = -g e^{-tau} expm1(ell + tau), where
  // ln(H_tau g / g) = ell = -N/2 log1p(2 tau/s2) + r^2 tau/(s2 (s2 + 2 tau)).
  auto f = [&](double tau) {
    const double ell = -0.5 * dim * std::log1p(2.0 * tau / s2) + r * r * tau / (s2 * (s2 + 2.0 * tau));
    return -g * std::exp(-tau) * std::expm1(ell + tau) / tau;
  };
  // Large tau: the heat term alone survives, written without g.
  auto f_tail = [&](double tau) {
    const double heat = std::pow(s2 / (s2 + 2.0 * tau), 0.5 * dim) * std::exp(-r * r / (2.0 * (s2 + 2.0 * tau)));
    return (std::exp(-tau) * g - heat) / tau;
  };
  const QuadResult head = integrate_1d(f, 0.0, 1.0, cfg);
  const QuadResult tail = integrate_log_scale(f_tail, 1.0, cfg);
  return {head.value + tail.value, head.error + tail.error, head.converged && tail.converged};
}

}  // namespace loglap

#endif  // LOGLAP_OPERATOR_HPP

#ifndef LOGLAP_RADIAL_HPP
#define LOGLAP_RADIAL_HPP

// Integrals of a field against kernels depending only on |y - x|,
// reduced to one-dimensional integrals of the spherical mean M_x(r).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "loglap/field.hpp"
#include "loglap/quadrature.hpp"

namespace loglap {

/// Result of a pointwise evaluation.
struct PointValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Tolerances for the spherical means nested inside an outer integral.
inline QuadratureConfig spherical_mean_config(const QuadratureConfig& outer) {
  QuadratureConfig c;
  c.abs_tol = std::max(1e-2 * outer.abs_tol, 1e-15);
  c.rel_tol = std::max(1e-2 * outer.rel_tol, 1e-14);
  c.max_subdivisions = outer.max_subdivisions;
  return c;
}

/// int_lower^upper M_x(r) k(r) dr.  The range is clipped to where M_x can be
/// non-zero; an infinite upper limit on a global field is closed by
/// integrate_tail.  `breaks` are added to the field's own break radii.
template <class K>
QuadResult radial_kernel_integral(const ScalarField& u, const Point& x, K&& kernel, double lower, double upper,
                                  std::vector<double> breaks, const QuadratureConfig& cfg) {
  if (u.is_zero()) return {};
  const QuadratureConfig inner = spherical_mean_config(cfg);
  lower = std::max(lower, u.inner_gap(x));
  upper = std::min(upper, u.support_extent(x));
  if (!(upper > lower)) return {};
  auto integrand = [&](double r) {
    const double k = kernel(r);
    if (k == 0.0) return 0.0;
    return u.spherical_mean(x, r, inner) * k;
  };
  const auto own = u.radial_breaks(x);
  breaks.insert(breaks.end(), own.begin(), own.end());
  if (std::isfinite(upper)) return integrate_1d(integrand, lower, upper, cfg.with_hints(breaks));

  double split = std::max({std::numbers::e, 2.0 * lower, 4.0 * norm(x)});
  for (double b : breaks)
    if (std::isfinite(b)) split = std::max(split, 2.0 * b);
  std::vector<double> head_breaks;
  for (double b : breaks)
    if (b < split) head_breaks.push_back(b);
  QuadResult r = integrate_1d(integrand, lower, split, cfg.with_hints(head_breaks));
  r += integrate_tail(integrand, split, cfg);
  return r;
}

}  // namespace loglap

#endif  // LOGLAP_RADIAL_HPP

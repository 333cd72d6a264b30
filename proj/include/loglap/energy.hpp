#ifndef LOGLAP_ENERGY_HPP
#define LOGLAP_ENERGY_HPP

// The quadratic form of the log-Laplacian on compactly supported radial
// fields, evaluated three ways: the double-integral form, the pairing
// int phi L phi, and the boundary limit of the Poisson extension.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "loglap/extension.hpp"
#include "loglap/field.hpp"
#include "loglap/operator.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/radial.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

namespace detail {

inline void require_energy_field(const ScalarField& phi, const char* who) {
  if (phi.is_zero()) return;
  if (!phi.is_radial_about_origin()) throw std::invalid_argument(std::string(who) + ": field must be radial about the origin");
  if (phi.metadata().support != SupportKind::compact)
    throw std::invalid_argument(std::string(who) + ": field must be compactly supported");
}

inline QuadratureConfig energy_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.abs_tol = std::max(cfg.abs_tol, 1e-8);
  c.rel_tol = std::max(cfg.rel_tol, 1e-8);
  return c;
}

/// int over R^N of g(|x|) for a field supported in B_R, with the field's
/// break radii as hints.
template <class G>
QuadResult radial_over_support(const ScalarField& phi, G&& g, const QuadratureConfig& cfg) {
  const double R = phi.metadata().support_radius;
  std::vector<double> hints;
  for (double b : phi.radial_breaks(Point{}))
    if (b > 0.0 && b < R) hints.push_back(b);
  return integrate_radial(g, phi.dim(), 0.0, R, cfg.with_hints(hints));
}

}  // namespace detail

/// Coefficients of the far-field and mass terms.  `consistent` uses c_N and
/// rho_N, which makes the form equal to int phi L phi; `as_printed` halves
/// both, as in the displayed formula this form is quoted from.
enum class EnergyCoefficients { consistent, as_printed };

inline const char* to_string(EnergyCoefficients e) { return e == EnergyCoefficients::consistent ? "consistent" : "as_printed"; }

/// E(phi) = (c_N/2) int int_{|x-y|<1} (phi(x)-phi(y))^2 |x-y|^{-N}
///        - c_N int int_{|x-y|>=1} phi(x) phi(y) |x-y|^{-N} + rho_N ||phi||^2.
///
/// In difference coordinates with the autocorrelation
/// A(r) = int phi(x) M_x(r) dx this is
///
///   2 int_0^1 (A(0) - A(r))/r dr - 2 int_1^inf A(r)/r dr + rho_N A(0).
inline PointValue energy_quadratic_form(const ScalarField& phi, const QuadratureConfig& cfg = {},
                                        EnergyCoefficients coeffs = EnergyCoefficients::consistent) {
  detail::require_energy_field(phi, "energy_quadratic_form");
  if (phi.is_zero()) return {};
  const QuadratureConfig c = detail::energy_config(cfg);
  const QuadratureConfig inner = spherical_mean_config(c);
  const int N = phi.dim();
  const double R = phi.metadata().support_radius;

  auto A = [&](double r) {
    auto g = [&](double rho) {
      const double f = phi.profile(rho);
      return f == 0.0 ? 0.0 : f * phi.spherical_mean(Point{rho, 0.0, 0.0}, r, inner);
    };
    return detail::radial_over_support(phi, g, c.tightened(1e-2)).value;
  };
  const QuadResult mass = detail::radial_over_support(phi, [&](double rho) { return std::pow(phi.profile(rho), 2); }, c.tightened(1e-2));
  const double A0 = mass.value;

  const QuadResult near = integrate_1d([&](double r) { return (A0 - A(r)) / r; }, 0.0, std::min(1.0, 2.0 * R), c);
  QuadResult far{};
  if (2.0 * R > 1.0) far = integrate_1d([&](double r) { return A(r) / r; }, 1.0, 2.0 * R, c);
  // A(r) = A0 on (2R, 1) contributes 0 to the near term; nothing was
  // integrated there when 2R < 1, so add the constant piece explicitly.
  double tail_near = 0.0;
  if (2.0 * R < 1.0) tail_near = A0 * std::log(1.0 / (2.0 * R));

  const double k = coeffs == EnergyCoefficients::consistent ? 1.0 : 0.5;
  PointValue out;
  out.value = 2.0 * (near.value + tail_near) - k * (2.0 * far.value - rho_constant(N) * A0);
  out.error = 2.0 * near.error + k * (2.0 * far.error + std::abs(rho_constant(N)) * mass.error);
  out.converged = near.converged && far.converged && mass.converged;
  return out;
}

/// int phi(x) L phi(x) dx with L phi from loglap_direct.
inline PointValue energy_pairing(const ScalarField& phi, const QuadratureConfig& cfg = {}) {
  detail::require_energy_field(phi, "energy_pairing");
  if (phi.is_zero()) return {};
  const QuadratureConfig c = detail::energy_config(cfg);
  bool ok = true;
  auto g = [&](double rho) {
    const double f = phi.profile(rho);
    if (f == 0.0) return 0.0;
    const PointValue v = loglap_direct(phi, Point{rho, 0.0, 0.0}, c.tightened(1e-2));
    ok = ok && v.converged;
    return f * v.value;
  };
  const QuadResult q = detail::radial_over_support(phi, g, c);
  return {q.value, q.error, q.converged && ok};
}

/// 2(ln 2 - gamma) ||phi||^2 - 2 lim_{t -> 0} int (phi w_phi(.,t) + phi^2 ln t).
inline LimitEstimate energy_extension_form(const ScalarField& phi, std::span<const double> t_list = {},
                                           const QuadratureConfig& cfg = {}) {
  detail::require_energy_field(phi, "energy_extension_form");
  const std::vector<double> def = default_t_sequence();
  if (t_list.empty()) t_list = def;
  if (t_list.size() < 3) throw std::invalid_argument("energy_extension_form: need at least 3 heights");
  LimitEstimate zero;
  zero.converged = true;
  if (phi.is_zero()) return zero;
  const QuadratureConfig c = detail::energy_config(cfg);
  const double mass =
      detail::radial_over_support(phi, [&](double rho) { return std::pow(phi.profile(rho), 2); }, c.tightened(1e-2)).value;
  std::vector<LimitSample> samples;
  bool ok = true;
  for (double t : t_list) {
    const double lt = std::log(t);
    auto g = [&](double rho) {
      const double f = phi.profile(rho);
      if (f == 0.0) return 0.0;
      const ExtensionSample w = poisson_extension(phi, Point{rho, 0.0, 0.0}, t, c.tightened(1e-2));
      ok = ok && w.converged;
      return f * (w.value + f * lt);
    };
    const QuadResult q = detail::radial_over_support(phi, g, c);
    ok = ok && q.converged;
    samples.push_back({t, q.value});
  }
  LimitEstimate lim = richardson_limit(samples, LimitModel::power_alpha_plus2, 1e-6);
  const double k = 2.0 * (kLn2 - kEulerGamma);
  lim.value = k * mass - 2.0 * lim.value;
  lim.error_estimate *= 2.0;
  for (LimitSample& s : lim.samples) s.g = k * mass - 2.0 * s.g;
  lim.converged = lim.converged && ok;
  return lim;
}

}  // namespace loglap

#endif  // LOGLAP_ENERGY_HPP

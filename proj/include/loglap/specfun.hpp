#ifndef LOGLAP_SPECFUN_HPP
#define LOGLAP_SPECFUN_HPP

// Special functions and the dimension-dependent constants of the
// logarithmic Laplacian.  Every constant is available in closed form; the
// q-constants additionally by quadrature of their defining integrals.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "loglap/quadrature.hpp"

namespace loglap {

inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kLn2 = std::numbers::ln2;

/// psi(x) = Gamma'(x)/Gamma(x) for x > 0.
///
/// Upward recurrence to x >= 8, then the asymptotic series
/// ln x - 1/(2x) - sum B_{2k}/(2k x^{2k}) truncated after x^{-16}.
inline double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: argument must be positive");
  double shift = 0.0;
  while (x < 8.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // B2/2, B4/4, ..., B16/16
  const double series =
      r2 * (1.0 / 12 -
            r2 * (1.0 / 120 -
                  r2 * (1.0 / 252 -
                        r2 * (1.0 / 240 -
                              r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 * (1.0 / 12 - r2 * 3617.0 / 8160)))))));
  return shift + std::log(x) - 0.5 * r - series;
}

enum class ConstantsMethod { closed_form, quadrature };

inline const char* to_string(ConstantsMethod m) {
  return m == ConstantsMethod::closed_form ? "closed_form" : "quadrature";
}

struct ConstantsTable {
  int dimension = 1;
  double c_N = 0.0;
  double rho_N = 0.0;
  double q_N = 0.0;
  double q_tilde_N = 0.0;
  double omega_N = 0.0;
  double gamma_euler = kEulerGamma;
  ConstantsMethod method = ConstantsMethod::closed_form;
};

/// c_N = Gamma(N/2) / pi^{N/2}; also equal to 2/omega_N.
inline double kernel_constant(int dim) {
  if (dim < 1) throw std::domain_error("kernel_constant: dimension must be >= 1");
  return std::tgamma(0.5 * dim) / std::pow(std::numbers::pi, 0.5 * dim);
}

/// rho_N = 2 ln 2 + psi(N/2) - gamma.
inline double rho_constant(int dim) {
  if (dim < 1) throw std::domain_error("rho_constant: dimension must be >= 1");
  return 2.0 * kLn2 + digamma(0.5 * dim) - kEulerGamma;
}

namespace detail {

// Both q-constants by their parity-split recursions, stepping N -> N+2.
//   q~_{2m}   = q~_{2m-2} - 1/((m-1) 2^{m-1})
//   q~_{2m+1} = q~_{2m-1} - 2^{(3-2m)/2}/(2m-1)
//   q_{2m}    = q_{2m-2} + 1/((m-1) 2^{m-1}) - 1/(m-1)
//   q_{2m+1}  = q_{2m-1} + 2^{(3-2m)/2}/(2m-1) - 2/(2m-1)
struct QPair {
  double q;
  double q_tilde;
};

inline QPair q_closed_form(int dim) {
  const double asinh1 = std::log(1.0 + std::numbers::sqrt2);
  if (dim % 2 == 0) {
    QPair p{-kLn2, kLn2};
    for (int m = 2; 2 * m <= dim; ++m) {
      const double k = m - 1;
      const double a = 1.0 / (k * std::ldexp(1.0, m - 1));
      p.q_tilde -= a;
      p.q += a - 1.0 / k;
    }
    return p;
  }
  QPair p{2.0 * kLn2 - 2.0 * asinh1, 2.0 * asinh1};
  for (int m = 1; 2 * m + 1 <= dim; ++m) {
    const double odd = 2.0 * m - 1.0;
    const double a = std::pow(2.0, (3.0 - 2.0 * m) / 2.0) / odd;
    p.q_tilde -= a;
    p.q += a - 2.0 / odd;
  }
  return p;
}

}  // namespace detail

inline ConstantsTable constants_for(int dim) {
  if (dim < 1) throw std::domain_error("constants_for: dimension must be >= 1");
  ConstantsTable t;
  t.dimension = dim;
  t.omega_N = unit_sphere_area(dim);
  t.c_N = kernel_constant(dim);
  t.rho_N = rho_constant(dim);
  const auto q = detail::q_closed_form(dim);
  t.q_N = q.q;
  t.q_tilde_N = q.q_tilde;
  return t;
}

struct QConstantsQuadrature {
  double q_N;
  double q_tilde_N;
  double q_error;
  double q_tilde_error;
  bool converged;
};

/// q_N  = 2 int_1^inf ((r^2+1)^{-N/2} - r^{-N}) r^{N-1} dr
/// q~_N = 2 int_0^1   (r^2+1)^{-N/2} r^{N-1} dr
/// (the t = r^2 forms, which remove the t^{-1/2} endpoint singularity at N = 1).
inline QConstantsQuadrature q_constants_by_quadrature(int dim, double tol) {
  if (dim < 1) throw std::domain_error("q_constants_by_quadrature: dimension must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("q_constants_by_quadrature: tol must be positive");
  QuadratureConfig cfg;
  cfg.abs_tol = 0.1 * tol;
  cfg.rel_tol = 1e-15;
  const double half = 0.5 * dim;
  auto far = [half](double r) {
    // r^{N-1}((r^2+1)^{-N/2} - r^{-N}) = r^{-1} expm1(-N/2 log1p(r^{-2}))
    return 2.0 * std::expm1(-half * std::log1p(1.0 / (r * r))) / r;
  };
  auto near = [half, dim](double r) {
    return 2.0 * std::pow(1.0 + r * r, -half) * (dim == 1 ? 1.0 : std::pow(r, dim - 1));
  };
  const QuadResult qf = integrate_1d(far, 1.0, kInf, cfg);
  const QuadResult qn = integrate_1d(near, 0.0, 1.0, cfg);
  return {qf.value, qn.value, qf.error, qn.error, qf.converged && qn.converged};
}

inline ConstantsTable constants_by_quadrature(int dim, double tol = 1e-10) {
  ConstantsTable t = constants_for(dim);
  const auto q = q_constants_by_quadrature(dim, tol);
  if (!q.converged) throw std::runtime_error("constants_by_quadrature: quadrature did not converge");
  t.q_N = q.q_N;
  t.q_tilde_N = q.q_tilde_N;
  t.method = ConstantsMethod::quadrature;
  return t;
}

/// q_N + q~_N + rho_N - 2(ln 2 - gamma); zero up to rounding.
inline double identity_residual(const ConstantsTable& t) {
  return t.q_N + t.q_tilde_N + t.rho_N - 2.0 * (kLn2 - t.gamma_euler);
}

inline double constants_identity_residual(int dim) { return identity_residual(constants_for(dim)); }

struct FractionalConstants {
  int dimension = 1;
  double s = 0.5;
  double d_s = 1.0;
  double p_Ns = 0.0;
};

/// d_s = 2^{2s-1} Gamma(s)/Gamma(1-s).  p_{N,s} is fixed by unit mass of the
/// s-Poisson kernel: int (|z|^2+1)^{-(N+2s)/2} dz = (omega_N/2) B(N/2, s).
inline FractionalConstants fractional_constants(int dim, double s) {
  if (dim < 1) throw std::domain_error("fractional_constants: dimension must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("fractional_constants: s must lie in (0,1)");
  FractionalConstants f;
  f.dimension = dim;
  f.s = s;
  f.d_s = std::pow(2.0, 2.0 * s - 1.0) * std::tgamma(s) / std::tgamma(1.0 - s);
  const double mass = 0.5 * unit_sphere_area(dim) * std::beta(0.5 * dim, s);
  f.p_Ns = 1.0 / mass;
  return f;
}

/// (N c_N / 2) (omega_N / 2) B(N/2, 1): the mass of the Neumann kernel
/// t^2 (|z|^2+t^2)^{-(N+2)/2}; equals 1.
inline double neumann_kernel_mass(int dim) {
  return 0.5 * dim * kernel_constant(dim) * 0.5 * unit_sphere_area(dim) * std::beta(0.5 * dim, 1.0);
}

}  // namespace loglap

#endif  // LOGLAP_SPECFUN_HPP

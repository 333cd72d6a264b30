#ifndef LOGLAP_EXTENSION_HPP
#define LOGLAP_EXTENSION_HPP

// The Poisson extension
//
//     w_u(x,t) = (c_N/2) int u(y) (|x-y|^2 + t^2)^{-N/2} dy,
//
// its boundary behaviour as t -> 0 and the objects built on it: the Robin
// limit that yields the log-Laplacian, the fractional (s-Poisson) extension
// and its s -> 0 companions, the doubled-variable field W_u(x,y) = w_u(x,|y|)
// on R^{N+2}, finite-difference residuals of the governing equations,
// weighted-norm and divergence scans, and the unique-continuation probe.
//
// All kernel integrals go through the spherical mean about x; with
// c_N omega_N = 2 the prefactor (c_N/2) omega_N is 1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "loglap/field.hpp"
#include "loglap/operator.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/radial.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

/// H_0(X) = (c_N/2) |X|^{-N} on R^{N+1} \ {0}.
struct ExtensionKernel {
  explicit ExtensionKernel(int dim) : dimension(dim), half_c(0.5 * kernel_constant(dim)) {}

  /// X = (x, t) with x in R^N.
  [[nodiscard]] double operator()(std::span<const double> X) const {
    if (static_cast<int>(X.size()) != dimension + 1) throw std::invalid_argument("ExtensionKernel: expected N+1 coordinates");
    double r2 = 0.0;
    for (double c : X) r2 += c * c;
    if (r2 == 0.0) throw std::domain_error("ExtensionKernel: undefined at the origin");
    return half_c * std::pow(r2, -0.5 * dimension);
  }

  int dimension;
  double half_c;
};

struct ExtensionSample {
  Point x{};
  double t = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

namespace detail {

inline std::vector<double> height_breaks(double t) { return {t, 10.0 * t}; }

inline double radial_weight(int dim, double r) { return dim == 1 ? 1.0 : std::pow(r, dim - 1); }

}  // namespace detail

/// w_u(x,t) = int_0^inf M_x(r) r^{N-1} (r^2+t^2)^{-N/2} dr.
inline ExtensionSample poisson_extension(const ScalarField& u, const Point& x, double t,
                                         const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0)) throw std::domain_error("poisson_extension: t must be positive");
  if (!u.metadata().in_L10) throw std::domain_error("poisson_extension: field is not in L^1_0");
  const int N = u.dim();
  const double t2 = t * t;
  auto k = [N, t2](double r) { return detail::radial_weight(N, r) * std::pow(r * r + t2, -0.5 * N); };
  const QuadResult q = radial_kernel_integral(u, x, k, 0.0, kInf, detail::height_breaks(t), cfg);
  return {x, t, q.value, q.error, q.converged};
}

/// -t d/dt w_u(x,t) = N t^2 int_0^inf M_x(r) r^{N-1} (r^2+t^2)^{-(N+2)/2} dr,
/// from differentiating the kernel.
inline ExtensionSample neumann_flux(const ScalarField& u, const Point& x, double t, const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0)) throw std::domain_error("neumann_flux: t must be positive");
  const int N = u.dim();
  const double t2 = t * t;
  auto k = [N, t2](double r) { return N * t2 * detail::radial_weight(N, r) * std::pow(r * r + t2, -0.5 * N - 1.0); };
  const QuadResult q = radial_kernel_integral(u, x, k, 0.0, kInf, detail::height_breaks(t), cfg);
  return {x, t, q.value, q.error, q.converged};
}

/// lim_{t -> 0} (w_u(x,t) + u(x) ln t) from the given heights.
///
/// The primary estimate strips a t^2 term and then fits t^alpha by Aitken's
/// process; a plain O(t) two-point Richardson value is kept as a fallback
/// when the fit does not contract.
inline LimitEstimate robin_limit(const ScalarField& u, const Point& x, std::span<const double> t_list,
                                 const QuadratureConfig& cfg = {}, double tol = 1e-8) {
  if (t_list.size() < 3) throw std::invalid_argument("robin_limit: need at least 3 heights");
  const double ux = u(x);
  std::vector<LimitSample> samples;
  bool quad_ok = true;
  for (double t : t_list) {
    const ExtensionSample w = poisson_extension(u, x, t, cfg);
    quad_ok = quad_ok && w.converged;
    samples.push_back({t, w.value + ux * std::log(t)});
  }
  LimitEstimate est = richardson_limit(samples, LimitModel::power_alpha_plus2, tol);
  const std::size_t n = samples.size();
  const double theta = samples[n - 1].t / samples[n - 2].t;
  const double linear = (samples[n - 1].g - theta * samples[n - 2].g) / (1.0 - theta);
  if (!est.converged && std::isnan(est.exponent)) {
    // Aitken found no contracting pattern; take the O(t) value and require
    // it to agree with the t^2-stripped value it falls back from.
    est.error_estimate = std::abs(linear - est.value);
    est.value = linear;
    est.converged = est.error_estimate <= tol;
  }
  est.converged = est.converged && quad_ok;
  return est;
}

/// 2(ln 2 - gamma) u(x) - 2 lim_{t -> 0} (w_u(x,t) + u(x) ln t).
inline PointValue loglap_extension(const ScalarField& u, const Point& x, const QuadratureConfig& cfg = {},
                                   std::span<const double> t_list = {}) {
  if (u.is_zero()) return {};
  const std::vector<double> def = default_t_sequence();
  if (t_list.empty()) t_list = def;
  const LimitEstimate lim = robin_limit(u, x, t_list, cfg, 1e-6);
  return {2.0 * (kLn2 - kEulerGamma) * u(x) - 2.0 * lim.value, 2.0 * lim.error_estimate, lim.converged};
}

namespace detail {

/// Outer tolerances for L^1 norms over a ball, and the pointwise tolerances
/// nested inside them.  The norms are only read to a few digits.
inline QuadratureConfig ball_norm_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.abs_tol = std::max(cfg.abs_tol, 1e-8);
  c.rel_tol = std::max(cfg.rel_tol, 1e-8);
  return c;
}

inline QuadratureConfig pointwise_in_norm_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.abs_tol = std::max(cfg.abs_tol, 1e-10);
  c.rel_tol = std::max(cfg.rel_tol, 1e-10);
  return c;
}

}  // namespace detail

/// Integral over the ball |x| < R of g(x), radially reduced when u is
/// radial about the origin.
template <class G>
QuadResult integrate_over_ball(const ScalarField& u, G&& g, double R, const QuadratureConfig& cfg) {
  const int N = u.dim();
  const QuadratureConfig c = detail::ball_norm_config(cfg);
  if (u.is_radial_about_origin()) {
    std::vector<double> hints;
    for (double b : u.radial_breaks(Point{}))
      if (b < R) hints.push_back(b);
    auto h = [&g](double r) { return g(Point{r, 0.0, 0.0}); };
    return integrate_radial(h, N, 0.0, R, c.with_hints(hints));
  }
  return integrate_ball(g, N, Point{}, R, c);
}

/// || -t d_t w_u(.,t) - u ||_{L^1(B_R)}.
inline double neumann_trace_residual(const ScalarField& u, double t, double R, const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("neumann_trace_residual: t must lie in (0,1]");
  if (u.is_zero()) return 0.0;
  const QuadratureConfig pc = detail::pointwise_in_norm_config(cfg);
  auto g = [&](const Point& x) { return std::abs(neumann_flux(u, x, t, pc).value - u(x)); };
  return integrate_over_ball(u, g, R, cfg).value;
}

/// || w_u(.,t)/ln t + u ||_{L^1(B_R)}.
inline double log_ratio_residual(const ScalarField& u, double t, double R, const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("log_ratio_residual: t must lie in (0,1)");
  if (u.is_zero()) return 0.0;
  const double lt = std::log(t);
  const QuadratureConfig pc = detail::pointwise_in_norm_config(cfg);
  auto g = [&](const Point& x) { return std::abs(poisson_extension(u, x, t, pc).value / lt + u(x)); };
  return integrate_over_ball(u, g, R, cfg).value;
}

// ---------------------------------------------------------------------------
// Finite-difference residuals

/// div(t grad w) = t Lap_x w + d_t(t d_t w) at (x,t) by second-order central
/// differences of w(x,t), written in conservative form in t.
template <class W>
double degenerate_pde_residual(W&& w, int dim, const Point& x, double t, double h) {
  if (!(t > 0.0)) throw std::domain_error("degenerate_pde_residual: t must be positive");
  if (!(h > 0.0 && h < 0.25 * t)) throw std::domain_error("degenerate_pde_residual: need 0 < h < t/4");
  const double w0 = w(x, t);
  double lap = 0.0;
  for (int d = 0; d < dim; ++d) {
    Point xp = x, xm = x;
    xp[d] += h;
    xm[d] -= h;
    lap += w(xp, t) - 2.0 * w0 + w(xm, t);
  }
  const double wp = w(x, t + h), wm = w(x, t - h);
  const double flux = (t + 0.5 * h) * (wp - w0) - (t - 0.5 * h) * (w0 - wm);
  return (t * lap + flux) / (h * h);
}

inline double degenerate_pde_residual(const ScalarField& u, const Point& x, double t, double h,
                                      const QuadratureConfig& cfg = {}) {
  auto w = [&](const Point& p, double s) { return poisson_extension(u, p, s, cfg).value; };
  return degenerate_pde_residual(w, u.dim(), x, t, h);
}

/// W_u(x,y) = w_u(x,|y|), y in R^2 \ {0}.
inline double doubled_extension(const ScalarField& u, const Point& x, std::span<const double, 2> y,
                                const QuadratureConfig& cfg = {}) {
  const double r = std::hypot(y[0], y[1]);
  if (r == 0.0) throw std::domain_error("doubled_extension: y must be non-zero");
  return poisson_extension(u, x, r, cfg).value;
}

/// Laplacian in R^{dim+2} of W at X = (x, y1, y2) by the standard
/// (2(dim+2)+1)-point stencil.
template <class WFun>
double harmonic_residual(WFun&& W, int dim, std::span<const double> X, double h) {
  if (static_cast<int>(X.size()) != dim + 2) throw std::invalid_argument("harmonic_residual: expected N+2 coordinates");
  const double ry = std::hypot(X[dim], X[dim + 1]);
  if (!(h > 0.0 && h < 0.25 * ry)) throw std::domain_error("harmonic_residual: need 0 < h < |y|/4");
  std::vector<double> P(X.begin(), X.end());
  const double c = W(std::span<const double>(P));
  double lap = 0.0;
  for (std::size_t d = 0; d < P.size(); ++d) {
    const double keep = P[d];
    P[d] = keep + h;
    lap += W(std::span<const double>(P));
    P[d] = keep - h;
    lap += W(std::span<const double>(P));
    P[d] = keep;
    lap -= 2.0 * c;
  }
  return lap / (h * h);
}

inline double harmonic_residual(const ScalarField& u, std::span<const double> X, double h,
                                const QuadratureConfig& cfg = {}) {
  const int N = u.dim();
  auto W = [&](std::span<const double> P) {
    Point x{};
    for (int d = 0; d < N; ++d) x[d] = P[d];
    const std::array<double, 2> y{P[N], P[N + 1]};
    return doubled_extension(u, x, std::span<const double, 2>(y), cfg);
  };
  return harmonic_residual(W, N, X, h);
}

// ---------------------------------------------------------------------------
// Fractional extension and its s -> 0 companions

/// w_s(x,t) = p_{N,s} t^{2s} int u(y) (|x-y|^2+t^2)^{-(N+2s)/2} dy.
inline PointValue cs_extension(const ScalarField& u, const Point& x, double t, double s,
                               const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0)) throw std::domain_error("cs_extension: t must be positive");
  const FractionalConstants fc = fractional_constants(u.dim(), s);
  const int N = u.dim();
  const double t2 = t * t;
  auto k = [N, t2, s](double r) { return detail::radial_weight(N, r) * std::pow(r * r + t2, -0.5 * N - s); };
  const QuadResult q = radial_kernel_integral(u, x, k, 0.0, kInf, detail::height_breaks(t), cfg);
  const double pref = fc.p_Ns * std::pow(t, 2.0 * s) * unit_sphere_area(N);
  return {pref * q.value, pref * q.error, q.converged};
}

/// v_s = (2/s) ((w_s - u(x)) / t^{2s} + u(x)).
inline PointValue v_s_eval(const ScalarField& u, const Point& x, double t, double s, const QuadratureConfig& cfg = {}) {
  if (!(s > 0.0 && s <= 0.5)) throw std::domain_error("v_s_eval: s must lie in (0, 1/2]");
  const PointValue ws = cs_extension(u, x, t, s, cfg);
  const double ux = u(x);
  const double t2s = std::pow(t, 2.0 * s);
  return {(2.0 / s) * ((ws.value - ux) / t2s + ux), (2.0 / s) * ws.error / t2s, ws.converged};
}

/// v_0 = 4 (w_u(x,t) + u(x) ln t).
inline PointValue v0_eval(const ScalarField& u, const Point& x, double t, const QuadratureConfig& cfg = {}) {
  const ExtensionSample w = poisson_extension(u, x, t, cfg);
  return {4.0 * (w.value + u(x) * std::log(t)), 4.0 * w.error, w.converged};
}

/// F(t) = c_N int_{B_1 \ B_t} (|x|^2+t^2)^{-N/2} dx + 2 ln t - q_N.
inline double asympt_const_residual(int dim, double t, const QuadratureConfig& cfg = {}) {
  if (!(t > 0.0 && t < 0.5)) throw std::domain_error("asympt_const_residual: t must lie in (0, 1/2)");
  const double t2 = t * t;
  auto k = [dim, t2](double r) { return detail::radial_weight(dim, r) * std::pow(r * r + t2, -0.5 * dim); };
  QuadratureConfig c = cfg;
  c.abs_tol = std::min(cfg.abs_tol, 1e-14);
  const QuadResult q = integrate_1d(k, t, 1.0, c.with_hints({10.0 * t}));
  return 2.0 * q.value + 2.0 * std::log(t) - constants_for(dim).q_N;
}

/// ||w_u(.,t)||_{L^1_sigma} = int |w_u(x,t)| (1+|x|)^{-sigma} dx for each t;
/// u must be radial about the origin.
inline std::vector<double> weighted_norm_scan(const ScalarField& u, double sigma, std::span<const double> t_list,
                                              const QuadratureConfig& cfg = {}) {
  if (!(sigma > 0.0)) throw std::domain_error("weighted_norm_scan: sigma must be positive");
  std::vector<double> out;
  if (u.is_zero()) return std::vector<double>(t_list.size(), 0.0);
  if (!u.is_radial_about_origin()) throw std::invalid_argument("weighted_norm_scan: field must be radial about the origin");
  const int N = u.dim();
  QuadratureConfig c = cfg;
  c.abs_tol = std::max(cfg.abs_tol, 1e-10);
  c.rel_tol = std::max(cfg.rel_tol, 1e-10);
  for (double t : t_list) {
    auto g = [&](double r) {
      return std::abs(poisson_extension(u, Point{r, 0, 0}, t, cfg).value) * std::pow(1.0 + r, -sigma) *
             detail::radial_weight(N, r);
    };
    const double split = std::max(std::numbers::e, 4.0 * t);
    std::vector<double> hints = u.radial_breaks(Point{});
    hints.push_back(t);
    const QuadResult head = integrate_1d(g, 0.0, split, c.with_hints(hints));
    const QuadResult tail = integrate_tail(g, split, c);
    out.push_back(unit_sphere_area(N) * (head.value + tail.value));
  }
  return out;
}

struct CounterexampleScan {
  std::vector<double> radii;
  /// int_{B_R \ B_1} w_u(x,t) (1+|x|)^{-N} dx.
  std::vector<double> extension_integral;
  /// int_{B_R} u(x) (1+|x|)^{-N} dx.
  std::vector<double> field_integral;
  bool converged = true;
};

/// Partial weighted integrals for u = log_power(tau): the first diverges as
/// R -> inf, the companion converges.
inline CounterexampleScan counterexample_scan(double tau, int dim, double t, std::span<const double> radii,
                                              const QuadratureConfig& cfg = {}) {
  if (!(tau > 1.0 && tau < 2.0)) throw std::domain_error("counterexample_scan: tau must lie in (1,2)");
  if (!(t > 0.0)) throw std::domain_error("counterexample_scan: t must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 1.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw std::invalid_argument("counterexample_scan: radii must be increasing and > 1");
  const double params[] = {tau};
  const ScalarField u = catalog("log_power", dim, params);
  const double omega = unit_sphere_area(dim);
  // Only the growth pattern across decades matters here, so the nested
  // tolerances are looser than the library defaults.
  QuadratureConfig c = cfg;
  c.abs_tol = std::max(cfg.abs_tol, 1e-8);
  c.rel_tol = std::max(cfg.rel_tol, 1e-8);
  QuadratureConfig inner = cfg;
  inner.abs_tol = std::max(cfg.abs_tol, 1e-10);
  inner.rel_tol = std::max(cfg.rel_tol, 1e-10);

  bool ok = true;
  // Integrate in v = ln r so each decade costs the same.
  auto ext = [&](double v) {
    const double r = std::exp(v);
    const ExtensionSample w = poisson_extension(u, Point{r, 0, 0}, t, inner);
    ok = ok && w.converged;
    return std::pow(r / (1.0 + r), dim) * w.value;
  };
  auto fld = [&](double v) {
    const double r = std::exp(v);
    return std::pow(r / (1.0 + r), dim) * u.profile(r);
  };
  CounterexampleScan out;
  out.radii.assign(radii.begin(), radii.end());
  // B_1: u is constant there.
  auto ball = [&](double r) { return u.profile(r) * std::pow(1.0 + r, -dim) * detail::radial_weight(dim, r); };
  QuadResult acc_field = integrate_1d(ball, 0.0, 1.0, c).scaled(omega);
  QuadResult acc_ext{};
  double lo = 0.0;
  for (double R : radii) {
    const double hi = std::log(R);
    acc_ext += integrate_1d(ext, lo, hi, c).scaled(omega);
    acc_field += integrate_1d(fld, lo, hi, c).scaled(omega);
    out.extension_integral.push_back(acc_ext.value);
    out.field_integral.push_back(acc_field.value);
    lo = hi;
  }
  out.converged = ok && acc_ext.converged && acc_field.converged;
  return out;
}

struct UcpProbe {
  std::vector<Point> points;
  std::vector<double> values;
  double max_abs_loglap = 0.0;
  bool u_zero_on_omega = true;
};

/// Evaluates L u on a deterministic cloud in the ball B(center, radius),
/// where u must vanish.  A nonzero field vanishing on the ball cannot also
/// have L u vanishing there, so a strictly positive maximum is expected.
inline UcpProbe ucp_probe(const ScalarField& u, const Point& center, double radius, const QuadratureConfig& cfg = {},
                          int cloud = 9) {
  if (!(radius > 0.0)) throw std::domain_error("ucp_probe: radius must be positive");
  const int N = u.dim();
  auto radical_inverse = [](unsigned i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * (i % base);
      i /= base;
    }
    return r;
  };
  auto ball_point = [&](unsigned i, double scale) {
    const double a = radical_inverse(i, 2), b = radical_inverse(i, 3), c = radical_inverse(i, 5);
    Point p = center;
    if (N == 1) {
      p[0] += scale * radius * (2.0 * a - 1.0);
    } else if (N == 2) {
      const double rad = scale * radius * std::sqrt(a);
      p[0] += rad * std::cos(2.0 * std::numbers::pi * b);
      p[1] += rad * std::sin(2.0 * std::numbers::pi * b);
    } else {
      const double rad = scale * radius * std::cbrt(a);
      const double z = 2.0 * b - 1.0, rr = std::sqrt(std::max(0.0, 1.0 - z * z));
      p[0] += rad * rr * std::cos(2.0 * std::numbers::pi * c);
      p[1] += rad * rr * std::sin(2.0 * std::numbers::pi * c);
      p[2] += rad * z;
    }
    return p;
  };
  UcpProbe out;
  const double tol = 1e-14 * std::max(u.magnitude(), 1.0);
  for (unsigned i = 1; i <= 256; ++i)
    if (std::abs(u(ball_point(i, 0.999))) > tol) out.u_zero_on_omega = false;
  if (std::abs(u(center)) > tol) out.u_zero_on_omega = false;
  if (!out.u_zero_on_omega) throw std::domain_error("ucp_probe: field does not vanish on the ball");
  out.points.push_back(center);
  for (int i = 1; i < cloud; ++i) out.points.push_back(ball_point(static_cast<unsigned>(i), 1.0));
  for (const Point& p : out.points) {
    const double v = loglap_direct(u, p, cfg).value;
    out.values.push_back(v);
    out.max_abs_loglap = std::max(out.max_abs_loglap, std::abs(v));
  }
  return out;
}

}  // namespace loglap

#endif  // LOGLAP_EXTENSION_HPP

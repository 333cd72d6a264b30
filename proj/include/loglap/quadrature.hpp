#ifndef LOGLAP_QUADRATURE_HPP
#define LOGLAP_QUADRATURE_HPP

/**
 * Deterministic integration primitives.
 *
 * integrate_1d is a globally adaptive Gauss-Kronrod (10/21) scheme in the
 * spirit of QUADPACK's QAGS without the epsilon-algorithm: the interval
 * with the largest error estimate is bisected until the requested accuracy
 * is reached or the subdivision budget runs out.  The order in which
 * intervals are refined depends only on the integrand values, so repeated
 * runs are bit-identical.
 *
 * Semi-infinite ranges use the algebraic map x = a + u/(1-u).  Integrands
 * that decay only like 1/x (far-field kernels |y|^{-N} against a radial
 * measure) are better served by integrate_log_scale, which integrates in
 * v = ln x first.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace loglap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
  /// Interior or endpoint locations where the integrand is rough; the
  /// initial partition is split there.
  std::vector<double> singularity_hints{};

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
  }

  [[nodiscard]] QuadratureConfig with_hints(std::vector<double> hints) const {
    QuadratureConfig c = *this;
    c.singularity_hints = std::move(hints);
    return c;
  }
  [[nodiscard]] QuadratureConfig tightened(double factor) const {
    QuadratureConfig c = *this;
    c.abs_tol *= factor;
    c.singularity_hints.clear();
    return c;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int intervals = 0;
  long evaluations = 0;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    intervals += o.intervals;
    evaluations += o.evaluations;
    return *this;
  }
  friend QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }
  [[nodiscard]] QuadResult scaled(double s) const {
    QuadResult r = *this;
    r.value *= s;
    r.error *= std::abs(s);
    return r;
  }
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452158, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool refinable;
};

template <class F>
Segment gauss_kronrod21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = f(centr);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> fv1{}, fv2{};
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(result)) err = kInf;

  const double scale = std::max(std::abs(a), std::abs(b));
  const bool refinable = (b - a) > 1e3 * eps * std::max(scale, 1e-300);
  return {a, b, result, err, refinable};
}

struct SegmentOrder {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

template <class F>
QuadResult adaptive_finite(F&& f, std::vector<double> breaks, const QuadratureConfig& cfg) {
  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> heap;
  std::vector<Segment> frozen;
  long evals = 0;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Segment s = gauss_kronrod21(f, breaks[i], breaks[i + 1]);
    evals += 21;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int subdivisions = 0;
  auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (!heap.empty() && total_err > tolerance() && subdivisions < cfg.max_subdivisions) {
    Segment worst = heap.top();
    heap.pop();
    if (!worst.refinable || !std::isfinite(worst.value)) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod21(f, worst.a, mid);
    Segment right = gauss_kronrod21(f, mid, worst.b);
    evals += 42;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum in positional order so the value does not depend on update history.
  std::vector<Segment> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  QuadResult r;
  r.value = 0.0;
  r.error = 0.0;
  for (const auto& s : all) {
    r.value += s.value;
    r.error += s.error;
  }
  r.intervals = static_cast<int>(all.size());
  r.evaluations = evals;
  r.converged = std::isfinite(r.value) && r.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value));
  return r;
}

inline std::vector<double> make_breaks(double a, double b, std::span<const double> hints) {
  std::vector<double> br{a};
  for (double h : hints)
    if (h > a && h < b) br.push_back(h);
  br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

}  // namespace detail

/// Integrates f over (a, b); b may be +inf.  Non-convergence is reported
/// through QuadResult::converged, never thrown.
template <class F>
QuadResult integrate_1d(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (a == b) return {};
  if (b < a) return integrate_1d(f, b, a, cfg).scaled(-1.0);
  if (std::isinf(a)) throw std::invalid_argument("integrate_1d: lower limit must be finite");
  if (!std::isinf(b)) return detail::adaptive_finite(f, detail::make_breaks(a, b, cfg.singularity_hints), cfg);

  // x = a + u/(1-u); hints are mapped to u = (x-a)/(1+x-a).
  std::vector<double> uh;
  for (double h : cfg.singularity_hints)
    if (h > a) uh.push_back((h - a) / (1.0 + h - a));
  auto g = [&f, a](double u) {
    const double om = 1.0 - u;
    const double x = a + u / om;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (om * om);
  };
  return detail::adaptive_finite(g, detail::make_breaks(0.0, 1.0, uh), cfg);
}

/// Integrates f over (a, inf), a > 0, after the substitution x = e^v.
/// Suitable for tails decaying like x^{-1} times a slowly varying factor.
template <class F>
QuadResult integrate_log_scale(F&& f, double a, const QuadratureConfig& cfg = {}) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_log_scale: lower limit must be positive");
  QuadratureConfig c = cfg;
  c.singularity_hints.clear();
  for (double h : cfg.singularity_hints)
    if (h > a) c.singularity_hints.push_back(std::log(h));
  auto g = [&f](double v) {
    const double x = std::exp(v);
    if (!std::isfinite(x)) return 0.0;
    const double y = f(x);
    return y == 0.0 ? 0.0 : y * x;
  };
  return integrate_1d(g, std::log(a), kInf, c);
}

/// Integrates f over (a, inf), a > 1, after x = exp(exp(q)).  Tails like
/// 1/(x ln^tau x), tau > 1, become exponentially decaying in q.
template <class F>
QuadResult integrate_tail(F&& f, double a, const QuadratureConfig& cfg = {}) {
  if (!(a > 1.0)) throw std::invalid_argument("integrate_tail: lower limit must exceed 1");
  QuadratureConfig c = cfg;
  c.singularity_hints.clear();
  for (double h : cfg.singularity_hints)
    if (h > a) c.singularity_hints.push_back(std::log(std::log(h)));
  auto g = [&f](double q) {
    const double v = std::exp(q);
    const double x = std::exp(v);
    if (!std::isfinite(x)) return 0.0;
    const double y = f(x);
    return y == 0.0 ? 0.0 : y * x * v;
  };
  return integrate_1d(g, std::log(std::log(a)), kInf, c);
}

/// Surface area of the unit sphere in R^N.
inline double unit_sphere_area(int dim) {
  if (dim < 1) throw std::domain_error("unit_sphere_area: dimension must be >= 1");
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

/// omega_N * int_{r0}^{r1} g(r) r^{N-1} dr, i.e. the integral of the radial
/// function x -> g(|x|) over the shell r0 < |x| < r1.
template <class G>
QuadResult integrate_radial(G&& g, int dim, double r0, double r1, const QuadratureConfig& cfg = {}) {
  if (!(r0 >= 0.0)) throw std::invalid_argument("integrate_radial: r0 must be >= 0");
  const double omega = unit_sphere_area(dim);
  auto h = [&g, dim](double r) {
    const double v = g(r);
    if (v == 0.0) return 0.0;
    return dim == 1 ? v : v * std::pow(r, dim - 1);
  };
  return integrate_1d(h, r0, r1, cfg).scaled(omega);
}

// ---------------------------------------------------------------------------
// Limit extraction

struct LimitSample {
  double t;
  double g;
};

struct LimitEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<LimitSample> samples{};
  bool converged = false;
  /// Fitted exponent for the unknown-rate model; NaN otherwise.
  double exponent = std::numeric_limits<double>::quiet_NaN();
};

enum class LimitModel {
  /// g(t) = g0 + a t^2 + b t^4 + ...
  power2,
  /// g(t) = g0 + a t^alpha + b t^2 with unknown alpha in (0, 2].
  power_alpha_plus2,
};

namespace detail {

inline double geometric_ratio(std::span<const LimitSample> s) {
  if (s.size() < 3) throw std::invalid_argument("richardson_limit: need at least 3 samples");
  const double theta = s[1].t / s[0].t;
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("richardson_limit: t-sequence must decrease geometrically");
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double q = s[k].t / s[k - 1].t;
    if (std::abs(q - theta) > 1e-9 * theta)
      throw std::invalid_argument("richardson_limit: t-sequence is not geometric");
  }
  return theta;
}

// One Aitken step on x0, x1, x2 taken at geometric t; returns nullopt-like NaN
// when the differences are not in a monotone contracting pattern.
inline double aitken(double x0, double x1, double x2, double* ratio_out) {
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(x0), std::abs(x1), std::abs(x2), 1e-300});
  if (std::abs(d2) <= noise) {
    *ratio_out = 0.0;
    return x2;
  }
  const double r = d2 / d1;
  *ratio_out = r;
  if (!(r > 0.0 && r < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return x2 + d2 * r / (1.0 - r);
}

}  // namespace detail

/// Extrapolates g(t) to t -> 0 from samples at t_k = t_0 theta^k.
inline LimitEstimate richardson_limit(std::span<const LimitSample> samples, LimitModel model,
                                      double tol = 1e-8) {
  const double theta = detail::geometric_ratio(samples);
  LimitEstimate out;
  out.samples.assign(samples.begin(), samples.end());
  const std::size_t n = samples.size();

  if (model == LimitModel::power2) {
    // Two elimination columns (t^2 then t^4).
    std::vector<std::vector<double>> T(n, std::vector<double>(3, 0.0));
    for (std::size_t k = 0; k < n; ++k) T[k][0] = samples[k].g;
    const std::size_t cols = std::min<std::size_t>(3, n);
    for (std::size_t j = 1; j < cols; ++j) {
      const double f = std::pow(theta, -2.0 * static_cast<double>(j)) - 1.0;
      for (std::size_t k = j; k < n; ++k) T[k][j] = T[k][j - 1] + (T[k][j - 1] - T[k - 1][j - 1]) / f;
    }
    const std::size_t last = cols - 1;
    out.value = T[n - 1][last];
    out.error_estimate = (n - 1 > last) ? std::abs(T[n - 1][last] - T[n - 2][last])
                                        : std::abs(T[n - 1][last] - T[n - 1][last - 1]);
    out.exponent = 2.0;
    out.converged = std::isfinite(out.value) && out.error_estimate <= tol;
    return out;
  }

  // Mixed model: strip t^2 first, then Aitken on the t^alpha remainder.
  std::vector<double> h;
  if (n >= 4) {
    const double th2 = theta * theta;
    for (std::size_t k = 0; k + 1 < n; ++k) h.push_back((samples[k + 1].g - th2 * samples[k].g) / (1.0 - th2));
  } else {
    for (const auto& s : samples) h.push_back(s.g);
  }
  std::vector<double> est;
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 2 < h.size(); ++k) {
    double r = 0.0;
    const double e = detail::aitken(h[k], h[k + 1], h[k + 2], &r);
    est.push_back(e);
    ratios.push_back(r);
  }
  const double e_last = est.back();
  if (!std::isfinite(e_last)) {
    // Differences not contracting: report the last stripped value, flagged.
    out.value = h.back();
    out.error_estimate = std::abs(h.back() - h[h.size() - 2]);
    out.converged = false;
    return out;
  }
  out.value = e_last;
  if (est.size() >= 2 && std::isfinite(est[est.size() - 2]))
    out.error_estimate = std::abs(e_last - est[est.size() - 2]);
  else
    out.error_estimate = std::abs(e_last - h.back());
  const double r = ratios.back();
  out.exponent = r > 0.0 ? std::log(r) / std::log(theta) : std::numeric_limits<double>::quiet_NaN();
  out.converged = out.error_estimate <= tol;
  return out;
}

/// Default height sequence 0.2 * 2^{-k}, k = 0..count-1.
inline std::vector<double> default_t_sequence(int count = 8, double t0 = 0.2, double theta = 0.5) {
  std::vector<double> ts;
  double t = t0;
  for (int k = 0; k < count; ++k, t *= theta) ts.push_back(t);
  return ts;
}

}  // namespace loglap

#endif  // LOGLAP_QUADRATURE_HPP

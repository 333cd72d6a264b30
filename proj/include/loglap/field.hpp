#ifndef LOGLAP_FIELD_HPP
#define LOGLAP_FIELD_HPP

// Analytic test fields.
//
// A ScalarField is a finite weighted sum of radial bumps, each radial about
// its own center.  This covers every catalog entry and is closed under
// linear combination and translation.  The representation exposes the
// spherical mean
//
//     M_x(r) = average of u over the sphere |y - x| = r,
//
// which every operator in the library reduces to: integrals of u against a
// kernel depending only on |y - x| become one-dimensional integrals of M_x.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "loglap/quadrature.hpp"
#include "loglap/specfun.hpp"

namespace loglap {

/// Point in R^N, N <= 3; unused coordinates are zero.
using Point = std::array<double, 3>;

inline double norm(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Radial profile f with u(x) = f(|x - center|).
struct RadialProfile {
  std::function<double(double)> value;
  /// f vanishes outside (r_in, r_out).
  double r_in = 0.0;
  double r_out = kInf;
  /// Radii where f is not smooth.
  std::vector<double> kinks{};
  /// Upper bound on |f|, used to scale absolute tolerances.
  double magnitude = 1.0;
};

enum class SupportKind { compact, global };
enum class Smoothness { c_inf, dini, holder };

inline const char* to_string(SupportKind s) { return s == SupportKind::compact ? "compact" : "global"; }
inline const char* to_string(Smoothness s) {
  switch (s) {
    case Smoothness::c_inf: return "C_inf";
    case Smoothness::dini: return "Dini";
    case Smoothness::holder: return "Holder";
  }
  return "?";
}

struct FieldMetadata {
  SupportKind support = SupportKind::global;
  double support_radius = kInf;
  Smoothness smoothness = Smoothness::c_inf;
  double holder_exponent = 1.0;
  bool in_L10 = true;
  std::optional<double> closed_form_loglap_at_origin{};
  std::string provenance{};
  std::string note{};
};

class ScalarField {
 public:
  struct Term {
    double weight;
    Point center;
    std::shared_ptr<const RadialProfile> profile;
  };

  ScalarField() = default;
  ScalarField(int dim, std::string name, std::vector<Term> terms, FieldMetadata meta)
      : dim_(dim), name_(std::move(name)), terms_(std::move(terms)), meta_(std::move(meta)) {
    if (dim_ < 1) throw std::invalid_argument("ScalarField: dimension must be >= 1");
  }

  static ScalarField radial(int dim, std::string name, RadialProfile profile, FieldMetadata meta) {
    return ScalarField(dim, std::move(name),
                       {Term{1.0, Point{}, std::make_shared<const RadialProfile>(std::move(profile))}},
                       std::move(meta));
  }
  static ScalarField zero(int dim) {
    FieldMetadata m;
    m.support = SupportKind::compact;
    m.support_radius = 0.0;
    m.closed_form_loglap_at_origin = 0.0;
    m.provenance = "identically zero";
    return ScalarField(dim, "zero", {}, m);
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const FieldMetadata& metadata() const { return meta_; }
  [[nodiscard]] std::span<const Term> terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  double operator()(const Point& x) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.weight * t.profile->value(norm(x - t.center));
    return v;
  }

  /// Bound on sup |u|.
  [[nodiscard]] double magnitude() const {
    double m = 0.0;
    for (const auto& t : terms_) m += std::abs(t.weight) * t.profile->magnitude;
    return m;
  }

  /// True when every term is centered at the origin.
  [[nodiscard]] bool is_radial_about_origin() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return norm(t.center) == 0.0; });
  }

  /// Radial profile about the origin; requires is_radial_about_origin().
  [[nodiscard]] double profile(double r) const { return (*this)(Point{r, 0.0, 0.0}); }

  /// Spherical mean of u about x at radius r.
  [[nodiscard]] double spherical_mean(const Point& x, double r, const QuadratureConfig& cfg) const {
    double m = 0.0;
    for (const auto& t : terms_) m += t.weight * term_mean(t, x, r, cfg);
    return m;
  }

  /// Radii at which r -> M_x(r) may lose smoothness or switch on/off.
  [[nodiscard]] std::vector<double> radial_breaks(const Point& x) const {
    std::vector<double> br;
    for (const auto& t : terms_) {
      const double rho = norm(x - t.center);
      if (rho > 0.0) br.push_back(rho);
      std::vector<double> special = t.profile->kinks;
      if (t.profile->r_in > 0.0) special.push_back(t.profile->r_in);
      if (std::isfinite(t.profile->r_out)) special.push_back(t.profile->r_out);
      for (double a : special) {
        if (std::abs(rho - a) > 0.0) br.push_back(std::abs(rho - a));
        br.push_back(rho + a);
      }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
  }

  /// Smallest R such that M_x(r) = 0 for r > R; +inf for global support.
  [[nodiscard]] double support_extent(const Point& x) const {
    double R = 0.0;
    for (const auto& t : terms_) R = std::max(R, norm(x - t.center) + t.profile->r_out);
    return R;
  }

  /// Largest r0 such that M_x(r) = 0 for r < r0.
  [[nodiscard]] double inner_gap(const Point& x) const {
    double g = kInf;
    for (const auto& t : terms_) {
      const double rho = norm(x - t.center);
      g = std::min(g, std::max({0.0, rho - t.profile->r_out, t.profile->r_in - rho}));
    }
    return terms_.empty() ? 0.0 : g;
  }

  [[nodiscard]] ScalarField scaled(double k, std::string name = {}) const {
    ScalarField f = *this;
    for (auto& t : f.terms_) t.weight *= k;
    if (k == 0.0) f.terms_.clear();
    if (f.meta_.closed_form_loglap_at_origin) *f.meta_.closed_form_loglap_at_origin *= k;
    if (!name.empty()) f.name_ = std::move(name);
    return f;
  }

  [[nodiscard]] ScalarField translated(const Point& shift) const {
    ScalarField f = *this;
    for (auto& t : f.terms_) t.center = t.center + shift;
    f.meta_.closed_form_loglap_at_origin.reset();
    if (f.meta_.support == SupportKind::compact) f.meta_.support_radius += norm(shift);
    f.name_ += "@shifted";
    return f;
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("ScalarField: dimension mismatch");
    std::vector<Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    FieldMetadata m;
    const bool compact = a.meta_.support == SupportKind::compact && b.meta_.support == SupportKind::compact;
    m.support = compact ? SupportKind::compact : SupportKind::global;
    m.support_radius = compact ? std::max(a.meta_.support_radius, b.meta_.support_radius) : kInf;
    m.smoothness = std::max(a.meta_.smoothness, b.meta_.smoothness);
    m.holder_exponent = std::min(a.meta_.holder_exponent, b.meta_.holder_exponent);
    m.in_L10 = a.meta_.in_L10 && b.meta_.in_L10;
    if (a.meta_.closed_form_loglap_at_origin && b.meta_.closed_form_loglap_at_origin)
      m.closed_form_loglap_at_origin = *a.meta_.closed_form_loglap_at_origin + *b.meta_.closed_form_loglap_at_origin;
    m.provenance = "linear combination";
    return ScalarField(a.dim_, a.name_ + "+" + b.name_, std::move(terms), m);
  }

 private:
  double term_mean(const Term& t, const Point& x, double r, const QuadratureConfig& cfg) const {
    const RadialProfile& p = *t.profile;
    const double rho = norm(x - t.center);
    if (r == 0.0 || rho <= 1e-15 * r) return p.value(r == 0.0 ? rho : r);
    if (rho + r <= p.r_in || std::abs(rho - r) >= p.r_out) return 0.0;
    if (dim_ == 1) return 0.5 * (p.value(rho + r) + p.value(std::abs(rho - r)));

    QuadratureConfig c = cfg;
    c.abs_tol = cfg.abs_tol * std::max(p.magnitude, 1e-300);
    c.singularity_hints.clear();

    // Angle phi between y - x and x - center; s^2 = (rho-r)^2 + 4 rho r cos^2(phi/2).
    const double two_rr = 2.0 * rho * r;
    auto phi_of = [&](double s) {
      const double cphi = (s * s - rho * rho - r * r) / two_rr;
      return std::acos(std::clamp(cphi, -1.0, 1.0));
    };
    const double phi_a = std::isfinite(p.r_out) ? phi_of(p.r_out) : 0.0;
    const double phi_b = p.r_in > 0.0 ? phi_of(p.r_in) : std::numbers::pi;
    if (!(phi_b > phi_a)) return 0.0;
    for (double k : p.kinks)
      if (k > std::abs(rho - r) && k < rho + r) c.singularity_hints.push_back(phi_of(k));
    const double d = rho - r;
    const int dim = dim_;
    auto g = [&, d, dim](double phi) {
      const double ch = std::cos(0.5 * phi);
      const double s = std::sqrt(d * d + 4.0 * rho * r * ch * ch);
      const double v = p.value(s);
      return dim == 2 ? v : v * std::pow(std::sin(phi), dim - 2);
    };
    const double weight = unit_sphere_area(dim_ - 1) / unit_sphere_area(dim_);
    return weight * integrate_1d(g, phi_a, phi_b, c).value;
  }

  int dim_ = 1;
  std::string name_{};
  std::vector<Term> terms_{};
  FieldMetadata meta_{};
};

// ---------------------------------------------------------------------------
// Catalog

namespace detail {

// exp(1 - 1/(1 - q^2)) on |q| < 1, zero elsewhere; C^inf with peak 1 at q = 0.
inline double bump_shape(double q) {
  const double q2 = q * q;
  if (q2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - q2));
}

inline void require_params(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() != n)
    throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n) + " parameter(s), got " +
                                std::to_string(params.size()));
}

}  // namespace detail

/// Names accepted by catalog().
inline std::vector<std::string> catalog_names() {
  return {"gaussian", "smooth_bump", "annulus_bump", "log_power", "constant", "zero"};
}

/// u = exp(-|x|^2 / (2 sigma^2)).  Its log-Laplacian at the origin is the
/// log-moment of a chi-square variable: psi(N/2) + ln 2 - 2 ln sigma.
inline ScalarField gaussian_field(int dim, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  RadialProfile p{[inv](double r) { return std::exp(-r * r * inv); }, 0.0, kInf, {}, 1.0};
  FieldMetadata m;
  m.closed_form_loglap_at_origin = digamma(0.5 * dim) + kLn2 - 2.0 * std::log(sigma);
  m.provenance = "E[ln chi^2_N] + ln 2 - 2 ln sigma (Fourier side)";
  return ScalarField::radial(dim, "gaussian", std::move(p), m);
}

inline ScalarField catalog(std::string_view name, int dim, std::span<const double> params) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("catalog: dimension must be 1, 2 or 3");
  if (name == "gaussian") {
    detail::require_params(name, params, params.empty() ? 0 : 1);
    const double sigma = params.empty() ? 1.0 : params[0];
    return gaussian_field(dim, sigma);
  }
  if (name == "smooth_bump") {
    detail::require_params(name, params, params.empty() ? 0 : 1);
    const double R = params.empty() ? 1.0 : params[0];
    if (!(R > 0.0)) throw std::invalid_argument("smooth_bump: radius must be positive");
    RadialProfile p{[R](double r) { return detail::bump_shape(r / R); }, 0.0, R, {}, 1.0};
    FieldMetadata m;
    m.support = SupportKind::compact;
    m.support_radius = R;
    m.provenance = "exp(1 - 1/(1-|x/R|^2)) on B_R";
    return ScalarField::radial(dim, "smooth_bump", std::move(p), m);
  }
  if (name == "annulus_bump") {
    detail::require_params(name, params, 2);
    const double a = params[0], b = params[1];
    if (!(a >= 0.0 && b > a)) throw std::invalid_argument("annulus_bump: need 0 <= r_in < r_out");
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    RadialProfile p{[mid, half](double r) { return detail::bump_shape((r - mid) / half); }, a, b, {}, 1.0};
    FieldMetadata m;
    m.support = SupportKind::compact;
    m.support_radius = b;
    m.provenance = "bump profile of the shell r_in < |x| < r_out";
    return ScalarField::radial(dim, "annulus_bump", std::move(p), m);
  }
  if (name == "log_power") {
    detail::require_params(name, params, 1);
    const double tau = params[0];
    if (!(tau > 1.0 && tau < 2.0)) throw std::invalid_argument("log_power: tau must lie in (1,2)");
    const double cap = std::pow(std::log(2.0), -tau);
    RadialProfile p{[tau, cap](double r) { return r <= 1.0 ? cap : std::pow(std::log1p(r), -tau); },
                    0.0, kInf, {1.0}, cap};
    FieldMetadata m;
    m.support = SupportKind::global;
    m.smoothness = Smoothness::holder;
    m.holder_exponent = 1.0;
    m.provenance = "ln^{-tau}(1+|x|) for |x| >= 1";
    m.note = "capped at its |x| = 1 value inside the unit ball (the formula is singular at the origin)";
    return ScalarField::radial(dim, "log_power", std::move(p), m);
  }
  if (name == "constant") {
    detail::require_params(name, params, params.empty() ? 0 : 1);
    const double c = params.empty() ? 1.0 : params[0];
    RadialProfile p{[c](double) { return c; }, 0.0, kInf, {}, std::abs(c)};
    FieldMetadata m;
    m.in_L10 = (c == 0.0);
    m.provenance = "constant";
    return ScalarField::radial(dim, "constant", std::move(p), m);
  }
  if (name == "zero") {
    detail::require_params(name, params, 0);
    return ScalarField::zero(dim);
  }
  throw std::invalid_argument("catalog: unknown function '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Ball integration and norms

/// Integral of g over the ball |x - center| < R in R^N by nested polar
/// quadrature (spherical coordinates for N = 3).
template <class G>
QuadResult integrate_ball(G&& g, int dim, const Point& center, double R, const QuadratureConfig& cfg) {
  if (dim == 1) {
    auto h = [&](double s) { return g(Point{center[0] + s, 0.0, 0.0}); };
    return integrate_1d(h, -R, R, cfg);
  }
  QuadratureConfig inner = cfg.tightened(1e-2);
  if (dim == 2) {
    auto ring = [&](double r) {
      auto h = [&](double th) { return g(Point{center[0] + r * std::cos(th), center[1] + r * std::sin(th), 0.0}); };
      return r * integrate_1d(h, 0.0, 2.0 * std::numbers::pi, inner).value;
    };
    return integrate_1d(ring, 0.0, R, cfg);
  }
  if (dim == 3) {
    auto shell = [&](double r) {
      auto polar = [&](double th) {
        auto h = [&](double ph) {
          return g(Point{center[0] + r * std::sin(th) * std::cos(ph), center[1] + r * std::sin(th) * std::sin(ph),
                         center[2] + r * std::cos(th)});
        };
        return std::sin(th) * integrate_1d(h, 0.0, 2.0 * std::numbers::pi, inner.tightened(1e-2)).value;
      };
      return r * r * integrate_1d(polar, 0.0, std::numbers::pi, inner).value;
    };
    return integrate_1d(shell, 0.0, R, cfg);
  }
  throw std::invalid_argument("integrate_ball: dimension must be 1, 2 or 3");
}

struct L10Norm {
  double value = 0.0;
  double head = 0.0;
  double tail = 0.0;
  double tail_error = 0.0;
  double quadrature_error = 0.0;
  bool finite = true;
};

/// int (1+|x|)^{-N} |u(x)| dx.  Radial fields are reduced to one dimension;
/// the tail beyond the head radius is summed over doubling segments in
/// ln|x| and closed with a geometric remainder.  A non-contracting segment
/// sequence is reported as an infinite norm.
inline L10Norm l10_norm(const ScalarField& u, const QuadratureConfig& cfg = {}) {
  const int N = u.dim();
  L10Norm out;
  if (u.is_zero()) return out;
  const auto& meta = u.metadata();
  const bool compact = meta.support == SupportKind::compact;
  if (!u.is_radial_about_origin()) {
    if (!compact) throw std::invalid_argument("l10_norm: non-radial fields must be compactly supported");
    auto g = [&u, N](const Point& x) { return std::abs(u(x)) * std::pow(1.0 + norm(x), -N); };
    const QuadResult r = integrate_ball(g, N, Point{}, meta.support_radius, cfg);
    out.value = out.head = r.value;
    out.quadrature_error = r.error;
    return out;
  }
  auto weight = [&u, N](double r) { return std::abs(u.profile(r)) * std::pow(1.0 + r, -N); };
  const double head_radius = compact ? meta.support_radius : 2.0;
  QuadratureConfig hc = cfg.with_hints(u.radial_breaks(Point{}));
  const QuadResult head = integrate_radial(weight, N, 0.0, head_radius, hc);
  out.head = head.value;
  out.quadrature_error = head.error;
  if (compact) {
    out.value = out.head;
    return out;
  }
  // Segments [v0 + 2^j - 1, v0 + 2^{j+1} - 1] in v = ln r.
  const double omega = unit_sphere_area(N);
  const double v0 = std::log(head_radius);
  auto gv = [&](double v) {
    const double r = std::exp(v);
    const double f = std::abs(u.profile(r));
    if (f == 0.0) return 0.0;
    // r^N (1+r)^{-N} = (1 + 1/r)^{-N}
    return omega * f * std::pow(1.0 + 1.0 / r, -N);
  };
  std::vector<double> seg;
  double lo = v0;
  for (int j = 0; j < 10; ++j) {
    const double hi = v0 + std::ldexp(1.0, j + 1) - 1.0;
    const QuadResult s = integrate_1d(gv, lo, hi, cfg);
    seg.push_back(s.value);
    out.quadrature_error += s.error;
    lo = hi;
  }
  double tail = 0.0;
  for (double s : seg) tail += s;
  const std::size_t J = seg.size() - 1;
  if (seg[J] == 0.0) {
    out.tail = tail;
  } else {
    const double q = seg[J] / seg[J - 1];
    const double q_prev = seg[J - 1] / seg[J - 2];
    if (!(q < 0.95)) {
      out.finite = false;
      out.value = kInf;
      out.tail = kInf;
      return out;
    }
    const double rem = seg[J] * q / (1.0 - q);
    const double rem_prev = q_prev < 1.0 ? seg[J] * q_prev / (1.0 - q_prev) : kInf;
    out.tail = tail + rem;
    out.tail_error = std::abs(rem - rem_prev);
  }
  out.value = out.head + out.tail;
  return out;
}

/// omega_{u,x}(r) = sup_{|y-x|<r} |u(y) - u(x)| estimated on a deterministic
/// cloud of `samples` points per radius (half on the sphere |y-x| = r, half
/// Halton points inside).  A running max over increasing r keeps the result
/// monotone.  Output order matches r_grid.
inline std::vector<double> dini_modulus(const ScalarField& u, const Point& x, std::span<const double> r_grid,
                                        int samples = 1000) {
  const int N = u.dim();
  const double ux = u(x);
  auto radical_inverse = [](unsigned i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * (i % base);
      i /= base;
    }
    return r;
  };
  auto sup_on = [&](double r) {
    double best = 0.0;
    auto probe = [&](const Point& y) { best = std::max(best, std::abs(u(y) - ux)); };
    const int half = std::max(samples / 2, 1);
    if (N == 1) {
      probe(Point{x[0] + r, 0, 0});
      probe(Point{x[0] - r, 0, 0});
      for (int i = 1; i < samples - 1; ++i) probe(Point{x[0] + r * (2.0 * radical_inverse(i, 2) - 1.0), 0, 0});
      return best;
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < half; ++i) {
      Point d{};
      if (N == 2) {
        const double th = 2.0 * std::numbers::pi * i / half;
        d = {std::cos(th), std::sin(th), 0.0};
      } else {
        const double z = 1.0 - 2.0 * (i + 0.5) / half;
        const double rr = std::sqrt(1.0 - z * z);
        d = {rr * std::cos(golden * i), rr * std::sin(golden * i), z};
      }
      probe(x + r * d);
    }
    for (int i = 1; i <= samples - half; ++i) {
      const double a = radical_inverse(i, 2), b = radical_inverse(i, 3), c = radical_inverse(i, 5);
      Point d{};
      if (N == 2) {
        const double rad = std::sqrt(a);
        d = {rad * std::cos(2.0 * std::numbers::pi * b), rad * std::sin(2.0 * std::numbers::pi * b), 0.0};
      } else {
        const double rad = std::cbrt(a);
        const double z = 2.0 * b - 1.0;
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        d = {rad * rr * std::cos(2.0 * std::numbers::pi * c), rad * rr * std::sin(2.0 * std::numbers::pi * c),
             rad * z};
      }
      probe(x + r * d);
    }
    return best;
  };
  std::vector<std::size_t> order(r_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r_grid[a] < r_grid[b]; });
  std::vector<double> out(r_grid.size(), 0.0);
  double running = 0.0;
  for (std::size_t i : order) {
    running = std::max(running, sup_on(r_grid[i]));
    out[i] = running;
  }
  return out;
}

}  // namespace loglap

#endif  // LOGLAP_FIELD_HPP

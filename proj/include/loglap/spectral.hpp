#ifndef LOGLAP_SPECTRAL_HPP
#define LOGLAP_SPECTRAL_HPP

// Fourier-multiplier operators on periodic grids.
//
// Frequencies are xi_k = 2 pi k / L, so a plain mode cos(2 pi x / L) is an
// eigenfunction of the log-Laplacian with eigenvalue 2 ln(2 pi / L).  The
// zero mode is multiplied by 0 for both symbols.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "loglap/field.hpp"

namespace loglap {

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(int dim, double length, int n) : dim_(dim), length_(length), n_(n) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridFunction: dimension must be 1, 2 or 3");
    if (n < 8 || (n & (n - 1)) != 0) throw std::invalid_argument("GridFunction: n must be a power of two >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("GridFunction: box length must be positive");
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
    values_.assign(total, 0.0);
  }

  static GridFunction sample(const ScalarField& u, double length, int n) {
    GridFunction g(u.dim(), length, n);
    for (std::size_t i = 0; i < g.size(); ++i) g.values_[i] = u(g.point(i));
    return g;
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] int points_per_axis() const { return n_; }
  [[nodiscard]] double spacing() const { return length_ / n_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Coordinate of node j along one axis: -L/2 + j h.
  [[nodiscard]] double coordinate(int j) const { return -0.5 * length_ + j * spacing(); }

  [[nodiscard]] Point point(std::size_t flat) const {
    Point p{};
    for (int d = dim_ - 1; d >= 0; --d) {
      p[d] = coordinate(static_cast<int>(flat % n_));
      flat /= n_;
    }
    return p;
  }

  /// Flat index of the node nearest to x (periodic wrap).
  [[nodiscard]] std::size_t nearest_index(const Point& x) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
      long j = std::lround((x[d] + 0.5 * length_) / spacing());
      j = ((j % n_) + n_) % n_;
      flat = flat * n_ + static_cast<std::size_t>(j);
    }
    return flat;
  }

  [[nodiscard]] double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  [[nodiscard]] GridFunction mean_subtracted() const {
    GridFunction g = *this;
    const double m = mean();
    for (double& v : g.values_) v -= m;
    return g;
  }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] double inner_product(const GridFunction& o) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * o.values_[i];
    return s * std::pow(spacing(), dim_);
  }

  [[nodiscard]] bool same_layout(const GridFunction& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

 private:
  int dim_ = 1;
  double length_ = 1.0;
  int n_ = 8;
  std::vector<double> values_{};
};

struct SpectralResult {
  GridFunction values;
  /// max |imag| / max |real| of the inverse transform.
  double imag_residue = 0.0;
  double input_mean = 0.0;
  /// False when the imaginary residue exceeds 1e-8 of the output norm.
  bool resolved = true;
};

namespace detail {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)), &fftw_free), size(n) {
    if (!data) throw std::bad_alloc();
  }
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> data;
  std::size_t size;
};

struct FftwPlan {
  FftwPlan(int dim, int n, fftw_complex* buf, int sign) {
    const int dims[3] = {n, n, n};
    plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw: plan creation failed");
  }
  ~FftwPlan() { fftw_destroy_plan(plan); }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  fftw_plan plan;
};

/// Applies a radial multiplier m(|xi|) (m(0) ignored, zero mode -> 0).
inline SpectralResult apply_multiplier(const GridFunction& ug, const std::function<double(double)>& symbol) {
  const std::size_t total = ug.size();
  const int n = ug.points_per_axis();
  const int dim = ug.dim();
  FftwBuffer buf(total);
  fftw_complex* z = buf.data.get();
  for (std::size_t i = 0; i < total; ++i) {
    z[i][0] = ug[i];
    z[i][1] = 0.0;
  }
  {
    FftwPlan fwd(dim, n, z, FFTW_FORWARD);
    fftw_execute(fwd.plan);
  }
  const double dxi = 2.0 * std::numbers::pi / ug.length();
  std::vector<double> k2(n);
  for (int i = 0; i < n; ++i) {
    const int k = i <= n / 2 ? i : i - n;
    k2[i] = static_cast<double>(k) * k;
  }
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      s += k2[rem % n];
      rem /= n;
    }
    const double m = s == 0.0 ? 0.0 : symbol(dxi * std::sqrt(s));
    z[flat][0] *= m;
    z[flat][1] *= m;
  }
  {
    FftwPlan inv(dim, n, z, FFTW_BACKWARD);
    fftw_execute(inv.plan);
  }
  SpectralResult out{GridFunction(dim, ug.length(), n), 0.0, ug.mean(), true};
  const double scale = 1.0 / static_cast<double>(total);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double re = z[i][0] * scale;
    out.values[i] = re;
    max_re = std::max(max_re, std::abs(re));
    max_im = std::max(max_im, std::abs(z[i][1] * scale));
  }
  out.imag_residue = max_re > 0.0 ? max_im / max_re : max_im;
  out.resolved = max_im <= 1e-8 * std::max(max_re, 1e-300) || max_im == 0.0;
  return out;
}

}  // namespace detail

/// Log-Laplacian on a periodic grid: multiplier 2 ln|xi|.
inline SpectralResult loglap_spectral(const GridFunction& ug) {
  return detail::apply_multiplier(ug, [](double xi) { return 2.0 * std::log(xi); });
}

/// Fractional Laplacian on a periodic grid: multiplier |xi|^{2s}.
inline SpectralResult frac_lap_spectral(const GridFunction& ug, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("frac_lap_spectral: s must lie in (0,1)");
  return detail::apply_multiplier(ug, [s](double xi) { return std::pow(xi, 2.0 * s); });
}

/// sup over the grid of |((-Delta)^s u - u)/s - L u| for each s, both
/// operators applied spectrally to the same data.
inline std::vector<double> small_s_expansion_residual(const GridFunction& ug, std::span<const double> s_list) {
  const GridFunction lu = loglap_spectral(ug).values;
  std::vector<double> out;
  out.reserve(s_list.size());
  for (double s : s_list) {
    const GridFunction fu = frac_lap_spectral(ug, s).values;
    double r = 0.0;
    for (std::size_t i = 0; i < ug.size(); ++i) r = std::max(r, std::abs((fu[i] - ug[i]) / s - lu[i]));
    out.push_back(r);
  }
  return out;
}

}  // namespace loglap

#endif  // LOGLAP_SPECTRAL_HPP

#ifndef LOGLAP_CROSSCHECK_HPP
#define LOGLAP_CROSSCHECK_HPP

// Evaluation of L u at a set of points by the direct, spectral and extension
// routes, with pairwise discrepancies.
//
// The spectral route sets the zero Fourier mode to 0, which loses the
// contribution of the mass of u (2 ln|xi| is unbounded at xi = 0).  The
// mass is moved onto a wide Gaussian g whose log-Laplacian is known from
// the heat semigroup: with c = sum(u)/sum(g) on the grid,
//
//     L u = spectral(u - c g) + c L g,
//
// and u - c g has zero mean, so the dropped mode carries nothing.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglap/extension.hpp"
#include "loglap/field.hpp"
#include "loglap/operator.hpp"
#include "loglap/parallel.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/spectral.hpp"

namespace loglap {

struct GridSpec {
  double length = 64.0;
  int n = 8192;
  /// Width of the mass-carrying Gaussian; 0 disables the compensation.
  double compensation_sigma = 2.0;

  void validate(int dim) const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridSpec: dimension must be 1, 2 or 3");
    if (!(length > 0.0)) throw std::invalid_argument("GridSpec: box length must be positive");
    if (n < 8 || (n & (n - 1)) != 0) throw std::invalid_argument("GridSpec: n must be a power of two >= 8");
    if (!(compensation_sigma >= 0.0)) throw std::invalid_argument("GridSpec: compensation_sigma must be >= 0");
    if (compensation_sigma > 0.0 && length < 20.0 * compensation_sigma)
      throw std::invalid_argument("GridSpec: box must be at least 20 compensation widths");
  }
};

/// Default grids: h = 1/128 in 1D, 1/32 in 2D, 1/4 in 3D.
inline GridSpec default_grid(int dim) {
  switch (dim) {
    case 1: return {64.0, 8192, 2.0};
    case 2: return {64.0, 2048, 2.0};
    default: return {32.0, 128, 2.0};
  }
}

struct SpectralPointValues {
  std::vector<double> values;
  /// Distance from each requested point to the node it was read at.
  std::vector<double> node_offset;
  double imag_residue = 0.0;
  double input_mean = 0.0;
  double compensation_weight = 0.0;
  bool resolved = true;
};

/// Spectral L u read at the nodes nearest to `points`.
inline SpectralPointValues loglap_spectral_at(const ScalarField& u, std::span<const Point> points, const GridSpec& grid,
                                              const QuadratureConfig& cfg = {}) {
  grid.validate(u.dim());
  const int N = u.dim();
  GridFunction ug = GridFunction::sample(u, grid.length, grid.n);
  SpectralPointValues out;
  out.input_mean = ug.mean();
  double c = 0.0;
  const double sw = grid.compensation_sigma;
  if (sw > 0.0 && out.input_mean != 0.0) {
    const GridFunction gg = GridFunction::sample(gaussian_field(N, sw), grid.length, grid.n);
    c = out.input_mean / gg.mean();
    for (std::size_t i = 0; i < ug.size(); ++i) ug[i] -= c * gg[i];
  }
  out.compensation_weight = c;
  const SpectralResult sr = loglap_spectral(ug);
  out.imag_residue = sr.imag_residue;
  out.resolved = sr.resolved;
  for (const Point& p : points) {
    const std::size_t idx = ug.nearest_index(p);
    const Point node = ug.point(idx);
    double v = sr.values[idx];
    if (c != 0.0) v += c * gaussian_loglap_semigroup(N, sw, norm(p), cfg).value;
    out.values.push_back(v);
    Point d{};
    for (int k = 0; k < N; ++k) d[k] = p[k] - node[k];
    out.node_offset.push_back(norm(d));
  }
  return out;
}

/// Nine points in the ball of radius 2, all on the default grid nodes.
inline std::vector<Point> default_crosscheck_points(int dim) {
  if (dim == 1) return {{-2, 0, 0}, {-1.5, 0, 0}, {-1, 0, 0}, {-0.5, 0, 0}, {0, 0, 0},
                        {0.25, 0, 0}, {0.75, 0, 0}, {1.25, 0, 0}, {2, 0, 0}};
  if (dim == 2) return {{0, 0, 0}, {0.5, 0, 0}, {0, 0.75, 0}, {-0.5, 0.5, 0}, {1, 0, 0},
                        {0.75, -0.75, 0}, {-1.5, 0.25, 0}, {1.25, 1.25, 0}, {2, 0, 0}};
  if (dim == 3) return {{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}, {0, 0, 0.75}, {0.5, 0.5, 0.5},
                        {1, 0, 0}, {-1, 0.5, 0}, {1.5, 0, 0.5}, {2, 0, 0}};
  throw std::invalid_argument("default_crosscheck_points: dimension must be 1, 2 or 3");
}

struct CrossCheckReport {
  std::string function;
  int dimension = 1;
  std::vector<double> params;
  std::vector<Point> points;
  std::vector<double> direct, spectral, extension;
  double max_direct_extension = 0.0;
  double max_direct_spectral = 0.0;
  double max_extension_spectral = 0.0;
  QuadratureConfig quadrature;
  GridSpec grid;
  std::vector<double> t_list;
  double spectral_imag_residue = 0.0;
  double spectral_input_mean = 0.0;
  double spectral_compensation_weight = 0.0;
  double max_node_offset = 0.0;
  bool converged = true;

  /// Pairwise maxima recomputed from the stored values.
  void recompute_discrepancies() {
    auto mx = [](const std::vector<double>& a, const std::vector<double>& b) {
      double m = 0.0;
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    };
    max_direct_extension = mx(direct, extension);
    max_direct_spectral = mx(direct, spectral);
    max_extension_spectral = mx(extension, spectral);
  }

  [[nodiscard]] double max_discrepancy() const {
    return std::max({max_direct_extension, max_direct_spectral, max_extension_spectral});
  }
};

inline CrossCheckReport crosscheck(std::string_view name, int dim, std::span<const double> params,
                                   std::span<const Point> points, const QuadratureConfig& cfg = {},
                                   std::optional<GridSpec> grid = std::nullopt, std::span<const double> t_list = {}) {
  const ScalarField u = catalog(name, dim, params);
  CrossCheckReport rep;
  rep.function = std::string(name);
  rep.dimension = dim;
  rep.params.assign(params.begin(), params.end());
  rep.points.assign(points.begin(), points.end());
  rep.quadrature = cfg;
  rep.grid = grid.value_or(default_grid(dim));
  rep.t_list = t_list.empty() ? default_t_sequence() : std::vector<double>(t_list.begin(), t_list.end());

  struct Pair {
    PointValue d, e;
  };
  const auto pairs = parallel_map<Pair>(points.size(), [&](std::size_t i) {
    return Pair{loglap_direct(u, points[i], cfg), loglap_extension(u, points[i], cfg, rep.t_list)};
  });
  for (const Pair& p : pairs) {
    rep.direct.push_back(p.d.value);
    rep.extension.push_back(p.e.value);
    rep.converged = rep.converged && p.d.converged && p.e.converged;
  }
  const SpectralPointValues sp = loglap_spectral_at(u, points, rep.grid, cfg);
  rep.spectral = sp.values;
  rep.spectral_imag_residue = sp.imag_residue;
  rep.spectral_input_mean = sp.input_mean;
  rep.spectral_compensation_weight = sp.compensation_weight;
  for (double o : sp.node_offset) rep.max_node_offset = std::max(rep.max_node_offset, o);
  rep.converged = rep.converged && sp.resolved;
  rep.recompute_discrepancies();
  return rep;
}

}  // namespace loglap

#endif  // LOGLAP_CROSSCHECK_HPP

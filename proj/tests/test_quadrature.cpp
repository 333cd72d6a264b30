#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "loglap/quadrature.hpp"
#include "oracles.hpp"

using namespace loglap;

TEST(Integrate1d, ConstantOnUnitInterval) {
  const QuadResult r = integrate_1d([](double) { return 1.0; }, 0.0, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
}

TEST(Integrate1d, LogDifferenceOnHalfLine) {
  const QuadResult r =
      integrate_1d([](double t) { return 1.0 / (t + 1.0) - 1.0 / t; }, 1.0, std::numeric_limits<double>::infinity());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, -oracle::kLn2, 1e-12);
}

TEST(Integrate1d, InverseSquareRootWithEndpointHint) {
  QuadratureConfig cfg;
  cfg.singularity_hints = {0.0};
  const QuadResult r = integrate_1d([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
}

TEST(Integrate1d, NonConvergenceIsFlagged) {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 3;
  const QuadResult r = integrate_1d([](double t) { return std::sin(1.0 / t); }, 1e-4, 1.0, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.error, 0.0);
}

TEST(QuadratureConfig, Validation) {
  QuadratureConfig c;
  c.abs_tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_subdivisions = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

// True error against the reported estimate over closed-form integrals.  An
// estimate below the rounding floor of the result is compared to that floor.
TEST(Integrate1d, ErrorEstimateHonesty) {
  struct Case {
    std::function<double(double)> f;
    double a, b, exact;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const double pi = oracle::kPi;
  const std::vector<Case> cases = {
      {[](double x) { return x * x; }, 0, 1, 1.0 / 3},
      {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1},
      {[](double x) { return std::sin(x); }, 0, pi, 2},
      {[](double x) { return std::cos(x); }, 0, pi / 2, 1},
      {[](double x) { return 1 / (1 + x * x); }, 0, 1, pi / 4},
      {[](double x) { return 1 / (1 + x * x); }, 0, inf, pi / 2},
      {[](double x) { return std::exp(-x); }, 0, inf, 1},
      {[](double x) { return std::exp(-x * x); }, 0, inf, std::sqrt(pi) / 2},
      {[](double x) { return std::log(x); }, 0, 1, -1},
      {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3},
      {[](double x) { return 1 / x; }, 1, std::exp(2.0), 2},
      {[](double x) { return 1 / (x * x); }, 1, inf, 1},
      {[](double x) { return x * std::exp(-x); }, 0, inf, 1},
      {[](double x) { return std::pow(x, -0.25); }, 0, 1, 4.0 / 3},
      {[](double x) { return std::abs(x - 0.3); }, 0, 1, 0.29},
      {[](double x) { return std::sin(10 * x); }, 0, pi, 0},
      {[](double x) { return std::exp(-x) * std::sin(x); }, 0, inf, 0.5},
      {[](double x) { return 1 / std::cosh(x); }, 0, inf, pi / 2},
      {[](double x) { return x * x * x * x; }, -1, 1, 0.4},
      {[](double x) { return std::log(1 + x); }, 0, 1, 2 * std::log(2.0) - 1},
  };
  ASSERT_EQ(cases.size(), 20u);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  cfg.rel_tol = 1e-10;
  cfg.singularity_hints = {0.0, 0.3};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const QuadResult r = integrate_1d(c.f, c.a, c.b, cfg);
    EXPECT_TRUE(r.converged) << i;
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(c.exact));
    EXPECT_LE(std::abs(r.value - c.exact), 10.0 * std::max(r.error, floor)) << i;
  }
}

TEST(IntegrateRadial, NeumannKernelInTwoDimensions) {
  const QuadResult r = integrate_radial([](double r) { return std::pow(r * r + 1.0, -2.0); }, 2, 0.0,
                                        std::numeric_limits<double>::infinity());
  EXPECT_NEAR(r.value, oracle::kPi, 1e-11);
}

TEST(IntegrateRadial, UnitIntervalInOneDimension) {
  EXPECT_NEAR(integrate_radial([](double) { return 1.0; }, 1, 0.0, 1.0).value, 2.0, 1e-15);
}

TEST(IntegrateRadial, InverseRadiusPower) {
  const double t = 0.01;
  for (int N = 1; N <= 3; ++N) {
    const double v = integrate_radial([N](double r) { return std::pow(r, -N); }, N, t, 1.0).value;
    EXPECT_NEAR(v, unit_sphere_area(N) * -std::log(t), 1e-10) << N;
  }
}

namespace {

std::vector<LimitSample> samples_of(const std::function<double(double)>& g, std::vector<double> ts) {
  std::vector<LimitSample> s;
  for (double t : ts) s.push_back({t, g(t)});
  return s;
}

}  // namespace

TEST(Richardson, ExactQuadraticModel) {
  const auto s = samples_of([](double t) { return 5.0 + t * t; }, {0.1, 0.05, 0.025});
  const LimitEstimate e = richardson_limit(s, LimitModel::power2);
  EXPECT_NEAR(e.value, 5.0, 1e-12);
  EXPECT_TRUE(e.converged);
}

TEST(Richardson, ConstantSequence) {
  const auto s = samples_of([](double) { return 5.0; }, {0.1, 0.05, 0.025});
  for (auto m : {LimitModel::power2, LimitModel::power_alpha_plus2}) {
    const LimitEstimate e = richardson_limit(s, m);
    EXPECT_EQ(e.value, 5.0);
    EXPECT_EQ(e.error_estimate, 0.0);
  }
}

TEST(Richardson, UnknownExponentSynthetic) {
  const auto s = samples_of([](double t) { return 2.0 + 0.7 * std::pow(t, 1.3); }, default_t_sequence());
  const LimitEstimate e = richardson_limit(s, LimitModel::power_alpha_plus2);
  EXPECT_NEAR(e.value, 2.0, 1e-4);
  EXPECT_NEAR(e.exponent, 1.3, 1e-2);
}

TEST(Richardson, MixedModelWithQuadraticTail) {
  const auto s = samples_of([](double t) { return -1.0 + 0.3 * t + 2.0 * t * t; }, default_t_sequence());
  const LimitEstimate e = richardson_limit(s, LimitModel::power_alpha_plus2);
  EXPECT_NEAR(e.value, -1.0, 1e-6);
}

TEST(Richardson, ErrorEstimateBoundedByTolWhenConverged) {
  const auto s = samples_of([](double t) { return 1.0 + std::pow(t, 1.7); }, default_t_sequence());
  const LimitEstimate e = richardson_limit(s, LimitModel::power_alpha_plus2, 1e-6);
  if (e.converged) {
    EXPECT_LE(e.error_estimate, 1e-6);
  }
  EXPECT_GE(e.error_estimate, 0.0);
}

TEST(Richardson, Preconditions) {
  const auto two = samples_of([](double t) { return t; }, {0.1, 0.05});
  EXPECT_THROW(richardson_limit(two, LimitModel::power2), std::invalid_argument);
  const auto uneven = samples_of([](double t) { return t; }, {0.1, 0.05, 0.01});
  EXPECT_THROW(richardson_limit(uneven, LimitModel::power2), std::invalid_argument);
}

TEST(Quadrature, BitIdenticalOnRepeat) {
  auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
  const QuadResult a = integrate_1d(f, 0.0, 20.0);
  const QuadResult b = integrate_1d(f, 0.0, 20.0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loglap/specfun.hpp"
#include "oracles.hpp"

using namespace loglap;

namespace {

double uniform(std::mt19937_64& g, double a, double b) { return a + (b - a) * static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

TEST(Digamma, AtOneIsMinusEulerGamma) { EXPECT_NEAR(digamma(1.0), -oracle::kGamma, 1e-14); }

TEST(Digamma, HalfIntegerFiniteSum) {
  EXPECT_NEAR(digamma(0.5), -oracle::kGamma - 2.0 * oracle::kLn2, 1e-14);
  for (int m = 1; m <= 12; ++m) {
    double s = 0.0;
    for (int k = 1; k <= m; ++k) s += 2.0 / (2 * k - 1);
    EXPECT_NEAR(digamma(m + 0.5), -oracle::kGamma - 2.0 * oracle::kLn2 + s, 1e-13) << m;
  }
}

TEST(Digamma, IntegerHarmonicSum) {
  EXPECT_NEAR(digamma(3.0), -oracle::kGamma + 1.5, 1e-14);
  double h = 0.0;
  for (int m = 1; m <= 30; ++m) {
    EXPECT_NEAR(digamma(m), -oracle::kGamma + h, 1e-13) << m;
    h += 1.0 / m;
  }
}

TEST(Digamma, RecurrenceOnRandomGrid) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 100; ++i) {
    const double x = uniform(g, 0.1, 50.0);
    EXPECT_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-12) << x;
  }
}

TEST(Digamma, RejectsNonPositive) {
  EXPECT_THROW(digamma(0.0), std::domain_error);
  EXPECT_THROW(digamma(-1.5), std::domain_error);
}

TEST(Constants, KernelConstantMatchesSphereArea) {
  for (int N = 1; N <= 20; ++N) {
    const ConstantsTable t = constants_for(N);
    const double omega = 2.0 * std::pow(oracle::kPi, 0.5 * N) / std::tgamma(0.5 * N);
    EXPECT_NEAR(t.omega_N, omega, 1e-14 * omega);
    EXPECT_NEAR(t.c_N, 2.0 / omega, 1e-14 * t.c_N);
  }
  EXPECT_NEAR(constants_for(1).c_N, 1.0, 1e-15);
}

TEST(Constants, AppendixValues) {
  const double s2 = std::sqrt(2.0);
  EXPECT_NEAR(constants_for(1).q_tilde_N, 2.0 * std::log(1.0 + s2), 1e-14);
  EXPECT_NEAR(constants_for(1).q_N, 2.0 * oracle::kLn2 - 2.0 * std::log(1.0 + s2), 1e-14);
  EXPECT_NEAR(constants_for(2).q_tilde_N, oracle::kLn2, 1e-14);
  EXPECT_NEAR(constants_for(2).q_N, -oracle::kLn2, 1e-14);
  EXPECT_NEAR(constants_for(4).q_tilde_N, oracle::kLn2 - 0.5, 1e-14);
}

TEST(Constants, RhoTwo) { EXPECT_NEAR(constants_for(2).rho_N, 2.0 * oracle::kLn2 - 2.0 * oracle::kGamma, 1e-14); }

TEST(Constants, IdentityResidualClosedForm) {
  for (int N = 1; N <= 20; ++N) EXPECT_LE(std::abs(constants_identity_residual(N)), 1e-12) << N;
}

// q_N and q~_N from their defining integrals on the t axis, by tanh-sinh
// and exp-sinh rules.
TEST(Constants, QuadratureAgreesWithIndependentOracle) {
  for (int N = 1; N <= 10; ++N) {
    const double a = 0.5 * N;
    const double qt = oracle::tanh_sinh([a](double t) { return std::pow(1.0 + t, -a) * std::pow(t, a - 1.0); }, 0.0, 1.0);
    const double q = oracle::exp_sinh([a](double s) {
      const double t = 1.0 + s;
      return (std::pow(t + 1.0, -a) - std::pow(t, -a)) * std::pow(t, a - 1.0);
    });
    const QConstantsQuadrature qq = q_constants_by_quadrature(N, 1e-10);
    ASSERT_TRUE(qq.converged);
    EXPECT_NEAR(qq.q_N, q, 1e-8) << N;
    EXPECT_NEAR(qq.q_tilde_N, qt, 1e-8) << N;
    EXPECT_NEAR(constants_for(N).q_N, q, 1e-8) << N;
    EXPECT_NEAR(constants_for(N).q_tilde_N, qt, 1e-8) << N;
  }
}

TEST(Constants, QuadratureIdentityResidual) {
  for (int N = 1; N <= 10; ++N) {
    const ConstantsTable t = constants_by_quadrature(N, 1e-10);
    EXPECT_EQ(t.method, ConstantsMethod::quadrature);
    EXPECT_LE(std::abs(identity_residual(t)), 1e-7) << N;
  }
}

TEST(Constants, RejectsBadInput) {
  EXPECT_THROW(constants_for(0), std::domain_error);
  EXPECT_THROW(q_constants_by_quadrature(2, 0.0), std::invalid_argument);
}

TEST(Fractional, HalfOrderIsOne) { EXPECT_NEAR(fractional_constants(1, 0.5).d_s, 1.0, 1e-15); }

TEST(Fractional, SmallOrderTrend) {
  double prev = 1e300;
  for (double s : {0.1, 0.01, 0.001}) {
    const double gap = std::abs(s * fractional_constants(1, s).d_s - 0.5);
    EXPECT_LT(gap, prev) << s;
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
  const double s = 1e-4;
  EXPECT_NEAR((2.0 * s * fractional_constants(1, s).d_s - 1.0) / s, 2.0 * (oracle::kLn2 - oracle::kGamma), 1e-3);
}

// p_{N,s} times the mass of (|z|^2+1)^{-(N+2s)/2}, the mass computed radially
// by exp-sinh.
TEST(Fractional, PoissonKernelNormalization) {
  for (int N = 1; N <= 3; ++N) {
    for (double s : {0.25, 0.5, 0.75}) {
      const double omega = 2.0 * std::pow(oracle::kPi, 0.5 * N) / std::tgamma(0.5 * N);
      const double radial =
          oracle::exp_sinh([N, s](double r) { return std::pow(r * r + 1.0, -0.5 * (N + 2.0 * s)) * std::pow(r, N - 1); },
                           1.0 / 128);
      EXPECT_NEAR(fractional_constants(N, s).p_Ns * omega * radial, 1.0, 1e-10) << N << " " << s;
    }
  }
}

TEST(Fractional, RejectsOutsideUnitInterval) {
  EXPECT_THROW(fractional_constants(1, 0.0), std::domain_error);
  EXPECT_THROW(fractional_constants(1, 1.0), std::domain_error);
}

TEST(Constants, NeumannKernelBetaNormalization) {
  for (int N = 1; N <= 5; ++N) EXPECT_NEAR(neumann_kernel_mass(N), 1.0, 1e-12) << N;
}

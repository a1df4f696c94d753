#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qspec/cd_kernel.hpp"
#include "qspec/quadrature_operator.hpp"

using namespace qspec;

TEST(Kernel, SmallCases) {
  EXPECT_DOUBLE_EQ(kernel(0.3, -2.0, 0).value, 1.0);
  EXPECT_NEAR(kernel(0.0, 0.0, 2).value, 1.5, 1e-15);
  EXPECT_NEAR(kernel_diagonal(0.0, 2).value, 1.5, 1e-15);
  const double direct = oracle::kernel_sum(1.0, -1.0, 4).convert_to<double>();
  EXPECT_NEAR(kernel(1.0, -1.0, 4).value, direct, 1e-12 * std::fabs(direct));
  EXPECT_EQ(kernel(1.0, -1.0, 4).form_used, KernelForm::bivariate);
  EXPECT_THROW(kernel(1.0, 2.0, -1), DomainError);
}

TEST(Kernel, MatchesDirectSummation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  std::uniform_int_distribution<int> cap(0, 300);
  for (int i = 0; i < 150; ++i) {
    const double a = u(rng), b = u(rng);
    const int n = cap(rng);
    const double ref = oracle::kernel_sum(a, b, n).convert_to<double>();
    const double scale = std::sqrt(oracle::kernel_sum(a, a, n).convert_to<double>() * oracle::kernel_sum(b, b, n).convert_to<double>());
    EXPECT_NEAR(kernel(a, b, n).value, ref, 1e-12 * scale) << a << " " << b << " " << n;
    EXPECT_EQ(kernel(a, b, n).value, kernel(b, a, n).value);
  }
}

TEST(Kernel, ConfluentFormsAgreeAndArePositive) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    const int n = i % 301;
    const double a = kernel_diagonal(x, n, KernelForm::confluent_algebraic).value;
    const double d = kernel_diagonal(x, n, KernelForm::confluent_derivative).value;
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(a, d, 1e-10 * a);
  }
  // switchover: nearly coincident arguments use the confluent form at the midpoint
  const auto near = kernel(2.0, 2.0 + 1e-9, 20);
  EXPECT_EQ(near.form_used, KernelForm::confluent_algebraic);
  const double ref = oracle::kernel_sum(2.0, 2.0 + 1e-9, 20).convert_to<double>();
  EXPECT_NEAR(near.value, ref, 1e-12 * ref);
  EXPECT_EQ(kernel(2.0, 2.0 + 1e-9, 20, KernelForm::confluent_derivative).form_used, KernelForm::confluent_derivative);
}

TEST(Kernel, ComplexArguments) {
  const std::complex<double> z(0.4, 0.9), w(-1.1, 0.2);
  const auto hz = detail::orthonormal_recurrence<std::complex<double>>(z, 10);
  const auto hw = detail::orthonormal_recurrence<std::complex<double>>(w, 10);
  std::complex<double> s = 0.0;
  for (int n = 0; n <= 10; ++n) s += hz.v[n] * hw.v[n];
  EXPECT_LT(std::abs(kernel(z, w, 10).value - s), 1e-13 * std::abs(s));
  std::complex<double> diag = 0.0;
  for (int n = 0; n <= 10; ++n) diag += hz.v[n] * hz.v[n];
  EXPECT_LT(std::abs(kernel_diagonal(z, 10).value - diag), 1e-13 * std::abs(diag));
}

TEST(Kernel, ProjectorLink) {
  for (auto [a, b] : {std::pair{0.5, -1.5}, std::pair{3.0, 2.2}, std::pair{-4.0, -4.0}}) {
    for (int n : {2, 16, 90}) {
      const double k = kernel(a, b, n).value * std::exp(-(a * a + b * b) / 2) / std::sqrt(std::numbers::pi);
      EXPECT_NEAR(k, projector_kernel(n, a, b), 1e-12);
    }
  }
}

TEST(Kernel, TraceIdentity) {
  // int e^{-x^2} K_N(x,x) dx / sqrt(pi) = N + 1, by Gauss-Hermite with N+1 nodes
  for (int n : {3, 10, 40}) {
    const auto gh = hermite_roots(n + 1, true);
    double s = 0.0;
    for (std::size_t k = 0; k < gh.roots.size(); ++k) s += gh.weights[k] * kernel_diagonal(gh.roots[k], n).value;
    EXPECT_NEAR(s / std::sqrt(std::numbers::pi), n + 1.0, 1e-10 * (n + 1));
  }
}

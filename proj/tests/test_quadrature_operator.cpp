#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "qspec/quadrature_operator.hpp"

using namespace qspec;

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

SampledFunction sample(double lo, double hi, int points, auto&& f) {
  SampledFunction s;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    s.grid.push_back(x);
    s.values.push_back(f(x));
  }
  return s;
}

}  // namespace

TEST(Build, MatrixElements) {
  const auto q = build(4);
  EXPECT_EQ(q.dimension(), 5u);
  const auto m = q.dense_position();
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(m(i, i), 0.0);
    if (i + 1 < 5) {
      EXPECT_DOUBLE_EQ(m(i, i + 1), std::sqrt((i + 1) / 2.0));
      EXPECT_EQ(m(i + 1, i), m(i, i + 1));
    }
  }
  EXPECT_EQ(build(0).dimension(), 1u);
  EXPECT_THROW(build(-1), DomainError);
}

TEST(Build, RotatedQuadratureIsHermitianWithSameSpectrum) {
  const auto q = build(16, 1.57);
  const auto m = q.dense();
  Eigen::MatrixXcd e(17, 17);
  for (std::size_t i = 0; i < 17; ++i)
    for (std::size_t j = 0; j < 17; ++j) e(i, j) = m(i, j);
  EXPECT_LT((e - e.adjoint()).norm(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
  const auto roots = hermite_roots(17).roots;
  for (int k = 0; k < 17; ++k) EXPECT_NEAR(solver.eigenvalues()[k], roots[k], 1e-13);
  // beta = pi/2 gives the momentum quadrature: (m+1, m) element is i sqrt((m+1)/2)
  const auto p = build(3, std::numbers::pi / 2).dense();
  EXPECT_NEAR(p(1, 0).imag(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(p(1, 0).real(), 0.0, 1e-15);
}

TEST(Diagonalize, MatchesDenseEigensolver) {
  for (int cap : {1, 5, 16, 50, 100}) {
    const auto q = build(cap);
    const auto dec = diagonalize(q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(q.dense_position()));
    for (int k = 0; k <= cap; ++k) EXPECT_NEAR(dec.eigenvalues[k], solver.eigenvalues()[k], 1e-12) << cap;
    const Eigen::MatrixXd v = to_eigen(dec.eigenvectors);
    const Eigen::MatrixXd x = to_eigen(q.dense_position());
    const auto d = static_cast<Eigen::Index>(cap + 1);
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::VectorXd lam(d);
    for (Eigen::Index k = 0; k < d; ++k) lam(k) = dec.eigenvalues[static_cast<std::size_t>(k)];
    EXPECT_LT((x * v - v * lam.asDiagonal()).cwiseAbs().maxCoeff(), 1e-12 * std::sqrt(2.0 * cap + 1.0));
    // c_N(lambda) > 0: first component positive
    for (Eigen::Index k = 0; k < d; ++k) EXPECT_GT(v(0, k), 0.0);
  }
}

TEST(Charpoly, MatchesDeterminantRecurrenceAndLU) {
  for (int cap : {0, 1, 4, 12, 40}) {
    for (double lambda : {-1.7, 0.0, 0.3, 2.5, 9.0}) {
      const auto v = charpoly_value(build(cap), lambda);
      const double ref = oracle::jacobi_determinant(lambda, cap).convert_to<double>();
      EXPECT_NEAR(v.to_double(), ref, 1e-12 * std::max(1.0, std::fabs(ref))) << cap << " " << lambda;
      if (cap <= 12) {
        const Eigen::MatrixXd a = to_eigen(build(cap).dense_position()) +
                                  lambda * Eigen::MatrixXd::Identity(cap + 1, cap + 1);
        EXPECT_NEAR(a.fullPivLu().determinant(), ref, 1e-10 * std::max(1.0, std::fabs(ref)));
      }
    }
  }
  EXPECT_EQ(charpoly_value(build(5, 0.7), 0.4), charpoly_value(build(5), 0.4));
}

TEST(ProjectorKernel, MatchesHermiteFunctionSum) {
  for (int cap : {0, 3, 16, 60}) {
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{-2.5, 3.1}, std::pair{1.2, 1.2}, std::pair{0.7, 0.7 + 1e-10}}) {
      double s = 0.0;
      for (int n = 0; n <= cap; ++n) s += oracle::hermite_function(n, a) * oracle::hermite_function(n, b);
      EXPECT_NEAR(projector_kernel(cap, a, b), s, 1e-12) << cap << " " << a << " " << b;
    }
  }
}

TEST(ApplyProjector, CoherentStateOverlaps) {
  // pi^{-1/4} e^{-(x-1)^2/2} is the coherent state with alpha = 1/sqrt2:
  // <n|alpha> = e^{-1/4} (1/sqrt2)^n / sqrt(n!)
  const auto psi = sample(-14.0, 16.0, 3001, [](double x) {
    return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * (x - 1.0) * (x - 1.0));
  });
  const auto c = number_overlaps(10, psi);
  for (int n = 0; n <= 10; ++n) {
    const double exact = std::exp(-0.25) * std::pow(std::sqrt(0.5), n) / std::sqrt(std::tgamma(n + 1.0));
    EXPECT_NEAR(c[n], exact, 1e-8) << n;
  }
}

TEST(ApplyProjector, FixesStatesInsideTheCutoff) {
  const auto psi = sample(-12.0, 12.0, 2401, [](double x) {
    return 0.6 * oracle::hermite_function(3, x) - 0.8 * oracle::hermite_function(7, x);
  });
  const auto out = apply_projector(8, psi);
  for (std::size_t i = 0; i < psi.grid.size(); ++i) EXPECT_NEAR(out.values[i], psi.values[i], 1e-8);
  const auto cut = apply_projector(5, psi);
  for (std::size_t i = 0; i < psi.grid.size(); i += 50)
    EXPECT_NEAR(cut.values[i], 0.6 * oracle::hermite_function(3, psi.grid[i]), 1e-8);
}

TEST(ApplyProjector, Preconditions) {
  auto f = [](double x) { return std::exp(-x * x / 2); };
  EXPECT_THROW(apply_projector(40, sample(-12.0, 12.0, 60, f)), PreconditionError);
  EXPECT_THROW(apply_projector(4, sample(-2.0, 2.0, 400, f)), PreconditionError);
  SampledFunction ragged = sample(-12.0, 12.0, 400, f);
  ragged.grid[7] += 0.01;
  EXPECT_THROW(apply_projector(4, ragged), PreconditionError);
  EXPECT_THROW(apply_projector(-1, sample(-12.0, 12.0, 400, f)), DomainError);
}

TEST(MatrixHermite, DoubleNormsMatchEigenPolynomials) {
  const int cap = 6;
  const Eigen::MatrixXd x = to_eigen(build(cap).dense_position());
  const auto norms = matrix_hermite_norms<double>(cap);
  ASSERT_EQ(norms.size(), static_cast<std::size_t>(cap) + 2);
  // h_k(X) from the oracle's integer coefficients
  for (int k = 0; k <= cap + 1; ++k) {
    const auto c = oracle::hermite_coefficients(k);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(cap + 1, cap + 1);
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(cap + 1, cap + 1);
    for (const auto& a : c) {
      acc += a.convert_to<double>() * pw;
      pw = pw * x;
    }
    acc /= oracle::norm_factor(k).convert_to<double>();
    EXPECT_NEAR(norms[k], acc.cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, norms[k])) << k;
  }
  EXPECT_LT(norms.back(), 1e-12);
}

TEST(MatrixHermite, CayleyHamilton) {
  for (int cap : {1, 16, 100}) EXPECT_LT(cayley_hamilton_residual(cap), 1e-10 * (cap + 1)) << cap;
  const auto r = minimal_polynomial_check(16);
  EXPECT_TRUE(r.annihilates);
  EXPECT_TRUE(r.lower_degrees_nonvanishing);
  EXPECT_EQ(r.norms.size(), 18u);
  EXPECT_THROW(minimal_polynomial_check(0), DomainError);
  // double precision cannot certify the identity once h_N(xi_N) is large
  EXPECT_GT(matrix_hermite_norms<double>(100).back(), 1e-10 * 101);
}

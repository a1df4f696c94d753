#pragma once

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "qspec/cd_kernel.hpp"
#include "qspec/dense_matrix.hpp"
#include "qspec/hermite.hpp"
#include "qspec/multiprecision.hpp"

namespace qspec {

/// The quadrature xi_beta = (e^{-i beta} a + e^{i beta} a^dagger)/sqrt(2)
/// compressed to the span of |0>..|N>.
///
/// Stored as the real tridiagonal position form plus the phases e^{i beta n}
/// of the unitary similarity U(beta) = e^{i beta n}.
struct TruncatedQuadrature {
  int cap = 0;
  double beta = 0.0;
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::vector<std::complex<double>> phase_factors;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(cap) + 1; }

  /// Element (m,n) of U xi_N U^dagger, i.e. xi_{mn} e^{i beta (m-n)}.
  DenseMatrix<std::complex<double>> dense() const {
    const std::size_t d = dimension();
    DenseMatrix<std::complex<double>> m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < d; ++i) {
      m(i + 1, i) = offdiag[i] * phase_factors[i + 1] * std::conj(phase_factors[i]);
      m(i, i + 1) = std::conj(m(i + 1, i));
    }
    return m;
  }

  /// The beta = 0 matrix.
  DenseMatrix<double> dense_position() const {
    const std::size_t d = dimension();
    DenseMatrix<double> m(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < d; ++i) m(i + 1, i) = m(i, i + 1) = offdiag[i];
    return m;
  }

  /// xi_N v for the position form.
  std::vector<double> apply(std::span<const double> v) const {
    const std::size_t d = dimension();
    if (v.size() != d) throw PreconditionError("TruncatedQuadrature::apply: dimension mismatch");
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
      double s = diag[i] * v[i];
      if (i > 0) s += offdiag[i - 1] * v[i - 1];
      if (i + 1 < d) s += offdiag[i] * v[i + 1];
      out[i] = s;
    }
    return out;
  }
};

/// Exact spectral data of xi_N: eigenvalues (the roots of H_{N+1}) and the
/// unit eigenvectors h_n(lambda_k)/sqrt(K_N(lambda_k,lambda_k)) as columns.
struct EigenDecomposition {
  int cap = 0;
  std::vector<double> eigenvalues;
  DenseMatrix<double> eigenvectors;
};

inline TruncatedQuadrature build(int cap, double beta = 0.0) {
  if (cap < 0) throw DomainError("build: cap must be >= 0");
  TruncatedQuadrature q;
  q.cap = cap;
  q.beta = beta;
  const auto d = static_cast<std::size_t>(cap) + 1;
  q.diag.assign(d, 0.0);
  q.offdiag.resize(d - 1);
  for (std::size_t n = 1; n < d; ++n) q.offdiag[n - 1] = std::sqrt(0.5 * static_cast<double>(n));
  q.phase_factors.resize(d);
  for (std::size_t n = 0; n < d; ++n) q.phase_factors[n] = std::polar(1.0, beta * static_cast<double>(n));
  return q;
}

/// det(xi_N + lambda) = H_{N+1}(lambda) / 2^{N+1}. The value does not depend on beta.
inline ScaledReal charpoly_value(const TruncatedQuadrature& q, double lambda) {
  return hermite_value(lambda, q.cap + 1).ldexp(-(q.cap + 1));
}

inline EigenDecomposition diagonalize(const TruncatedQuadrature& q) {
  const RootSet rs = hermite_roots(q.cap + 1);
  const std::size_t d = q.dimension();
  EigenDecomposition out;
  out.cap = q.cap;
  out.eigenvalues = rs.roots;
  out.eigenvectors = DenseMatrix<double>(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto seq = detail::orthonormal_recurrence<double>(rs.roots[k], q.cap);
    double norm2 = 0.0;
    for (double v : seq.v) norm2 += v * v;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t n = 0; n < d; ++n) out.eigenvectors(n, k) = seq.v[n] * inv;
  }
  return out;
}

/// <xi|Pi_N|xi'> from the Christoffel-Darboux quotient on Hermite functions.
inline double projector_kernel(int cap, double xi, double xi_prime) {
  if (cap < 0) throw DomainError("projector_kernel: cap must be >= 0");
  if (std::fabs(xi - xi_prime) < confluent_switchover(std::fabs(xi))) {
    const auto f = hermite_functions(0.5 * (xi + xi_prime), cap + 1);
    return detail::cd_confluent_derivative(f, cap);
  }
  const auto a = hermite_functions(xi, cap + 1);
  const auto b = hermite_functions(xi_prime, cap + 1);
  return detail::cd_bivariate(a, b, xi, xi_prime, cap);
}

/// A wavefunction sampled on a uniform grid.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;
};

namespace detail {

struct GaussHermiteRule {
  std::vector<double> nodes;
  /// w_k e^{x_k^2} pi^{-1/4} h_n(x_k) e^{-x_k^2/2}, i.e. the full factor multiplying
  /// psi(x_k) in the overlap <n|psi>; rows n = 0..cap.
  std::vector<std::vector<double>> overlap_factors;
};

inline GaussHermiteRule overlap_rule(int cap, int nodes) {
  const RootSet rs = hermite_roots(nodes);
  GaussHermiteRule rule;
  rule.nodes = rs.roots;
  rule.overlap_factors.assign(static_cast<std::size_t>(cap) + 1, std::vector<double>(rs.roots.size()));
  const double quarter_pi = std::pow(std::numbers::pi, 0.25);
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    const double x = rs.roots[k];
    const auto seq = orthonormal_recurrence<double>(x, nodes - 1);
    double sum = 0.0;
    for (double v : seq.v) sum += v * v;
    // sqrt(pi)/K * e^{x^2} * pi^{-1/4} h_n e^{-x^2/2} = pi^{1/4} h_n e^{x^2/2} / K
    const double scalar =
        quarter_pi / sum * std::exp(0.5 * x * x - static_cast<double>(seq.exponent) * std::numbers::ln2);
    for (int n = 0; n <= cap; ++n) rule.overlap_factors[static_cast<std::size_t>(n)][k] = scalar * seq.v[static_cast<std::size_t>(n)];
  }
  return rule;
}

inline double grid_step(const SampledFunction& psi) {
  if (psi.grid.size() < 4 || psi.grid.size() != psi.values.size())
    throw PreconditionError("apply_projector: need at least 4 samples with matching values");
  const double h = (psi.grid.back() - psi.grid.front()) / static_cast<double>(psi.grid.size() - 1);
  if (!(h > 0)) throw PreconditionError("apply_projector: grid must be increasing");
  for (std::size_t i = 0; i < psi.grid.size(); ++i) {
    const double expected = psi.grid.front() + h * static_cast<double>(i);
    if (std::fabs(psi.grid[i] - expected) > 1e-9 * std::max(1.0, std::fabs(expected)))
      throw PreconditionError("apply_projector: grid must be uniform");
  }
  return h;
}

}  // namespace detail

/// Number-basis overlaps <n|psi>, n = 0..cap, by Gauss-Hermite quadrature with
/// cap+40 nodes on a cubic B-spline resampling of psi.
inline std::vector<double> number_overlaps(int cap, const SampledFunction& psi) {
  if (cap < 0) throw DomainError("apply_projector: cap must be >= 0");
  const double h = detail::grid_step(psi);
  const double resolution = std::numbers::pi / (2.0 * std::sqrt(2.0 * cap + 3.0));
  if (!(h < resolution)) throw PreconditionError("apply_projector: grid spacing does not resolve <xi|cap>");
  if (std::fabs(psi.values.front()) > 1e-12 || std::fabs(psi.values.back()) > 1e-12)
    throw PreconditionError("apply_projector: grid does not cover the support of psi");

  boost::math::interpolators::cardinal_cubic_b_spline<double> spline(psi.values.begin(), psi.values.end(),
                                                                      psi.grid.front(), h, 0.0, 0.0);
  const auto rule = detail::overlap_rule(cap, cap + 40);
  std::vector<double> samples(rule.nodes.size(), 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    if (x >= psi.grid.front() && x <= psi.grid.back()) samples[k] = spline(x);
  }
  std::vector<double> overlaps(static_cast<std::size_t>(cap) + 1, 0.0);
  for (std::size_t n = 0; n < overlaps.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) s += rule.overlap_factors[n][k] * samples[k];
    overlaps[n] = s;
  }
  return overlaps;
}

/// (Pi_N psi) on the grid of psi.
inline SampledFunction apply_projector(int cap, const SampledFunction& psi) {
  const auto overlaps = number_overlaps(cap, psi);
  SampledFunction out;
  out.grid = psi.grid;
  out.values.resize(psi.grid.size());
  for (std::size_t i = 0; i < psi.grid.size(); ++i) {
    const auto f = hermite_functions(psi.grid[i], cap);
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += overlaps[n] * f[n];
    out.values[i] = s;
  }
  return out;
}

/// Max-norms of h_k(xi_N) for k = 0..N+1 from the matrix form of the
/// orthonormal recurrence, in scalar type T.
template <class T>
std::vector<double> matrix_hermite_norms(int cap) {
  if (cap < 0) throw DomainError("matrix_hermite_norms: cap must be >= 0");
  using std::abs;
  using std::sqrt;
  using boost::multiprecision::abs;
  using boost::multiprecision::sqrt;
  const auto d = static_cast<std::size_t>(cap) + 1;
  std::vector<T> coupling(d > 0 ? d - 1 : 0);
  for (std::size_t n = 1; n < d; ++n) coupling[n - 1] = sqrt(T(static_cast<double>(n)) / T(2));
  const T root2 = sqrt(T(2));

  std::vector<T> prev(d * d, T(0));
  std::vector<T> cur(d * d, T(0));
  std::vector<T> next(d * d, T(0));
  for (std::size_t i = 0; i < d; ++i) cur[i * d + i] = T(1);

  auto max_norm = [&](const std::vector<T>& m) {
    T best(0);
    for (const T& v : m) {
      const T a = abs(v);
      if (a > best) best = a;
    }
    return static_cast<double>(best);
  };

  std::vector<double> norms;
  norms.push_back(1.0);
  for (int k = 0; k <= cap; ++k) {
    // next = (sqrt2 X cur - sqrt(k) prev) / sqrt(k+1); h_k(X) has bandwidth k.
    const T ck = sqrt(T(static_cast<double>(k)));
    const T inv = T(1) / sqrt(T(static_cast<double>(k + 1)));
    const auto band = static_cast<std::ptrdiff_t>(k + 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
        if (off > band || off < -band) {
          next[i * d + j] = T(0);
          continue;
        }
        T xm(0);
        if (i > 0) xm += coupling[i - 1] * cur[(i - 1) * d + j];
        if (i + 1 < d) xm += coupling[i] * cur[(i + 1) * d + j];
        next[i * d + j] = (root2 * xm - ck * prev[i * d + j]) * inv;
      }
    }
    std::swap(prev, cur);
    std::swap(cur, next);
    norms.push_back(max_norm(cur));
  }
  return norms;
}

namespace detail {

/// Bits needed so that rounding in h_k(xi_N) stays far below 1e-12.
inline unsigned cayley_hamilton_bits(int cap) {
  const double edge = std::sqrt(2.0 * cap + 3.0);
  const auto seq = orthonormal_recurrence<double>(edge, cap + 1);
  double peak = 0.0;
  for (double v : seq.v) peak = std::max(peak, std::fabs(v));
  const double log2_peak = std::log2(std::max(peak, 1.0)) + static_cast<double>(seq.exponent);
  return static_cast<unsigned>(std::ceil(std::max(0.0, log2_peak))) + 128u;
}

}  // namespace detail

/// Minimal-polynomial evidence: h_k(xi_N) is nonzero for k <= N and h_{N+1}(xi_N) vanishes.
struct MinimalPolynomialReport {
  int cap = 0;
  /// Max-norm of h_k(xi_N), k = 0..N+1.
  std::vector<double> norms;
  double residual = 0.0;
  bool lower_degrees_nonvanishing = false;
  bool annihilates = false;
};

inline std::vector<double> extended_matrix_hermite_norms(int cap) {
  const unsigned bits = mp::precision_override().value_or(detail::cayley_hamilton_bits(cap));
  mp::ScopedPrecision guard(bits);
  return matrix_hermite_norms<mp::Real>(cap);
}

/// ||h_{N+1}(xi_N)||_max; vanishes by Cayley-Hamilton since det(xi_N + x) is H_{N+1}(x)/2^{N+1}.
inline double cayley_hamilton_residual(int cap) { return extended_matrix_hermite_norms(cap).back(); }

inline MinimalPolynomialReport minimal_polynomial_check(int cap) {
  if (cap < 1) throw DomainError("minimal_polynomial_check: cap must be >= 1");
  MinimalPolynomialReport r;
  r.cap = cap;
  r.norms = extended_matrix_hermite_norms(cap);
  r.residual = r.norms.back();
  r.lower_degrees_nonvanishing =
      std::all_of(r.norms.begin(), r.norms.end() - 1, [](double v) { return v > 1e-6; });
  r.annihilates = r.residual < 1e-10 * (cap + 1);
  return r;
}

}  // namespace qspec

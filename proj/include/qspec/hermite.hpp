#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <string>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/scaled_real.hpp"
#include "qspec/tridiagonal.hpp"

namespace qspec {

/// Physicists' Hermite values H_0(x)..H_order(x) together with the
/// orthonormal values h_n(x) = H_n(x) / sqrt(2^n n!).
struct HermiteSequence {
  double x = 0.0;
  int order = 0;
  std::vector<ScaledReal> values;
  /// Plain doubles; saturate to +-inf only when h_n itself exceeds the double range.
  std::vector<double> normalized_values;
};

/// Roots of H_degree in increasing order, with optional Gauss-Hermite weights.
struct RootSet {
  int degree = 0;
  std::vector<double> roots;
  std::vector<double> weights;
};

namespace detail {

/// Values v[0..last] and a shared binary exponent with h_n = v[n] * 2^exponent.
///
/// All closed forms built on h_n are homogeneous of degree zero in the
/// sequence, so the shared exponent cancels and never has to be applied.
template <class T>
struct ScaledSequence {
  std::vector<T> v;
  std::int64_t exponent = 0;

  double scale_log2() const { return static_cast<double>(exponent); }
  T value(std::size_t n) const {
    if constexpr (std::is_floating_point_v<T>) {
      return std::ldexp(v[n], static_cast<int>(std::clamp<std::int64_t>(exponent, -4000, 4000)));
    } else {
      const double s = std::ldexp(1.0, static_cast<int>(std::clamp<std::int64_t>(exponent, -4000, 4000)));
      return v[n] * s;
    }
  }
};

inline constexpr int kRescaleBits = 512;

/// Orthonormal recurrence h_{n+1} = (sqrt(2) x h_n - sqrt(n) h_{n-1}) / sqrt(n+1)
/// started from h_0 = seed * 2^seed_exponent. T is double or std::complex<double>.
template <class T>
ScaledSequence<T> orthonormal_recurrence(const T& x, int last, T seed = T(1), std::int64_t seed_exponent = 0) {
  ScaledSequence<T> out;
  out.exponent = seed_exponent;
  out.v.resize(static_cast<std::size_t>(last) + 1);
  out.v[0] = seed;
  if (last == 0) return out;
  const double big = std::ldexp(1.0, kRescaleBits);
  const double shrink = std::ldexp(1.0, -kRescaleBits);
  out.v[1] = std::numbers::sqrt2 * x * seed;
  for (int n = 1; n < last; ++n) {
    const double nn = static_cast<double>(n);
    const auto k = static_cast<std::size_t>(n);
    out.v[k + 1] = (std::numbers::sqrt2 * x * out.v[k] - std::sqrt(nn) * out.v[k - 1]) / std::sqrt(nn + 1.0);
    if (std::abs(out.v[k + 1]) > big) {
      for (std::size_t j = 0; j <= k + 1; ++j) out.v[j] *= shrink;
      out.exponent += kRescaleBits;
    }
  }
  return out;
}

inline void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite argument");
}

/// Newton-polished root near `x` of h_degree; at most `steps` corrections.
/// The iteration runs in extended precision so the rounded result is the
/// nearest double to the root.
inline double polish_root(double x, int degree, int steps = 4) {
  long double r = x;
  const long double root2 = std::sqrt(2.0L);
  for (int it = 0; it < steps; ++it) {
    long double prev = 0.0L, cur = 1.0L;
    for (int n = 0; n < degree; ++n) {
      const long double next = (root2 * r * cur - std::sqrt(static_cast<long double>(n)) * prev) /
                               std::sqrt(static_cast<long double>(n + 1));
      prev = cur;
      cur = next;
      if (std::fabs(cur) > 1e300L) {
        cur *= 1e-300L;
        prev *= 1e-300L;
      }
    }
    const long double denom = std::sqrt(2.0L * degree) * prev;
    if (denom == 0.0L) break;
    const long double step = cur / denom;
    r -= step;
    if (std::fabs(step) <= 1e-19L * std::max(1.0L, std::fabs(r))) break;
  }
  return static_cast<double>(r);
}

}  // namespace detail

/// Hermite values in scaled form and orthonormal values h_n(x), n = 0..order.
inline HermiteSequence eval_hermite_sequence(double x, int order) {
  detail::require_finite(x, "eval_hermite_sequence");
  if (order < 0) throw DomainError("eval_hermite_sequence: order must be >= 0");
  HermiteSequence seq;
  seq.x = x;
  seq.order = order;
  seq.values.reserve(static_cast<std::size_t>(order) + 1);
  seq.values.emplace_back(1.0);
  if (order >= 1) seq.values.emplace_back(2.0 * x);
  for (int n = 1; n < order; ++n) {
    const auto k = static_cast<std::size_t>(n);
    seq.values.push_back(seq.values[k] * (2.0 * x) - seq.values[k - 1] * (2.0 * n));
  }
  const auto scaled = detail::orthonormal_recurrence<double>(x, order);
  seq.normalized_values.resize(scaled.v.size());
  for (std::size_t n = 0; n < scaled.v.size(); ++n) seq.normalized_values[n] = scaled.value(n);
  return seq;
}

/// H_n(x) alone, in scaled form.
inline ScaledReal hermite_value(double x, int n) { return eval_hermite_sequence(x, n).values.back(); }

/// H'_n(x) = 2n H_{n-1}(x).
inline ScaledReal hermite_derivative(double x, int n) {
  if (n == 0) return ScaledReal{};
  return hermite_value(x, n - 1) * (2.0 * n);
}

/// Number-state wavefunctions <xi|n> for n = 0..last.
///
/// The Gaussian factor is folded into the starting value of the orthonormal
/// recurrence, so the result is finite (possibly underflowing to zero) for
/// every xi and n.
inline std::vector<double> hermite_functions(double xi, int last) {
  detail::require_finite(xi, "hermite_functions");
  if (last < 0) throw DomainError("hermite_functions: last must be >= 0");
  const double quarter_pi = std::pow(std::numbers::pi, -0.25);
  const double half_sq = 0.5 * xi * xi;
  double seed = 0.0;
  std::int64_t seed_exponent = 0;
  if (half_sq < 700.0) {
    seed = quarter_pi * std::exp(-half_sq);
  } else {
    const double t = half_sq / std::numbers::ln2;
    const double whole = std::floor(t);
    seed = quarter_pi * std::exp2(-(t - whole));
    seed_exponent = -static_cast<std::int64_t>(whole);
  }
  const auto seq = detail::orthonormal_recurrence<double>(xi, last, seed, seed_exponent);
  std::vector<double> out(seq.v.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = seq.value(n);
  return out;
}

/// <xi|n> = H_n(xi) exp(-xi^2/2) / sqrt(2^n n! sqrt(pi)).
inline double eval_hermite_function(int n, double xi) {
  if (n < 0) throw DomainError("eval_hermite_function: n must be >= 0");
  return hermite_functions(xi, n).back();
}

/// Largest-magnitude bound on the roots of H_degree.
inline double hermite_root_bound(int degree) { return std::sqrt(2.0 * degree + 1.0); }

/// All roots of H_degree from the eigenvalues of its Jacobi matrix
/// (diagonal 0, couplings sqrt(k/2)), each polished by Newton on h_degree.
inline RootSet hermite_roots(int degree, bool want_weights = false) {
  if (degree < 1) throw DomainError("hermite_roots: degree must be >= 1");
  const auto n = static_cast<std::size_t>(degree);
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n - 1);
  for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * static_cast<double>(k));

  std::vector<double> roots = tridiagonal_eigenvalues(diag, off);
  for (double& r : roots) r = detail::polish_root(r, degree);
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double m = 0.5 * (roots[n - 1 - i] - roots[i]);
    roots[i] = -m;
    roots[n - 1 - i] = m;
  }
  if (n % 2 == 1) roots[n / 2] = 0.0;

  const double min_gap = 0.25 * std::numbers::pi / std::sqrt(2.0 * degree + 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(roots[i + 1] - roots[i] > min_gap))
      throw NumericError("hermite_roots: roots " + std::to_string(i) + " and " + std::to_string(i + 1) +
                             " collapsed",
                         {i, i + 1});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto seq = detail::orthonormal_recurrence<double>(roots[i], degree);
    const double value = std::fabs(seq.v[n]);
    const double slope = std::sqrt(2.0 * degree) * std::fabs(seq.v[n - 1]);
    const double unit = std::ldexp(1.0, static_cast<int>(std::clamp<std::int64_t>(-seq.exponent, -4000, 4000)));
    if (!(value < 1e-12 * std::max(unit, slope)))
      throw NumericError("hermite_roots: residual check failed at index " + std::to_string(i), {i});
  }

  RootSet out;
  out.degree = degree;
  out.roots = std::move(roots);
  if (want_weights) {
    out.weights.resize(n);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const auto seq = detail::orthonormal_recurrence<double>(out.roots[i], degree - 1);
      double sum = 0.0;
      for (double v : seq.v) sum += v * v;
      out.weights[i] = std::ldexp(sqrt_pi / sum, static_cast<int>(-2 * seq.exponent));
    }
  }
  return out;
}

/// sum_k h_m(l_k) h_n(l_k) / K_N(l_k, l_k) over the roots l_k of H_{N+1};
/// equals the Kronecker delta for m, n <= N.
inline double discrete_orthogonality_check(int m, int n, int cap) {
  if (cap < 0) throw DomainError("discrete_orthogonality_check: cap must be >= 0");
  if (m < 0 || n < 0 || m > cap || n > cap)
    throw DomainError("discrete_orthogonality_check: indices must lie in [0, cap]");
  const RootSet rs = hermite_roots(cap + 1);
  double total = 0.0;
  for (double r : rs.roots) {
    const auto seq = detail::orthonormal_recurrence<double>(r, cap);
    double kernel = 0.0;
    for (double v : seq.v) kernel += v * v;
    total += seq.v[static_cast<std::size_t>(m)] * seq.v[static_cast<std::size_t>(n)] / kernel;
  }
  return total;
}

}  // namespace qspec

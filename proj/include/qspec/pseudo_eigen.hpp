#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qspec/cd_kernel.hpp"
#include "qspec/hermite.hpp"
#include "qspec/quadrature_operator.hpp"
#include "qspec/scaled_real.hpp"

namespace qspec {

enum class NormalizationMode {
  /// |c_N(lambda)|^2 = 1 / K_N(lambda, lambda)
  unit_norm,
  /// c_N(lambda) = pi^{-1/4} e^{-lambda^2/2}, so |lambda>_N = Pi_N |lambda>
  truncated_position_ket,
};

/// |lambda>_N = c_N(lambda) sum_n h_n(lambda) |n> for an arbitrary real lambda.
struct PseudoEigenstate {
  double lambda = 0.0;
  int cap = 0;
  NormalizationMode mode = NormalizationMode::unit_norm;
  std::vector<double> coeffs;
  /// The single nonzero component of (xi_N - lambda)|lambda>_N, at index N:
  /// -sqrt((N+1)/2) c_N(lambda) h_{N+1}(lambda).
  double tail = 0.0;

  double norm_squared() const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return s;
  }
};

/// Moments of the unit-normalized pseudo-eigenstate.
struct MomentReport {
  double lambda = 0.0;
  int cap = 0;
  double expectation = 0.0;
  double d_value = 0.0;
  double var_truncated = 0.0;
  double var_full = 0.0;
};

/// An asymptotic approximant value; pole_flag marks |denominator| < 1e-3.
struct Approximation {
  double value = 0.0;
  bool pole_flag = false;
};

enum class Regime { quadratic, oscillatory };

namespace detail {

/// h_0..h_{N+1} at lambda (shared exponent) with S = sum_{n<=N} v_n^2.
struct PseudoCore {
  int cap = 0;
  ScaledSequence<double> seq;
  double kernel = 0.0;

  PseudoCore(double lambda, int n) : cap(n), seq(orthonormal_recurrence<double>(lambda, n + 1)) {
    require_finite(lambda, "pseudo_eigen");
    for (int k = 0; k <= n; ++k) kernel += seq.v[static_cast<std::size_t>(k)] * seq.v[static_cast<std::size_t>(k)];
  }

  double h(int n) const { return seq.v[static_cast<std::size_t>(n)]; }
  /// |<n|lambda>_N|^2 for the unit-normalized state.
  double weight(int n) const { return h(n) * h(n) / kernel; }
};

inline void require_cap(int cap, int minimum, const char* who) {
  if (cap < minimum) throw DomainError(std::string(who) + ": cap must be >= " + std::to_string(minimum));
}

inline double oscillatory_denominator(double lambda, int cap) {
  const double w = 2.0 * cap + 1.0;
  return 1.0 + std::cos(2.0 / std::sqrt(w) * lambda * (1.0 + lambda * lambda / (12.0 * w)));
}

inline void require_regime(double lambda, int cap, Regime regime, const char* who) {
  const double edge = std::sqrt(2.0 * cap + 1.0);
  if (regime == Regime::quadratic && !(std::fabs(lambda) > edge))
    throw DomainError(std::string(who) + ": quadratic regime needs |lambda| > sqrt(2N+1)");
  if (regime == Regime::oscillatory && !(std::fabs(lambda) < edge))
    throw DomainError(std::string(who) + ": oscillatory regime needs |lambda| < sqrt(2N+1)");
}

inline constexpr double kPoleThreshold = 1e-3;

}  // namespace detail

inline PseudoEigenstate build_state(double lambda, int cap, NormalizationMode mode = NormalizationMode::unit_norm) {
  detail::require_cap(cap, 0, "build_state");
  PseudoEigenstate s;
  s.lambda = lambda;
  s.cap = cap;
  s.mode = mode;
  s.coeffs.resize(static_cast<std::size_t>(cap) + 1);
  const double tail_factor = -std::sqrt(0.5 * (cap + 1.0));
  if (mode == NormalizationMode::unit_norm) {
    const detail::PseudoCore core(lambda, cap);
    const double inv = 1.0 / std::sqrt(core.kernel);
    for (int n = 0; n <= cap; ++n) s.coeffs[static_cast<std::size_t>(n)] = core.h(n) * inv;
    s.tail = tail_factor * core.h(cap + 1) * inv;
  } else {
    const auto f = hermite_functions(lambda, cap + 1);
    for (int n = 0; n <= cap; ++n) s.coeffs[static_cast<std::size_t>(n)] = f[static_cast<std::size_t>(n)];
    s.tail = tail_factor * f[static_cast<std::size_t>(cap) + 1];
  }
  return s;
}

/// (xi_N - lambda)|lambda>_N by direct matrix action.
inline std::vector<double> residual_vector(const PseudoEigenstate& s) {
  const auto q = build(s.cap);
  auto r = q.apply(s.coeffs);
  for (std::size_t n = 0; n < r.size(); ++n) r[n] -= s.lambda * s.coeffs[n];
  return r;
}

/// d_N(lambda) = ||(xi_N - lambda)|lambda>_N||^2 = (N+1) h_{N+1}^2 / (2 K_N(lambda,lambda)).
inline double d_measure(double lambda, int cap) {
  detail::require_cap(cap, 0, "d_measure");
  const detail::PseudoCore core(lambda, cap);
  return 0.5 * (cap + 1.0) * core.h(cap + 1) * core.h(cap + 1) / core.kernel;
}

/// d_N from the raw-polynomial ratio H_{N+1}^2 / (4[(N+1)H_N^2 - N H_{N+1} H_{N-1}]),
/// evaluated in scaled arithmetic.
inline double d_measure_ratio_form(double lambda, int cap) {
  detail::require_cap(cap, 0, "d_measure_ratio_form");
  const auto seq = eval_hermite_sequence(lambda, cap + 1);
  const auto n = static_cast<std::size_t>(cap);
  const ScaledReal& next = seq.values[n + 1];
  ScaledReal den = seq.values[n] * seq.values[n] * (cap + 1.0);
  if (cap > 0) den -= next * seq.values[n - 1] * static_cast<double>(cap);
  return (next * next / (den * 4.0)).to_double();
}

/// d_N = -(N+1) / (d^2/dlambda^2 ln|H_{N+1}(lambda)|), second derivative from
/// H' = 2(N+1) H_N and H'' = 4(N+1)N H_{N-1}.
inline double d_measure_logform(double lambda, int cap) {
  detail::require_cap(cap, 0, "d_measure_logform");
  const detail::PseudoCore core(lambda, cap);
  const double top = core.h(cap + 1);
  if (std::fabs(top) < 1e-10 * std::sqrt(core.kernel))
    throw ConditioningError("d_measure_logform: lambda is (numerically) a root of H_{N+1}");
  const double ratio = core.h(cap) / top;
  double second = -2.0 * (cap + 1.0) * ratio * ratio;
  if (cap > 0) second += 2.0 * std::sqrt(static_cast<double>(cap) * (cap + 1.0)) * core.h(cap - 1) / top;
  return -(cap + 1.0) / second;
}

/// Large-|lambda| series lambda^2 - 3N/2 + N(5-N)/(4 lambda^2), first `terms` terms.
inline double d_approx_quadratic(double lambda, int cap, int terms = 3) {
  detail::require_cap(cap, 0, "d_approx_quadratic");
  if (terms < 1 || terms > 3) throw DomainError("d_approx_quadratic: terms must be 1, 2 or 3");
  detail::require_regime(lambda, cap, Regime::quadratic, "d_approx_quadratic");
  const double l2 = lambda * lambda;
  double v = l2;
  if (terms >= 2) v -= 1.5 * cap;
  if (terms >= 3) v += cap * (5.0 - cap) / (4.0 * l2);
  return v;
}

/// Oscillatory-region approximant of d_N with the cubic phase corrections.
inline Approximation d_approx_oscillatory(double lambda, int cap) {
  detail::require_cap(cap, 0, "d_approx_oscillatory");
  detail::require_regime(lambda, cap, Regime::oscillatory, "d_approx_oscillatory");
  const double w = 2.0 * cap + 3.0;
  const double sign = (cap % 2 == 0) ? -1.0 : 1.0;  // (-1)^{N+1}
  const double num = 1.0 + sign * std::cos(2.0 * std::sqrt(w) * lambda * (1.0 - lambda * lambda / (6.0 * w)));
  const double den = detail::oscillatory_denominator(lambda, cap);
  return {0.5 * num / den, std::fabs(den) < detail::kPoleThreshold};
}

/// <xi_N> = <xi> = lambda - sqrt((N+1)/2) h_{N+1} h_N / K_N.
inline double expectation_xi(double lambda, int cap) {
  detail::require_cap(cap, 1, "expectation_xi");
  const detail::PseudoCore core(lambda, cap);
  return lambda - std::sqrt(0.5 * (cap + 1.0)) * core.h(cap + 1) * core.h(cap) / core.kernel;
}

inline Approximation expectation_approx(double lambda, int cap, Regime regime) {
  detail::require_cap(cap, 1, "expectation_approx");
  detail::require_regime(lambda, cap, regime, "expectation_approx");
  const double n = cap;
  if (regime == Regime::quadratic) return {n / lambda + n * (n - 2.0) / (2.0 * lambda * lambda * lambda), false};
  const double w = 2.0 * n + 2.0;
  const double phase = 1.0 + lambda * lambda / (6.0 * w);
  const double sign = (cap % 2 == 0) ? 1.0 : -1.0;  // (-1)^N
  const double num = std::sin(lambda / std::sqrt(w) * phase) + sign * std::sin(2.0 * std::sqrt(w) * lambda * phase);
  const double den = detail::oscillatory_denominator(lambda, cap);
  return {lambda - num / (std::sqrt(2.0 * n + 1.0) * den), std::fabs(den) < detail::kPoleThreshold};
}

/// (Delta xi_N)^2 = d_N (1 - |<N|lambda>_N|^2).
inline double variance_truncated(double lambda, int cap) {
  detail::require_cap(cap, 1, "variance_truncated");
  const detail::PseudoCore core(lambda, cap);
  const double d = 0.5 * (cap + 1.0) * core.h(cap + 1) * core.h(cap + 1) / core.kernel;
  return d * (1.0 - core.weight(cap));
}

/// N/2 - N(N+3)/(4 lambda^2) outside, d_N(lambda) inside the oscillatory region.
inline Approximation variance_truncated_approx(double lambda, int cap, Regime regime) {
  detail::require_cap(cap, 1, "variance_truncated_approx");
  detail::require_regime(lambda, cap, regime, "variance_truncated_approx");
  const double n = cap;
  if (regime == Regime::quadratic) return {0.5 * n - n * (n + 3.0) / (4.0 * lambda * lambda), false};
  return {d_measure(lambda, cap), false};
}

/// (Delta xi)^2 = (Delta xi_N)^2 + ((N+1)/2) |<N|lambda>_N|^2.
inline double variance_full(double lambda, int cap) {
  detail::require_cap(cap, 1, "variance_full");
  const detail::PseudoCore core(lambda, cap);
  const double d = 0.5 * (cap + 1.0) * core.h(cap + 1) * core.h(cap + 1) / core.kernel;
  const double w = core.weight(cap);
  return d * (1.0 - w) + 0.5 * (cap + 1.0) * w;
}

inline Approximation variance_full_approx(double lambda, int cap, Regime regime) {
  detail::require_cap(cap, 1, "variance_full_approx");
  detail::require_regime(lambda, cap, regime, "variance_full_approx");
  const double n = cap;
  if (regime == Regime::quadratic) {
    const double l2 = lambda * lambda;
    return {(2.0 * n + 1.0) / 2.0 - n * (n + 2.0) / (2.0 * l2) - n * (2.0 * n * n + 2.0 * n - 9.0) / (4.0 * l2 * l2),
            false};
  }
  const double w = 2.0 * n + 2.0;
  const double sign = (cap % 2 == 0) ? 1.0 : -1.0;  // (-1)^N
  const double fast = std::sin(2.0 * std::sqrt(w) * lambda * (1.0 - lambda * lambda / (6.0 * w)));
  const double slow = std::sin(lambda / std::sqrt(w) * (1.0 + lambda * lambda / (6.0 * w)));
  const double den = detail::oscillatory_denominator(lambda, cap);
  return {(1.0 + sign * fast * slow) / den, std::fabs(den) < detail::kPoleThreshold};
}

inline MomentReport moment_report(double lambda, int cap) {
  detail::require_cap(cap, 1, "moment_report");
  const detail::PseudoCore core(lambda, cap);
  MomentReport r;
  r.lambda = lambda;
  r.cap = cap;
  r.d_value = 0.5 * (cap + 1.0) * core.h(cap + 1) * core.h(cap + 1) / core.kernel;
  r.expectation = lambda - std::sqrt(0.5 * (cap + 1.0)) * core.h(cap + 1) * core.h(cap) / core.kernel;
  const double w = core.weight(cap);
  r.var_truncated = r.d_value * (1.0 - w);
  r.var_full = r.var_truncated + 0.5 * (cap + 1.0) * w;
  return r;
}

/// <xi|lambda>_N with c_N(lambda) > 0, from the bivariate Christoffel-Darboux quotient.
inline double wavefunction(double xi, double lambda, int cap) {
  detail::require_cap(cap, 0, "wavefunction");
  const detail::PseudoCore core(lambda, cap);
  const double inv = 1.0 / std::sqrt(core.kernel);
  if (std::fabs(xi - lambda) < confluent_switchover(std::fabs(lambda))) {
    // c(lambda) pi^{-1/4} e^{-xi^2/2} K_N(m, m) at the midpoint m
    const double m = 0.5 * (xi + lambda);
    const auto mid = detail::orthonormal_recurrence<double>(m, cap + 1);
    const double k = detail::cd_confluent_derivative(mid.v, cap);
    const double log_scale = -0.5 * xi * xi + static_cast<double>(2 * mid.exponent - core.seq.exponent) * std::numbers::ln2;
    return k * inv * std::pow(std::numbers::pi, -0.25) * std::exp(log_scale);
  }
  const auto f = hermite_functions(xi, cap + 1);
  const auto n = static_cast<std::size_t>(cap);
  return inv * std::sqrt(0.5 * (cap + 1.0)) * (core.seq.v[n + 1] * f[n] - core.seq.v[n] * f[n + 1]) / (lambda - xi);
}

/// N<lambda'|lambda>_N for unit-normalized states.
inline double inner_product(double lambda, double lambda_prime, int cap) {
  detail::require_cap(cap, 0, "inner_product");
  const detail::PseudoCore a(lambda, cap);
  const detail::PseudoCore b(lambda_prime, cap);
  const double norm = 1.0 / std::sqrt(a.kernel * b.kernel);
  if (std::fabs(lambda - lambda_prime) < confluent_switchover(std::fabs(lambda))) {
    const auto mid = detail::orthonormal_recurrence<double>(0.5 * (lambda + lambda_prime), cap + 1);
    const double k = detail::cd_confluent_derivative(mid.v, cap);
    return detail::apply_exponent(k * norm, 2 * mid.exponent - a.seq.exponent - b.seq.exponent);
  }
  return detail::cd_bivariate(a.seq.v, b.seq.v, lambda, lambda_prime, cap) * norm;
}

/// N<lambda'|xi|lambda>_N for unit-normalized states; symmetric in its arguments.
inline double matrix_element_xi(double lambda_prime, double lambda, int cap) {
  detail::require_cap(cap, 1, "matrix_element_xi");
  if (std::fabs(lambda - lambda_prime) < confluent_switchover(std::fabs(lambda)))
    return expectation_xi(0.5 * (lambda + lambda_prime), cap);
  const detail::PseudoCore a(lambda, cap);
  const detail::PseudoCore b(lambda_prime, cap);
  const auto n = static_cast<std::size_t>(cap);
  const double num = lambda_prime * a.seq.v[n + 1] * b.seq.v[n] - lambda * a.seq.v[n] * b.seq.v[n + 1];
  return std::sqrt(0.5 * (cap + 1.0)) * num / (lambda - lambda_prime) / std::sqrt(a.kernel * b.kernel);
}

/// ||(xi_N - lambda)|N>||^2 from the matrix action; equals lambda^2 + N/2.
inline double special_state_residual(int cap, double lambda) {
  detail::require_cap(cap, 0, "special_state_residual");
  const auto q = build(cap);
  std::vector<double> last(q.dimension(), 0.0);
  last.back() = 1.0;
  auto r = q.apply(last);
  r.back() -= lambda;
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

}  // namespace qspec

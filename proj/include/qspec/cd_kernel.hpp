#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include "qspec/hermite.hpp"

namespace qspec {

/// Which closed form produced a kernel value.
enum class KernelForm { bivariate, confluent_derivative, confluent_algebraic };

inline const char* to_string(KernelForm f) {
  switch (f) {
    case KernelForm::bivariate:
      return "bivariate";
    case KernelForm::confluent_derivative:
      return "confluent-derivative";
    case KernelForm::confluent_algebraic:
      return "confluent-algebraic";
  }
  return "?";
}

/// K_N(lambda, mu) = sum_{n<=N} h_n(lambda) h_n(mu) and the form used to get it.
/// T is double or std::complex<double>.
template <class T>
struct KernelEvaluation {
  int cap = 0;
  T lambda{};
  T mu{};
  T value{};
  KernelForm form_used = KernelForm::bivariate;
};

/// Separation below which the bivariate quotient is replaced by a confluent form.
inline double confluent_switchover(double scale) { return 1e-8 * (1.0 + scale); }

namespace detail {

// The helpers below act on sequences sharing one binary exponent per argument;
// callers apply 2^(ea+eb) (or 2^(2e)) themselves.

/// sqrt((N+1)/2) [h_{N+1}(x) h_N(y) - h_N(x) h_{N+1}(y)] / (x - y)
template <class T>
T cd_bivariate(const std::vector<T>& hx, const std::vector<T>& hy, const T& x, const T& y, int cap) {
  const auto n = static_cast<std::size_t>(cap);
  return std::sqrt(0.5 * (cap + 1.0)) * (hx[n + 1] * hy[n] - hx[n] * hy[n + 1]) / (x - y);
}

/// (N+1) h_N^2 - sqrt(N(N+1)) h_{N+1} h_{N-1}
template <class T>
T cd_confluent_algebraic(const std::vector<T>& h, int cap) {
  const auto n = static_cast<std::size_t>(cap);
  T out = (cap + 1.0) * h[n] * h[n];
  if (cap > 0) out -= std::sqrt(static_cast<double>(cap) * (cap + 1.0)) * h[n + 1] * h[n - 1];
  return out;
}

/// sqrt((N+1)/2) [h_N h'_{N+1} - h_{N+1} h'_N] with h'_n = sqrt(2n) h_{n-1}
template <class T>
T cd_confluent_derivative(const std::vector<T>& h, int cap) {
  const auto n = static_cast<std::size_t>(cap);
  const T d_next = std::sqrt(2.0 * (cap + 1.0)) * h[n];
  const T d_here = cap > 0 ? std::sqrt(2.0 * cap) * h[n - 1] : T(0);
  return std::sqrt(0.5 * (cap + 1.0)) * (h[n] * d_next - h[n + 1] * d_here);
}

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
T apply_exponent(const T& v, std::int64_t e) {
  const int k = static_cast<int>(std::clamp<std::int64_t>(e, -4000, 4000));
  if constexpr (std::is_floating_point_v<T>) {
    return std::ldexp(v, k);
  } else {
    return T(std::ldexp(v.real(), k), std::ldexp(v.imag(), k));
  }
}

}  // namespace detail

/// Diagonal kernel K_N(lambda, lambda) from the requested confluent form.
template <class T>
KernelEvaluation<T> kernel_diagonal(const T& lambda, int cap,
                                    KernelForm form = KernelForm::confluent_algebraic) {
  if (cap < 0) throw DomainError("kernel: cap must be >= 0");
  const auto seq = detail::orthonormal_recurrence<T>(lambda, cap + 1);
  KernelEvaluation<T> out{cap, lambda, lambda, T{}, form};
  T v = form == KernelForm::confluent_derivative ? detail::cd_confluent_derivative(seq.v, cap)
                                                 : detail::cd_confluent_algebraic(seq.v, cap);
  if (form == KernelForm::bivariate) out.form_used = KernelForm::confluent_algebraic;
  out.value = detail::apply_exponent(v, 2 * seq.exponent);
  return out;
}

/// Christoffel-Darboux kernel by the bivariate quotient, falling back to the
/// confluent form at the midpoint when the arguments nearly coincide.
template <class T>
KernelEvaluation<T> kernel(const T& lambda, const T& mu, int cap,
                           KernelForm confluent = KernelForm::confluent_algebraic) {
  if (cap < 0) throw DomainError("kernel: cap must be >= 0");
  if (detail::magnitude(lambda - mu) < confluent_switchover(detail::magnitude(lambda))) {
    auto mid = kernel_diagonal<T>(0.5 * (lambda + mu), cap, confluent);
    mid.lambda = lambda;
    mid.mu = mu;
    return mid;
  }
  const auto a = detail::orthonormal_recurrence<T>(lambda, cap + 1);
  const auto b = detail::orthonormal_recurrence<T>(mu, cap + 1);
  KernelEvaluation<T> out{cap, lambda, mu, T{}, KernelForm::bivariate};
  out.value = detail::apply_exponent(detail::cd_bivariate(a.v, b.v, lambda, mu, cap), a.exponent + b.exponent);
  return out;
}

}  // namespace qspec

#pragma once

// Independent reference implementations used only by the tests.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>>;
using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

/// Raw H_n(x) from H_{n+1} = 2x H_n - 2n H_{n-1}, n = 0..last.
inline std::vector<Big> raw_hermite(const Big& x, int last) {
  std::vector<Big> h(static_cast<std::size_t>(last) + 1);
  h[0] = 1;
  if (last >= 1) h[1] = 2 * x;
  for (int n = 1; n < last; ++n) h[n + 1] = 2 * x * h[n] - 2 * n * h[n - 1];
  return h;
}

inline Big norm_factor(int n) {
  // sqrt(2^n n!)
  Big f = 1;
  for (int k = 1; k <= n; ++k) f *= 2 * k;
  return sqrt(f);
}

/// h_n(x) = H_n(x)/sqrt(2^n n!) for n = 0..last.
inline std::vector<Big> orthonormal(const Big& x, int last) {
  auto h = raw_hermite(x, last);
  for (int n = 0; n <= last; ++n) h[n] /= norm_factor(n);
  return h;
}

inline std::vector<double> orthonormal_double(double x, int last) {
  const auto h = orthonormal(Big(x), last);
  std::vector<double> out;
  for (const auto& v : h) out.push_back(v.convert_to<double>());
  return out;
}

/// <xi|n> = h_n(xi) e^{-xi^2/2} pi^{-1/4}.
inline double hermite_function(int n, double xi) {
  const Big x(xi);
  const auto h = orthonormal(x, n);
  return (h[n] * exp(-x * x / 2) / sqrt(sqrt(boost::math::constants::pi<Big>()))).convert_to<double>();
}

/// sum_{n<=N} h_n(a) h_n(b) by direct summation.
inline Big kernel_sum(double a, double b, int cap) {
  const auto ha = orthonormal(Big(a), cap);
  const auto hb = orthonormal(Big(b), cap);
  Big s = 0;
  for (int n = 0; n <= cap; ++n) s += ha[n] * hb[n];
  return s;
}

/// d_N(lambda) from the definition, in 200-digit arithmetic.
inline double d_measure(double lambda, int cap) {
  const auto h = orthonormal(Big(lambda), cap + 1);
  Big k = 0;
  for (int n = 0; n <= cap; ++n) k += h[n] * h[n];
  return ((cap + 1) * h[cap + 1] * h[cap + 1] / (2 * k)).convert_to<double>();
}

/// Integer coefficients of H_n, lowest degree first, from the explicit sum
/// H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!).
inline std::vector<Int> hermite_coefficients(int n) {
  std::vector<Int> c(static_cast<std::size_t>(n) + 1, 0);
  auto fact = [](int k) {
    Int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int m = 0; 2 * m <= n; ++m) {
    Int term = fact(n) / (fact(m) * fact(n - 2 * m));
    term <<= static_cast<unsigned>(n - 2 * m);
    c[static_cast<std::size_t>(n - 2 * m)] = (m % 2 == 0) ? term : Int(-term);
  }
  return c;
}

inline std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// 2^N N! sum_n H_n^2 / (2^n n!) = sum_n 2^{N-n} (N!/n!) H_n^2, exactly.
inline std::vector<Int> kernel_poly_sum_of_squares(int cap) {
  std::vector<Int> p(2 * static_cast<std::size_t>(cap) + 1, 0);
  for (int n = 0; n <= cap; ++n) {
    Int w = 1;
    for (int k = n + 1; k <= cap; ++k) w *= 2 * k;
    const auto h = hermite_coefficients(n);
    const auto sq = poly_mul(h, h);
    for (std::size_t j = 0; j < sq.size(); ++j) p[j] += w * sq[j];
  }
  return p;
}

/// Coefficients alpha_0..alpha_{count-1} of d_N = sum_k alpha_k lambda^{2-2k} at infinity,
/// by exact power-series division in t = 1/lambda.
inline std::vector<Rat> laurent_at_infinity(int cap, int count) {
  const auto h = hermite_coefficients(cap + 1);
  const auto a = poly_mul(h, h);                         // degree 2N+2
  const auto p = kernel_poly_sum_of_squares(cap);        // degree 2N
  const std::size_t da = a.size() - 1, db = p.size() - 1;
  const std::size_t terms = 2 * static_cast<std::size_t>(count);
  auto at = [&](const std::vector<Int>& v, std::size_t deg, std::size_t j) {
    return j <= deg ? Rat(v[deg - j]) : Rat(0);
  };
  std::vector<Rat> c(terms, Rat(0));
  for (std::size_t j = 0; j < terms; ++j) {
    Rat s = at(a, da, j);
    for (std::size_t i = 1; i <= j; ++i) s -= 4 * at(p, db, i) * c[j - i];
    c[j] = s / (4 * at(p, db, 0));
  }
  std::vector<Rat> alpha;
  for (int k = 0; k < count; ++k) alpha.push_back(c[2 * static_cast<std::size_t>(k)]);
  return alpha;
}

/// det(lambda - xi_N) for the Jacobi matrix by the three-term determinant
/// recurrence D_{k+1} = lambda D_k - (k/2) D_{k-1}, in 200-digit arithmetic.
inline Big jacobi_determinant(double lambda, int cap) {
  Big prev = 1, cur = Big(lambda);
  for (int k = 1; k <= cap; ++k) {
    Big next = Big(lambda) * cur - Big(k) / 2 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace oracle

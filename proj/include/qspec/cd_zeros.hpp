#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/hermite.hpp"
#include "qspec/multiprecision.hpp"

namespace qspec {

/// The 2N zeros of the diagonal Christoffel-Darboux kernel K_N(z, z).
struct ComplexRootSet {
  int cap = 0;
  std::vector<std::complex<double>> roots;
  /// max |P_N(z)/P_N'(z)| / (1 + |z|) over the returned roots.
  double max_residual = 0.0;
  unsigned precision_bits = 0;
  /// Indices of roots that missed the residual target (best-effort runs only).
  std::vector<std::size_t> flagged;
};

namespace detail {

using IntPoly = std::vector<mp::Integer>;

/// Integer coefficient lists of H_0..H_last, lowest degree first.
inline std::vector<IntPoly> integer_hermite_polys(int last) {
  std::vector<IntPoly> h(static_cast<std::size_t>(last) + 1);
  h[0] = {mp::Integer(1)};
  if (last >= 1) h[1] = {mp::Integer(0), mp::Integer(2)};
  for (int n = 1; n < last; ++n) {
    const auto k = static_cast<std::size_t>(n);
    IntPoly next(k + 2, mp::Integer(0));
    for (std::size_t j = 0; j < h[k].size(); ++j) next[j + 1] += 2 * h[k][j];
    for (std::size_t j = 0; j < h[k - 1].size(); ++j) next[j] -= 2 * n * h[k - 1][j];
    h[k + 1] = std::move(next);
  }
  return h;
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly out(a.size() + b.size() - 1, mp::Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace detail

/// Integer coefficients of H_n, lowest degree first.
inline std::vector<mp::Integer> hermite_integer_coefficients(int n) {
  if (n < 0) throw DomainError("hermite_integer_coefficients: n must be >= 0");
  return detail::integer_hermite_polys(n).back();
}

/// Exact coefficients of P_N(x) = 2^N N! K_N(x, x) = (N+1) H_N^2 - N H_{N+1} H_{N-1}.
inline std::vector<mp::Integer> kernel_poly_coefficients(int cap, int max_cap = 200) {
  if (cap < 0) throw DomainError("kernel_poly_coefficients: cap must be >= 0");
  if (cap > max_cap)
    throw ResourceError("kernel_poly_coefficients: cap " + std::to_string(cap) + " exceeds limit " +
                        std::to_string(max_cap));
  const auto h = detail::integer_hermite_polys(cap + 1);
  const auto n = static_cast<std::size_t>(cap);
  auto p = detail::poly_mul(h[n], h[n]);
  for (auto& c : p) c *= cap + 1;
  if (cap > 0) {
    const auto cross = detail::poly_mul(h[n + 1], h[n - 1]);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= cap * cross[j];
  }
  return p;
}

/// |K_N(z, z)| / sum_n |h_n(z)|^2; vanishes at the zeros of the kernel.
inline double kernel_pole_residual(std::complex<double> z, int cap) {
  const auto seq = detail::orthonormal_recurrence<std::complex<double>>(z, cap);
  std::complex<double> sum = 0.0;
  double scale = 0.0;
  for (const auto& h : seq.v) {
    sum += h * h;
    scale += std::norm(h);
  }
  return std::abs(sum) / scale;
}

namespace detail {

/// K_N(z,z) / (d/dz) K_N(z,z) from the two-term confluent form on the recurrence.
inline std::complex<double> kernel_newton_ratio(std::complex<double> z, int cap) {
  const auto seq = orthonormal_recurrence<std::complex<double>>(z, cap + 1);
  const auto& h = seq.v;
  const auto n = static_cast<std::size_t>(cap);
  const double c = std::sqrt(static_cast<double>(cap) * (cap + 1.0));
  auto dh = [&](std::size_t k) { return k == 0 ? std::complex<double>(0.0) : std::sqrt(2.0 * k) * h[k - 1]; };
  const auto value = (cap + 1.0) * h[n] * h[n] - c * h[n + 1] * h[n - 1];
  const auto slope = 2.0 * (cap + 1.0) * h[n] * dh(n) - c * (dh(n + 1) * h[n - 1] + h[n + 1] * dh(n - 1));
  return value / slope;
}

inline std::vector<std::complex<double>> aberth_seed(int cap) {
  const double width = std::sqrt(2.0 * cap + 1.0);
  const double height = 0.87 * std::pow(2.0 * cap + 1.0, -1.0 / 6.0);
  std::vector<std::complex<double>> z;
  z.reserve(2 * static_cast<std::size_t>(cap));
  for (int k = 0; k < cap; ++k) {
    const double x = 0.9 * width * (-1.0 + (2.0 * k + 1.0) / cap);
    z.emplace_back(x, height);
    z.emplace_back(x, -height);
  }

  const std::size_t m = z.size();
  std::vector<std::complex<double>> step(m);
  for (int sweep = 0; sweep < 1000; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto ratio = kernel_newton_ratio(z[i], cap);
      std::complex<double> repel = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) repel += 1.0 / (z[i] - z[j]);
      step[i] = ratio / (1.0 - ratio * repel);
      if (!std::isfinite(step[i].real()) || !std::isfinite(step[i].imag())) step[i] = 0.0;
      worst = std::max(worst, std::abs(step[i]) / (1.0 + std::abs(z[i])));
    }
    for (std::size_t i = 0; i < m; ++i) z[i] -= step[i];
    if (worst < 1e-14) break;
  }
  return z;
}

/// P(z) = Q(z^2) evaluated by Horner in w = z^2, with a running error bound.
struct EvenPolynomial {
  std::vector<mp::Real> q;

  explicit EvenPolynomial(const std::vector<mp::Integer>& coeffs) {
    for (std::size_t j = 0; j < coeffs.size(); j += 2) q.emplace_back(coeffs[j]);
  }

  struct Value {
    mp::Complex p;
    mp::Complex dp;
    mp::Real bound;
  };

  Value eval(const mp::Complex& z) const {
    const mp::Complex w = z * z;
    const mp::Real aw = mp::abs(w);
    mp::Complex p(q.back(), mp::Real(0));
    mp::Complex dq;
    mp::Real b = boost::multiprecision::abs(q.back());
    for (std::size_t j = q.size() - 1; j-- > 0;) {
      dq = dq * w + p;
      p = p * w + mp::Complex(q[j], mp::Real(0));
      b = b * aw + boost::multiprecision::abs(q[j]);
    }
    const mp::Real two_z_re = 2 * z.re;
    const mp::Real two_z_im = 2 * z.im;
    Value out{p, mp::Complex(two_z_re, two_z_im) * dq, b};
    return out;
  }
};

/// Zeros at working precision, kept for residue sums.
struct PolishedZeros {
  int cap = 0;
  unsigned bits = 0;
  std::vector<mp::Complex> roots;
  std::vector<double> residuals;
  std::vector<std::size_t> unconverged;
};

inline double to_double(const mp::Real& r) { return r.convert_to<double>(); }

/// Aberth sweeps in extended precision from the double-precision seed; each root
/// is frozen once its correction falls below 2^{-bits/2} relative.
inline void polish_zeros(PolishedZeros& z, const EvenPolynomial& poly) {
  const std::size_t m = z.roots.size();
  const mp::Real fine = boost::multiprecision::ldexp(mp::Real(1), -static_cast<int>(z.bits / 2));
  std::vector<bool> done(m, false);
  std::vector<mp::Complex> step(m);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (done[i]) continue;
      const auto v = poly.eval(z.roots[i]);
      const mp::Complex ratio = v.p / v.dp;
      mp::Complex repel;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) repel += mp::Complex(1.0, 0.0) / (z.roots[i] - z.roots[j]);
      step[i] = ratio / (mp::Complex(1.0, 0.0) - ratio * repel);
      any = true;
    }
    if (!any) break;
    for (std::size_t i = 0; i < m; ++i) {
      if (done[i]) continue;
      z.roots[i] -= step[i];
      if (mp::abs(step[i]) < fine * (1 + mp::abs(z.roots[i]))) done[i] = true;
    }
  }
}

/// Residual |P/P'|/(1+|z|) per root, and whether the Horner error bound sits
/// at least 10x below the residual target.
inline bool assess_zeros(PolishedZeros& z, const EvenPolynomial& poly) {
  const mp::Real unit = boost::multiprecision::ldexp(mp::Real(1), -static_cast<int>(z.bits));
  const double terms = 4.0 * static_cast<double>(poly.q.size()) + 2.0;
  bool precise = true;
  z.residuals.assign(z.roots.size(), 0.0);
  z.unconverged.clear();
  for (std::size_t i = 0; i < z.roots.size(); ++i) {
    const auto v = poly.eval(z.roots[i]);
    const mp::Real dp = mp::abs(v.dp);
    const mp::Real scale = 1 + mp::abs(z.roots[i]);
    const double residual = to_double(mp::abs(v.p) / dp / scale);
    z.residuals[i] = residual;
    const bool resolved = v.bound * terms * unit / dp / scale < 1e-10;
    if (!resolved) precise = false;
    if (!(residual < 1e-9) || !resolved) z.unconverged.push_back(i);
  }
  return precise;
}

inline PolishedZeros compute_zeros(int cap, bool best_effort) {
  if (cap < 1) throw DomainError("complex_zeros: cap must be >= 1");
  const auto coeffs = kernel_poly_coefficients(cap, best_effort ? 100000 : 200);
  const auto seed = aberth_seed(cap);
  const auto fixed = mp::precision_override();
  PolishedZeros z;
  z.cap = cap;
  z.bits = fixed.value_or(128u + 8u * static_cast<unsigned>(cap));
  for (int attempt = 0;; ++attempt) {
    mp::ScopedPrecision guard(z.bits);
    const EvenPolynomial poly(coeffs);
    if (z.roots.empty()) {
      for (const auto& s : seed) z.roots.emplace_back(s.real(), s.imag());
    } else {
      for (auto& r : z.roots) r = mp::Complex(mp::Real(r.re), mp::Real(r.im));
    }
    polish_zeros(z, poly);
    const bool precise = assess_zeros(z, poly);
    if (precise || fixed || attempt >= 2) break;
    z.bits *= 2;
  }
  return z;
}

}  // namespace detail

inline ComplexRootSet complex_zeros(int cap, bool best_effort = false) {
  const auto z = detail::compute_zeros(cap, best_effort);
  if (!best_effort && !z.unconverged.empty())
    throw NumericError("complex_zeros: roots did not converge", z.unconverged);
  ComplexRootSet out;
  out.cap = cap;
  out.precision_bits = z.bits;
  {
    mp::ScopedPrecision guard(z.bits);
    for (const auto& r : z.roots) out.roots.push_back(mp::to_complex(r));
  }
  std::vector<std::size_t> order(out.roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = out.roots[a];
    const auto& y = out.roots[b];
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::vector<std::complex<double>> sorted;
  for (std::size_t i : order) {
    sorted.push_back(out.roots[i]);
    out.max_residual = std::max(out.max_residual, z.residuals[i]);
  }
  std::vector<bool> bad(z.roots.size(), false);
  for (std::size_t i : z.unconverged) bad[i] = true;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (bad[order[k]]) out.flagged.push_back(k);
  out.roots = std::move(sorted);
  return out;
}

/// Spacing statistics of the upper-half-plane zeros, ordered by real part.
struct ZeroStructureReport {
  int cap = 0;
  std::vector<std::complex<double>> upper;
  std::vector<double> spacings;
  /// Over the central 60% of the spacing list.
  double spacing_mean = 0.0;
  double spacing_cv = 0.0;
  /// Mean of min(s_j, s_{j+1}) / max(s_j, s_{j+1}) over the same window.
  double gap_ratio_mean = 0.0;
  double max_imag = 0.0;
  double min_imag = 0.0;
  double conjugate_residual = 0.0;
  /// Least-squares fit Im = sum_j c_j (Re/R)^{2j} sampled at 101 points on [-R, R].
  std::vector<std::pair<double, double>> curve;
};

namespace detail {

inline std::vector<double> even_fit(const std::vector<std::complex<double>>& pts, double range, int degree) {
  const int m = degree + 1;
  std::vector<std::vector<double>> a(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  for (const auto& p : pts) {
    const double t = (p.real() / range) * (p.real() / range);
    std::vector<double> basis(static_cast<std::size_t>(m), 1.0);
    for (std::size_t j = 1; j < basis.size(); ++j) basis[j] = basis[j - 1] * t;
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (std::size_t c = 0; c < basis.size(); ++c) a[r][c] += basis[r] * basis[c];
      a[r].back() += basis[r] * p.imag();
    }
  }
  for (std::size_t c = 0; c < a.size(); ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < a.size(); ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0.0) continue;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < a[r].size(); ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> coef(a.size(), 0.0);
  for (std::size_t c = 0; c < a.size(); ++c)
    if (a[c][c] != 0.0) coef[c] = a[c].back() / a[c][c];
  return coef;
}

}  // namespace detail

inline ZeroStructureReport zero_structure_report(const ComplexRootSet& rs) {
  ZeroStructureReport r;
  r.cap = rs.cap;
  for (const auto& z : rs.roots)
    if (z.imag() > 0) r.upper.push_back(z);
  std::sort(r.upper.begin(), r.upper.end(), [](auto a, auto b) { return a.real() < b.real(); });

  if (!r.upper.empty()) {
    r.max_imag = r.min_imag = r.upper.front().imag();
    for (const auto& z : r.upper) {
      r.max_imag = std::max(r.max_imag, z.imag());
      r.min_imag = std::min(r.min_imag, z.imag());
    }
  }
  for (const auto& z : rs.roots) {
    double best = INFINITY;
    for (const auto& w : rs.roots) best = std::min(best, std::abs(std::conj(z) - w));
    r.conjugate_residual = std::max(r.conjugate_residual, best);
  }
  for (std::size_t i = 1; i < r.upper.size(); ++i) r.spacings.push_back(std::abs(r.upper[i] - r.upper[i - 1]));

  const std::size_t m = r.spacings.size();
  if (m > 0) {
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.6 * static_cast<double>(m))));
    const std::size_t start = (m - count) / 2;
    double sum = 0.0, sq = 0.0, ratio = 0.0;
    for (std::size_t i = start; i < start + count; ++i) {
      sum += r.spacings[i];
      sq += r.spacings[i] * r.spacings[i];
    }
    r.spacing_mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sq / static_cast<double>(count) - r.spacing_mean * r.spacing_mean);
    r.spacing_cv = std::sqrt(var) / r.spacing_mean;
    std::size_t pairs = 0;
    for (std::size_t i = start; i + 1 < start + count; ++i, ++pairs)
      ratio += std::min(r.spacings[i], r.spacings[i + 1]) / std::max(r.spacings[i], r.spacings[i + 1]);
    r.gap_ratio_mean = pairs > 0 ? ratio / static_cast<double>(pairs) : 1.0;
  }

  if (!r.upper.empty()) {
    const double range = std::sqrt(2.0 * rs.cap + 1.0);
    const int degree = std::min<int>(3, static_cast<int>(r.upper.size()) - 1);
    const auto coef = detail::even_fit(r.upper, range, std::max(0, degree));
    for (int i = 0; i <= 100; ++i) {
      const double x = range * (-1.0 + i / 50.0);
      const double t = (x / range) * (x / range);
      double y = 0.0, p = 1.0;
      for (double c : coef) {
        y += c * p;
        p *= t;
      }
      r.curve.emplace_back(x, y);
    }
  }
  return r;
}

/// alpha_k, the coefficient of lambda^{2-2k} in the expansion of d_N at infinity:
/// (1/2 pi i) times the contour integral of lambda^{2k-3} d_N over a large circle,
/// summed as residues at the kernel zeros plus the residue at the origin.
inline double laurent_coefficient(int cap, int k) {
  if (k < 0) throw DomainError("laurent_coefficient: k must be >= 0");
  if (cap < 1) throw DomainError("laurent_coefficient: cap must be >= 1");
  auto z = detail::compute_zeros(cap, false);
  if (!z.unconverged.empty()) throw NumericError("laurent_coefficient: kernel zeros did not converge", z.unconverged);

  const auto p = kernel_poly_coefficients(cap);
  const auto h = hermite_integer_coefficients(cap + 1);
  const auto num = detail::poly_mul(h, h);

  // Residue at 0 of lambda^{2k-3} A/B, A = H_{N+1}^2, B = 4 P_N (both even): the
  // Taylor coefficient of lambda^{2-2k}.
  mp::Rational origin(0);
  if (k <= 1) {
    const mp::Rational c0(num[0], 4 * p[0]);
    if (k == 1) {
      origin = c0;
    } else {
      const mp::Rational a2 = num.size() > 2 ? mp::Rational(num[2]) : mp::Rational(0);
      origin = (a2 - mp::Rational(4 * p[2]) * c0) / mp::Rational(4 * p[0]);
    }
  }

  mp::ScopedPrecision guard(z.bits);
  const detail::EvenPolynomial poly(p);
  std::vector<mp::Real> hr;
  for (const auto& c : h) hr.emplace_back(c);
  mp::Real total = mp::Real(origin);
  for (const auto& root : z.roots) {
    mp::Complex hv(hr.back(), mp::Real(0));
    for (std::size_t j = hr.size() - 1; j-- > 0;) hv = hv * root + mp::Complex(hr[j], mp::Real(0));
    const auto v = poly.eval(root);
    mp::Complex power(1.0, 0.0);
    const int e = 2 * k - 3;
    const mp::Complex base = e >= 0 ? root : mp::Complex(1.0, 0.0) / root;
    for (int i = 0; i < std::abs(e); ++i) power = power * base;
    const mp::Complex residue = power * hv * hv / (v.dp * mp::Real(4));
    total += residue.re;
  }
  return detail::to_double(total);
}

}  // namespace qspec

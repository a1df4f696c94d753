#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "qspec/errors.hpp"
#include "qspec/hermite.hpp"

namespace qspec {

enum class LimitMode { quadrature, phase };

struct LimitQuery {
  double target = 0.0;
  double epsilon = 1e-3;
  int n0 = 0;
  LimitMode mode = LimitMode::quadrature;
  /// Phase mode only: offset of the equally spaced phase points.
  double theta0 = 0.0;
};

/// An eigenvalue of xi_N (or a phase point of the N-truncation) within epsilon of the target.
struct ProximityCertificate {
  LimitMode mode = LimitMode::quadrature;
  double target = 0.0;
  double epsilon = 0.0;
  int cap = 0;
  double eigenvalue = 0.0;
  double distance = 0.0;
  /// Quadrature: |h_{N+1}/h'_{N+1}| at the eigenvalue. Phase: 0.
  double residual = 0.0;
  /// Phase mode: index k of theta_k.
  int index = 0;
};

inline constexpr long kLimitSearchCap = 1000000;

/// pi / sqrt(2N+1), the asymptotic gap between neighbouring eigenvalues of xi_N.
inline double spacing_estimate(int cap) {
  if (cap < 1) throw DomainError("spacing_estimate: cap must be >= 1");
  return std::numbers::pi / std::sqrt(2.0 * cap + 1.0);
}

/// The gap between the two roots of H_{N+1} nearest the origin.
inline double central_gap(int cap) {
  const RootSet rs = hermite_roots(cap + 1);
  const std::size_t n = rs.roots.size();
  if (n < 2) return 0.0;
  const std::size_t mid = n / 2;
  return rs.roots[mid] - rs.roots[mid - 1];
}

/// max |gap / spacing_estimate - 1| over the central half of consecutive gaps of H_{N+1}.
inline double spacing_law_deviation(int cap) {
  const RootSet rs = hermite_roots(cap + 1);
  const std::size_t gaps = rs.roots.size() - 1;
  const std::size_t count = std::max<std::size_t>(1, gaps / 2);
  const std::size_t start = (gaps - count) / 2;
  const double estimate = spacing_estimate(cap);
  double worst = 0.0;
  for (std::size_t i = start; i < start + count; ++i)
    worst = std::max(worst, std::fabs((rs.roots[i + 1] - rs.roots[i]) / estimate - 1.0));
  return worst;
}

namespace detail {

/// h_{N+1}(x) / h'_{N+1}(x), the Newton step on the characteristic polynomial of xi_N.
inline double charpoly_newton_step(double x, int cap) {
  const auto seq = orthonormal_recurrence<double>(x, cap + 1);
  const auto n = static_cast<std::size_t>(cap);
  const double slope = std::sqrt(2.0 * (cap + 1.0)) * seq.v[n];
  return slope == 0.0 ? INFINITY : seq.v[n + 1] / slope;
}

inline double charpoly_sign_value(double x, int cap) {
  return orthonormal_recurrence<double>(x, cap + 1).v.back();
}

/// Roots of H_{N+1} in [lo, hi], bracketed on a grid finer than half the minimum gap.
inline std::vector<double> roots_in_window(double lo, double hi, int cap) {
  const double bound = std::sqrt(2.0 * cap + 3.0);
  lo = std::max(lo, -bound);
  hi = std::min(hi, bound);
  std::vector<double> found;
  if (!(lo <= hi)) return found;
  const double step = std::numbers::pi / (8.0 * std::sqrt(2.0 * cap + 3.0));
  const long pieces = std::max(1L, static_cast<long>(std::ceil((hi - lo) / step)));
  double a = lo;
  double fa = charpoly_sign_value(a, cap);
  if (fa == 0.0) found.push_back(a);
  for (long i = 1; i <= pieces; ++i) {
    const double b = i == pieces ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pieces);
    const double fb = charpoly_sign_value(b, cap);
    if (fb == 0.0) {
      found.push_back(b);
    } else if (fa != 0.0 && std::signbit(fa) != std::signbit(fb)) {
      double l = a, r = b, fl = fa;
      for (int it = 0; it < 200 && r - l > 0.0; ++it) {
        const double m = 0.5 * (l + r);
        if (m <= l || m >= r) break;
        const double fm = charpoly_sign_value(m, cap);
        if (fm == 0.0) {
          l = r = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(fl)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      found.push_back(polish_root(0.5 * (l + r), cap + 1));
    }
    a = b;
    fa = fb;
  }
  return found;
}

inline double circular_distance(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(std::fabs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

}  // namespace detail

/// theta_k = theta0 + 2 pi k/(N+1), k = 0..N, reduced to [0, 2 pi).
inline std::vector<double> phase_spectrum(int cap, double theta0 = 0.0) {
  if (cap < 0) throw DomainError("phase_spectrum: cap must be >= 0");
  const double two_pi = 2.0 * std::numbers::pi;
  const double gap = two_pi / (cap + 1.0);
  std::vector<double> out(static_cast<std::size_t>(cap) + 1);
  for (int k = 0; k <= cap; ++k) {
    double t = std::fmod(theta0 + gap * k, two_pi);
    if (t < 0) t += two_pi;
    out[static_cast<std::size_t>(k)] = t;
  }
  return out;
}

/// Re-derives the certificate from scratch: root residual and distance.
inline bool verify_certificate(const ProximityCertificate& c, double theta0 = 0.0) {
  if (c.cap < 0 || !(c.epsilon > 0)) return false;
  if (c.mode == LimitMode::phase) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta0 + two_pi / (c.cap + 1.0) * c.index, two_pi);
    if (t < 0) t += two_pi;
    return t == c.eigenvalue && detail::circular_distance(t, c.target) < c.epsilon;
  }
  const double step = std::fabs(detail::charpoly_newton_step(c.eigenvalue, c.cap));
  return step < 1e-12 * (1.0 + std::fabs(c.eigenvalue)) && std::fabs(c.target - c.eigenvalue) < c.epsilon;
}

inline ProximityCertificate find_near_phase(const LimitQuery& q) {
  if (!(q.epsilon > 0)) throw DomainError("phase_limit_density: epsilon must be > 0");
  if (q.n0 < 0) throw DomainError("phase_limit_density: n0 must be >= 0");
  const double two_pi = 2.0 * std::numbers::pi;
  for (long n = q.n0; n < q.n0 + kLimitSearchCap; ++n) {
    const double gap = two_pi / (static_cast<double>(n) + 1.0);
    double offset = std::fmod(q.target - q.theta0, two_pi);
    if (offset < 0) offset += two_pi;
    const long guess = std::lround(offset / gap);
    for (long k : {guess - 1, guess, guess + 1}) {
      const long kk = ((k % (n + 1)) + (n + 1)) % (n + 1);
      double t = std::fmod(q.theta0 + gap * static_cast<double>(kk), two_pi);
      if (t < 0) t += two_pi;
      const double d = detail::circular_distance(t, q.target);
      if (d < q.epsilon) {
        ProximityCertificate c;
        c.mode = LimitMode::phase;
        c.target = q.target;
        c.epsilon = q.epsilon;
        c.cap = static_cast<int>(n);
        c.eigenvalue = t;
        c.distance = d;
        c.index = static_cast<int>(kk);
        return c;
      }
    }
  }
  throw NumericError("phase_limit_density: search cap reached");
}

/// First N >= max(n0, ceil((lambda^2-1)/2)) with an eigenvalue of xi_N within epsilon.
inline ProximityCertificate find_near_eigenvalue(const LimitQuery& q) {
  if (q.mode == LimitMode::phase) return find_near_phase(q);
  if (!(q.epsilon > 0)) throw DomainError("find_near_eigenvalue: epsilon must be > 0");
  if (q.n0 < 0) throw DomainError("find_near_eigenvalue: n0 must be >= 0");
  detail::require_finite(q.target, "find_near_eigenvalue");
  const long start = std::max<long>(q.n0, static_cast<long>(std::ceil((q.target * q.target - 1.0) / 2.0)));
  for (long n = start; n < start + kLimitSearchCap; ++n) {
    const int cap = static_cast<int>(n);
    const auto roots = detail::roots_in_window(q.target - q.epsilon, q.target + q.epsilon, cap);
    std::optional<double> best;
    for (double r : roots)
      if (!best || std::fabs(r - q.target) < std::fabs(*best - q.target)) best = r;
    if (best && std::fabs(*best - q.target) < q.epsilon) {
      ProximityCertificate c;
      c.target = q.target;
      c.epsilon = q.epsilon;
      c.cap = cap;
      c.eigenvalue = *best;
      c.distance = std::fabs(*best - q.target);
      c.residual = std::fabs(detail::charpoly_newton_step(*best, cap));
      return c;
    }
  }
  throw NumericError("find_near_eigenvalue: search cap reached");
}

inline ProximityCertificate phase_limit_density(double target_theta, double epsilon, int n0, double theta0 = 0.0) {
  return find_near_phase({target_theta, epsilon, n0, LimitMode::phase, theta0});
}

/// Finite density evidence for lim sigma(xi_N) = R on a grid.
struct DensityReport {
  double epsilon = 0.0;
  int n0 = 0;
  std::vector<ProximityCertificate> certificates;
  int max_cap = 0;
  bool all_found = true;
};

inline DensityReport spectrum_limit_density(const std::vector<double>& grid, double epsilon, int n0) {
  DensityReport r;
  r.epsilon = epsilon;
  r.n0 = n0;
  for (double x : grid) {
    r.certificates.push_back(find_near_eigenvalue({x, epsilon, n0}));
    r.max_cap = std::max(r.max_cap, r.certificates.back().cap);
    r.all_found = r.all_found && verify_certificate(r.certificates.back());
  }
  return r;
}

}  // namespace qspec

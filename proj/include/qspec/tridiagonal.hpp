#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qspec/errors.hpp"

namespace qspec {

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// couplings `offdiag` (offdiag[i] joins rows i and i+1) by implicit-shift QL.
///
/// Only the two work arrays are touched; no matrix is formed. Eigenvalues are
/// returned unsorted. Throws NumericError carrying the index whose QL sweep
/// failed to converge within `max_sweeps`.
inline std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                                   std::span<const double> offdiag,
                                                   int max_sweeps = 60) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (offdiag.size() + 1 != n) throw PreconditionError("tridiagonal_eigenvalues: offdiag must have n-1 entries");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = offdiag[i];

  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == max_sweeps)
        throw NumericError("tridiagonal QL failed to converge at index " + std::to_string(l), {l});

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(m) - 1; i >= static_cast<std::ptrdiff_t>(l); --i) {
        const std::size_t k = static_cast<std::size_t>(i);
        double f = s * e[k];
        const double b = c * e[k];
        r = std::hypot(f, g);
        e[k + 1] = r;
        if (r == 0.0) {
          d[k + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[k + 1] - p;
        r = (d[k] - g) * s + 2.0 * c * b;
        p = s * r;
        d[k + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  return d;
}

}  // namespace qspec

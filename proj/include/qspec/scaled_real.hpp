#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "qspec/errors.hpp"

namespace qspec {

/// Real number stored as mantissa * 2^exponent with |mantissa| in [1,2).
///
/// Carries magnitudes such as 2^n n! or H_n(x) for n in the thousands that
/// overflow a double. Every operation returns a canonical value; zero is
/// represented by a zero mantissa and zero exponent.
class ScaledReal {
 public:
  constexpr ScaledReal() = default;

  explicit ScaledReal(double value) { assign(value, 0); }

  static ScaledReal from_parts(double mantissa, std::int64_t exponent) {
    ScaledReal r;
    r.assign(mantissa, exponent);
    return r;
  }

  double mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return mantissa_ == 0.0; }
  int sign() const noexcept { return (mantissa_ > 0) - (mantissa_ < 0); }

  /// Nearest double; saturates to +-inf or 0 outside the double range.
  double to_double() const {
    if (is_zero()) return 0.0;
    if (exponent_ > 1100) return std::copysign(std::numeric_limits<double>::infinity(), mantissa_);
    if (exponent_ < -1100) return std::copysign(0.0, mantissa_);
    return std::ldexp(mantissa_, static_cast<int>(exponent_));
  }

  /// Natural logarithm of |value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(mantissa_)) + static_cast<double>(exponent_) * std::log(2.0);
  }

  ScaledReal abs() const { return from_parts(std::fabs(mantissa_), exponent_); }
  ScaledReal operator-() const { return from_parts(-mantissa_, exponent_); }

  /// Multiply by 2^k exactly.
  ScaledReal ldexp(std::int64_t k) const {
    if (is_zero()) return *this;
    return from_parts(mantissa_, exponent_ + k);
  }

  friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return from_parts(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
  }

  friend ScaledReal operator*(const ScaledReal& a, double s) { return a * ScaledReal(s); }
  friend ScaledReal operator*(double s, const ScaledReal& a) { return a * ScaledReal(s); }

  friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
    if (b.is_zero()) throw DomainError("ScaledReal: division by zero");
    if (a.is_zero()) return {};
    return from_parts(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
  }

  friend ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ScaledReal& big = a.exponent_ >= b.exponent_ ? a : b;
    const ScaledReal& small = a.exponent_ >= b.exponent_ ? b : a;
    const std::int64_t shift = big.exponent_ - small.exponent_;
    if (shift > 60) return big;
    const double sum = big.mantissa_ + std::ldexp(small.mantissa_, -static_cast<int>(shift));
    return from_parts(sum, big.exponent_);
  }

  friend ScaledReal operator-(const ScaledReal& a, const ScaledReal& b) { return a + (-b); }

  ScaledReal& operator+=(const ScaledReal& o) { return *this = *this + o; }
  ScaledReal& operator-=(const ScaledReal& o) { return *this = *this - o; }
  ScaledReal& operator*=(const ScaledReal& o) { return *this = *this * o; }

  /// Three-way comparison of represented values.
  friend int compare(const ScaledReal& a, const ScaledReal& b) {
    const ScaledReal d = a - b;
    return d.sign();
  }
  friend bool operator<(const ScaledReal& a, const ScaledReal& b) { return compare(a, b) < 0; }
  friend bool operator==(const ScaledReal& a, const ScaledReal& b) {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }

  /// |a-b| / max(|a|,|b|), computed without leaving scaled form.
  friend double relative_difference(const ScaledReal& a, const ScaledReal& b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    const ScaledReal scale = compare(a.abs(), b.abs()) >= 0 ? a.abs() : b.abs();
    return ((a - b) / scale).to_double();
  }

  friend std::ostream& operator<<(std::ostream& os, const ScaledReal& r) {
    return os << r.mantissa_ << "*2^" << r.exponent_;
  }

 private:
  void assign(double m, std::int64_t e) {
    if (!std::isfinite(m)) throw DomainError("ScaledReal: non-finite value");
    if (m == 0.0) {
      mantissa_ = 0.0;
      exponent_ = 0;
      return;
    }
    int k = 0;
    const double f = std::frexp(m, &k);  // |f| in [0.5, 1)
    mantissa_ = f * 2.0;
    exponent_ = e + k - 1;
  }

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

}  // namespace qspec

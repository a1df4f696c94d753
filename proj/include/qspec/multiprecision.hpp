#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

namespace qspec::mp {

using Real = boost::multiprecision::mpfr_float;
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// Sets the default mpfr precision for the enclosing scope.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

/// QSPEC_PRECISION (bits) when set to a positive integer.
inline std::optional<unsigned> precision_override() {
  const char* env = std::getenv("QSPEC_PRECISION");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v < 53 || v > 1u << 20) return std::nullopt;
  return static_cast<unsigned>(v);
}

/// Minimal complex arithmetic over an mpfr real (std::complex is unspecified
/// for non-fundamental types).
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i) : re(r), im(i) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const Real den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

inline Real abs(const Complex& z) { return boost::multiprecision::sqrt(z.re * z.re + z.im * z.im); }

inline std::complex<double> to_complex(const Complex& z) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

/// log2 of |x| for a big integer, exact to well under a bit.
inline double log2_abs(const Integer& x) {
  if (x == 0) return -INFINITY;
  const long e = static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(x)));
  if (e < 60) return std::log2(std::fabs(x.convert_to<double>()));
  const Integer top = boost::multiprecision::abs(x) >> static_cast<unsigned>(e - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(e - 52);
}

}  // namespace qspec::mp

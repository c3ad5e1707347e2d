#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lll {

using BigInt = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double to_double(const Q& q) { return q.template convert_to<double>(); }

inline Q q_pow(Q base, unsigned e) {
  Q r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline double log2_q(const Q& q) {
  if (q <= 0) throw internal_error("log2 of non-positive rational");
  // Split into mantissa/exponent so huge numerators stay in double range.
  BigInt num = numerator(q), den = denominator(q);
  long shift = static_cast<long>(msb(num)) - static_cast<long>(msb(den));
  Q scaled = shift >= 0 ? q / q_pow(Q(2), static_cast<unsigned>(shift))
                        : q * q_pow(Q(2), static_cast<unsigned>(-shift));
  return static_cast<double>(shift) + std::log2(to_double(scaled));
}

/// True when q's denominator is a power of two.
inline bool is_dyadic(const Q& q) {
  BigInt den = denominator(q);
  return (den & (den - 1)) == 0;
}

/// Recovers a small rational p/q (den <= max_den) from a double, when one
/// lies within 1e-12 relative error. Used to keep epsilon-dependent
/// comparisons exact for the usual test values (1, 1/2, 2/5, ...).
inline std::optional<std::pair<long, long>> small_rational_of(double x, long max_den = 1000) {
  if (!(x > 0)) return std::nullopt;
  // Continued fraction expansion.
  double v = x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(v);
    if (a > 1e15) break;
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= 1e-12 * std::max(1.0, std::abs(x)))
      return std::make_pair(p1, q1);
    double frac = v - a;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

/// Exact number with a power-of-two denominator: num / 2^exp.
/// Closed under + - * (no gcd normalisation needed), which makes the
/// incremental expectation updates in the table builder cheap.
struct Dyadic {
  BigInt num;
  unsigned exp = 0;

  Dyadic() : num(0) {}
  Dyadic(long v) : num(v) {}
  Dyadic(BigInt n, unsigned e) : num(std::move(n)), exp(e) { normalize(); }

  static Dyadic from_q(const Q& q) {
    BigInt den = denominator(q);
    if ((den & (den - 1)) != 0) throw internal_error("non-dyadic rational in dyadic context");
    unsigned e = den == 1 ? 0 : static_cast<unsigned>(msb(den));
    return Dyadic(numerator(q), e);
  }

  Q to_q() const { return Q(num, BigInt(1) << exp); }

  void normalize() {
    if (num == 0) {
      exp = 0;
      return;
    }
    unsigned tz = static_cast<unsigned>(lsb(num < 0 ? BigInt(-num) : num));
    unsigned s = std::min(tz, exp);
    if (s) {
      num >>= s;
      exp -= s;
    }
  }

  bool is_zero() const { return num == 0; }

  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num * b.num, a.exp + b.exp);
  }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp, b.exp);
    return Dyadic((a.num << (e - a.exp)) + (b.num << (e - b.exp)), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp, b.exp);
    return Dyadic((a.num << (e - a.exp)) - (b.num << (e - b.exp)), e);
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp == b.exp && a.num == b.num;
  }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp, b.exp);
    return (a.num << (e - a.exp)) < (b.num << (e - b.exp));
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return a == b || a < b; }
};

}  // namespace lll

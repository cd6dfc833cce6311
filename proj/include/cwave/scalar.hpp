// Exact and floating scalar types.
//
// Rational is an arbitrary-precision GMP rational.  Scalar is an exact real of
// the form c * pi^k with rational c: this covers every constant appearing in
// the wavelet-set constructions (2*pi, pi/2^(2n+1), pi^2 areas, ...) while
// keeping arithmetic and comparisons decidable.  Sums of different powers of
// pi are rejected instead of being approximated.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cwave {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

Rational parse_rational(const std::string& text);  // "3/4", "-2", "0.7"
std::string to_string(const Rational& q);           // "3/4", "-2"
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : c_(v) {}                 // NOLINT: implicit by design
  Scalar(long v) : c_(v) {}                // NOLINT
  Scalar(long long v) : c_(v) {}           // NOLINT
  Scalar(const Rational& c, int pi_power = 0) : c_(c), pi_(pi_power) { canon(); }  // NOLINT

  static Scalar pi(const Rational& c = 1) { return Scalar(c, 1); }
  static Scalar ratio(long num, long den) { return Scalar(Rational(num, den)); }

  const Rational& coeff() const { return c_; }
  int pi_power() const { return pi_; }
  bool is_zero() const { return c_ == 0; }
  int sign() const { return c_ > 0 ? 1 : (c_ < 0 ? -1 : 0); }
  double to_double() const;
  std::string str() const;

  Scalar operator-() const { return Scalar(-c_, pi_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o) { return *this += -o; }
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.pi_ == b.pi_ && a.c_ == b.c_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0; }

  // Three-way comparison.  Different pi powers are comparable only when one
  // side is zero (sign test); otherwise std::domain_error.
  static int compare(const Scalar& a, const Scalar& b);

 private:
  void canon() {
    if (c_ == 0) pi_ = 0;
  }
  Rational c_{0};
  int pi_ = 0;
};

inline Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }
inline double to_double(const Scalar& x) { return x.to_double(); }
inline std::string to_string(const Scalar& x) { return x.str(); }

// Uniform helpers used by templates that run in both exact and float mode.
template <class T>
inline bool exact_zero(const T& x) {
  return x == T(0);
}
template <class T>
struct is_exact : std::true_type {};
template <>
struct is_exact<double> : std::false_type {};

inline Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace cwave

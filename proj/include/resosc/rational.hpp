#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace resosc {

/// Arbitrary-precision rational number, always reduced to lowest terms with a
/// positive denominator. The canonical zero is 0/1. Backed by GMP.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit by design
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);

  /// Strict ASCII grammar: -?digits(/digits)? with nonzero denominator.
  /// Returns nullopt on any violation (including a unicode minus sign).
  static std::optional<Rational> parse(std::string_view text);

  /// Always emits an explicit denominator, e.g. "1/2", "-21/8", "0/1".
  std::string str() const;

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.q_ == b.q_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.q_ < b.q_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

mpz_class factorial(unsigned n);
mpz_class binomial(unsigned n, unsigned k);

/// Falling factorial m(m-1)...(m-j+1); equals 0 when j > m.
mpz_class falling_factorial(unsigned m, unsigned j);

/// log|q| computed from the GMP limbs, safe far beyond double range.
/// Returns -infinity for zero.
double log_abs(const Rational& q);

}  // namespace resosc

#pragma once

#include <map>
#include <utility>

#include "resosc/rational.hpp"

namespace resosc {

/// Normal-ordered operator polynomial in the Bargmann pair (z, d/dz):
/// a finite sum of c_{ij} z^i d^j with rational coefficients. The storage
/// itself enforces normal order (every z power to the left of every
/// derivative); products are reduced with the reordering rule
///   d^j z^k = sum_s C(j,s) C(k,s) s! z^{k-s} d^{j-s},
/// which is the iterated form of [d, z] = 1. Zero coefficients are never
/// stored, so equality of maps is equality of operators.
class WeylPoly {
 public:
  using Key = std::pair<int, int>;  // (zpow, dpow)

  WeylPoly() = default;

  static WeylPoly constant(const Rational& c);
  static WeylPoly z();
  static WeylPoly deriv();
  static WeylPoly monomial(int zpow, int dpow, const Rational& c);

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(int zpow, int dpow) const;

  WeylPoly& operator+=(const WeylPoly& o);
  WeylPoly& operator-=(const WeylPoly& o);
  WeylPoly& operator*=(const Rational& c);

  friend WeylPoly operator+(WeylPoly a, const WeylPoly& b) { return a += b; }
  friend WeylPoly operator-(WeylPoly a, const WeylPoly& b) { return a -= b; }
  friend WeylPoly operator*(WeylPoly a, const Rational& c) { return a *= c; }

  /// Normal-ordered product; bilinear and associative.
  friend WeylPoly operator*(const WeylPoly& a, const WeylPoly& b);

  WeylPoly pow(int k) const;

  friend bool operator==(const WeylPoly& a, const WeylPoly& b) {
    return a.terms_ == b.terms_;
  }

  void add_term(int zpow, int dpow, const Rational& c);

 private:
  std::map<Key, Rational> terms_;
};

/// Finite linear combination of unnormalized monomials z^m, m >= 0.
/// In this basis z and d/dz act with integer matrix elements
/// (z.z^m = z^{m+1}, d.z^m = m z^{m-1}), so the whole perturbative
/// pipeline stays in exact rationals.
class MonomialVector {
 public:
  MonomialVector() = default;

  static MonomialVector monomial(int degree, const Rational& c = Rational(1));

  const std::map<int, Rational>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  Rational coeff(int degree) const;
  int max_degree() const;  // -1 when empty

  MonomialVector& operator+=(const MonomialVector& o);
  MonomialVector& operator-=(const MonomialVector& o);
  MonomialVector& operator*=(const Rational& c);
  friend MonomialVector operator+(MonomialVector a, const MonomialVector& b) {
    return a += b;
  }
  friend MonomialVector operator-(MonomialVector a, const MonomialVector& b) {
    return a -= b;
  }
  friend MonomialVector operator*(MonomialVector a, const Rational& c) {
    return a *= c;
  }
  friend bool operator==(const MonomialVector& a, const MonomialVector& b) {
    return a.coeffs_ == b.coeffs_;
  }

  void add(int degree, const Rational& c);

 private:
  std::map<int, Rational> coeffs_;
};

/// Exact action of a normal-ordered operator on a monomial vector.
MonomialVector weyl_apply(const WeylPoly& op, const MonomialVector& v);

struct Hamiltonian {
  WeylPoly h0;  // z d/dz + 1/2
  WeylPoly v;   // normal-ordered (1/4)(z + d/dz)^4
};

/// H(g) = h0 + g v with exact rational coefficients. h0 has eigenvalues
/// n + 1/2 on z^n; v couples degrees m with |m - n| in {0, 2, 4}.
Hamiltonian build_hamiltonian();

}  // namespace resosc

#include "resosc/weyl.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace resosc {

WeylPoly WeylPoly::constant(const Rational& c) {
  return monomial(0, 0, c);
}

WeylPoly WeylPoly::z() { return monomial(1, 0, Rational(1)); }

WeylPoly WeylPoly::deriv() { return monomial(0, 1, Rational(1)); }

WeylPoly WeylPoly::monomial(int zpow, int dpow, const Rational& c) {
  if (zpow < 0 || dpow < 0)
    throw std::invalid_argument("WeylPoly: negative exponent");
  WeylPoly p;
  p.add_term(zpow, dpow, c);
  return p;
}

Rational WeylPoly::coeff(int zpow, int dpow) const {
  auto it = terms_.find({zpow, dpow});
  return it == terms_.end() ? Rational() : it->second;
}

void WeylPoly::add_term(int zpow, int dpow, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(Key{zpow, dpow}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylPoly& WeylPoly::operator+=(const WeylPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

WeylPoly& WeylPoly::operator-=(const WeylPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
  return *this;
}

WeylPoly& WeylPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coeff] : terms_) coeff *= c;
  return *this;
}

WeylPoly operator*(const WeylPoly& a, const WeylPoly& b) {
  WeylPoly out;
  for (const auto& [ka, ca] : a.terms()) {
    const int i = ka.first, j = ka.second;
    for (const auto& [kb, cb] : b.terms()) {
      const int k = kb.first, l = kb.second;
      const Rational cab = ca * cb;
      // (z^i d^j)(z^k d^l) = sum_s C(j,s) C(k,s) s! z^{i+k-s} d^{j+l-s}
      const int smax = std::min(j, k);
      for (int s = 0; s <= smax; ++s) {
        mpz_class w = binomial(static_cast<unsigned>(j), static_cast<unsigned>(s)) *
                      binomial(static_cast<unsigned>(k), static_cast<unsigned>(s)) *
                      factorial(static_cast<unsigned>(s));
        out.add_term(i + k - s, j + l - s, cab * Rational(w, mpz_class(1)));
      }
    }
  }
  return out;
}

WeylPoly WeylPoly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("WeylPoly::pow: negative power");
  WeylPoly result = WeylPoly::constant(Rational(1));
  for (int i = 0; i < k; ++i) result = result * (*this);
  return result;
}

MonomialVector MonomialVector::monomial(int degree, const Rational& c) {
  if (degree < 0) throw std::invalid_argument("MonomialVector: negative degree");
  MonomialVector v;
  v.add(degree, c);
  return v;
}

Rational MonomialVector::coeff(int degree) const {
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? Rational() : it->second;
}

int MonomialVector::max_degree() const {
  return coeffs_.empty() ? -1 : coeffs_.rbegin()->first;
}

void MonomialVector::add(int degree, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.emplace(degree, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

MonomialVector& MonomialVector::operator+=(const MonomialVector& o) {
  for (const auto& [m, c] : o.coeffs_) add(m, c);
  return *this;
}

MonomialVector& MonomialVector::operator-=(const MonomialVector& o) {
  for (const auto& [m, c] : o.coeffs_) add(m, -c);
  return *this;
}

MonomialVector& MonomialVector::operator*=(const Rational& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [m, coeff] : coeffs_) coeff *= c;
  return *this;
}

MonomialVector weyl_apply(const WeylPoly& op, const MonomialVector& v) {
  MonomialVector out;
  for (const auto& [m, cv] : v.coeffs()) {
    for (const auto& [key, cop] : op.terms()) {
      const int i = key.first, j = key.second;
      if (j > m) continue;  // d^j annihilates z^m
      const mpz_class ff =
          falling_factorial(static_cast<unsigned>(m), static_cast<unsigned>(j));
      out.add(m - j + i, cv * cop * Rational(ff, mpz_class(1)));
    }
  }
  return out;
}

Hamiltonian build_hamiltonian() {
  Hamiltonian h;
  h.h0 = WeylPoly::monomial(1, 1, Rational(1)) +
         WeylPoly::constant(Rational(1, 2));
  const WeylPoly x = WeylPoly::z() + WeylPoly::deriv();
  h.v = x.pow(4) * Rational(1, 4);
  return h;
}

}  // namespace resosc

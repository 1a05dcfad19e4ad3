#include "resosc/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resosc {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) == 0) throw std::invalid_argument("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool negative = false;
  if (i < n && text[i] == '-') {
    negative = true;
    ++i;
  }
  std::size_t num_begin = i;
  while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == num_begin) return std::nullopt;
  std::string num(text.substr(num_begin, i - num_begin));

  std::string den = "1";
  if (i < n) {
    if (text[i] != '/') return std::nullopt;
    ++i;
    std::size_t den_begin = i;
    while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == den_begin || i != n) return std::nullopt;
    den.assign(text.substr(den_begin));
  }

  mpz_class nz(num, 10), dz(den, 10);
  if (sgn(dz) == 0) return std::nullopt;
  if (negative) nz = -nz;
  return Rational(nz, dz);
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

mpz_class factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class falling_factorial(unsigned m, unsigned j) {
  if (j > m) return 0;
  mpz_class r = 1;
  for (unsigned i = 0; i < j; ++i) r *= static_cast<long>(m - i);
  return r;
}

double log_abs(const Rational& q) {
  if (q.is_zero()) return -std::numeric_limits<double>::infinity();
  long en = 0, ed = 0;
  const double dn = mpz_get_d_2exp(&en, q.num().get_mpz_t());
  const double dd = mpz_get_d_2exp(&ed, q.den().get_mpz_t());
  constexpr double ln2 = 0.6931471805599453;
  return (std::log(std::fabs(dn)) + static_cast<double>(en) * ln2) -
         (std::log(std::fabs(dd)) + static_cast<double>(ed) * ln2);
}

}  // namespace resosc

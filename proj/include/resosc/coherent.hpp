#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace resosc {

using Complex = std::complex<double>;

/// Entire function represented by its coefficients in the orthonormal basis
/// phi_m = z^m / sqrt(m!): f = sum a_m phi_m, so ||f||^2 = sum |a_m|^2.
class HoloPoly {
 public:
  HoloPoly() = default;
  explicit HoloPoly(std::vector<Complex> coeffs) : a_(std::move(coeffs)) {}

  static HoloPoly basis_state(int n);

  /// Normalized coherent state e^{-|alpha|^2/2} e^{alpha z}, expanded until
  /// the dropped tail is negligible.
  static HoloPoly coherent_state(Complex alpha, int degree_cap = 512);

  int degree() const { return static_cast<int>(a_.size()) - 1; }
  Complex coeff(int m) const {
    return (m >= 0 && m <= degree()) ? a_[static_cast<std::size_t>(m)] : Complex(0.0);
  }
  const std::vector<Complex>& coeffs() const { return a_; }

  double norm() const;
  Complex inner(const HoloPoly& other) const;  // <this, other>

  /// Pointwise value sum a_m z^m / sqrt(m!) (stable incremental basis).
  Complex eval(Complex z) const;

  void set(int m, Complex v);
  void trim(double eps = 0.0);

 private:
  std::vector<Complex> a_;
};

struct DisplaceOptions {
  int degree_cap = 512;
  double tail_tol = 1e-12;  // dropped tail relative to the running norm
};

/// Unitary displacement: e^{-|alpha|^2/2} e^{alpha z} f(z - conj(alpha)).
/// The translation is the exact finite binomial expansion; the e^{alpha z}
/// factor is expanded adaptively until the tail bound drops below
/// tail_tol of the running norm. Throws DegreeOverflow at the cap.
HoloPoly displace(Complex alpha, const HoloPoly& f,
                  const DisplaceOptions& opts = {});

/// N x N matrix of the displacement in the phi-basis; column n holds the
/// coefficients of displace(alpha, phi_n) truncated to N rows.
Eigen::MatrixXcd displacement_matrix(Complex alpha, int N);

/// Non-perturbative sector parameters. alpha is pinned to the instanton
/// action through |alpha|^2 = S_inst / (2g).
struct InstantonParams {
  double s_inst = 0.0;
  double g = 0.0;
  double theta = 0.0;  // branch phase; principal branch is 0

  Complex alpha() const;
  double weight() const;  // e^{-S_inst/g}
};

/// e^{-S/g} times the unitary displacement by alpha(p); a contraction with
/// ||I f|| = e^{-S/g} ||f||.
HoloPoly instanton_apply(const InstantonParams& p, const HoloPoly& f,
                         const DisplaceOptions& opts = {});

/// Band-4 Hamiltonian action in the orthonormal basis (exact-rational
/// elements converted to double).
HoloPoly apply_hamiltonian(double g, const HoloPoly& f);

/// Normalized energy of the ell-fold displaced state:
///   <phi_n | H D^ell | phi_n> / <phi_n | D^ell | phi_n>,  D^ell = D(ell alpha).
/// ell = 0 is the bare Rayleigh quotient n + 1/2 + g (3/4)(2n^2+2n+1).
Complex sector_energy(int level, double g, const InstantonParams& p, int ell);

/// Instanton-weighted expectation ratio
///   sum_l (1/l!) e^{-l S/g} <phi_n| H D^l |phi_n>
///   -------------------------------------------- ,  truncated at lmax.
///   sum_l (1/l!) e^{-l S/g} <phi_n|   D^l |phi_n>
/// Throws DenominatorVanishes (reporting the partial sums) if the
/// denominator cancels.
Complex rayleigh_ratio(int level, double g, const InstantonParams& p, int lmax);

struct TransSeriesParams {
  Complex sigma = 0.0;
  int lmax = 0;
  int level = 0;
  double sector_exponent = -1.5;  // b in the g^{l b} sector prefactor
};

/// Trans-series assembly: the sigma^0 sector is the resummed perturbative
/// energy (provider), and each higher sector adds
///   sigma^l e^{-l S/g} g^{l b} [R_l - R_{l-1}]
/// with R_l the normalized displaced-sector energies above. sigma = 0
/// returns the pure Borel sum.
Complex transseries_energy(const TransSeriesParams& tp, const InstantonParams& p,
                           double g,
                           const std::function<Complex(double)>& resummed_phi0);

/// Harmonic time evolution a_n -> e^{-i(n+1/2)t} a_n.
HoloPoly evolve(const HoloPoly& f, double t);

/// Husimi density (1/pi) e^{-|z|^2} |f(z)|^2; requires ||f|| = 1 within
/// 1e-10 (NotNormalized otherwise).
double husimi(const HoloPoly& f, Complex z);

/// Reproducing kernel e^{z conj(w)}.
Complex kernel(Complex z, Complex w);

/// <K(.,w), f> by two-dimensional Gaussian quadrature with the normalized
/// measure; equals f(w) for f in the space. Throws QuadratureNotConverged.
Complex reproducing_check(const HoloPoly& f, Complex w);

enum class ToeplitzSymbol { Z, ConjZ, AbsZSquared, Coherent };
enum class Measure { Unnormalized, Normalized };

struct ToeplitzSpec {
  ToeplitzSymbol symbol = ToeplitzSymbol::AbsZSquared;
  Measure measure = Measure::Unnormalized;
  Complex alpha = 0.0;  // only read by the coherent symbol
};

/// (m! n!)^{-1/2} integral of conj(z)^m f(z) z^n e^{-|z|^2} over the plane,
/// under the chosen measure convention. Polar grid: Gauss radial rule in
/// s = r^2 and a uniform angular rule, refined to 1e-8.
Complex toeplitz_element(const ToeplitzSpec& spec, int m, int n);

/// One-dimensional quadrature of the Segal-Bargmann transform applied to
/// the n-th Hermite function; equals phi_n(z) = z^n / sqrt(n!).
Complex sb_transform(int hermite_index, Complex z);

}  // namespace resosc

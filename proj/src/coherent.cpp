#include "resosc/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resosc/errors.hpp"
#include "resosc/quadrature.hpp"
#include "resosc/spectral.hpp"

namespace resosc {

HoloPoly HoloPoly::basis_state(int n) {
  if (n < 0) throw std::invalid_argument("basis_state: negative index");
  std::vector<Complex> a(static_cast<std::size_t>(n) + 1, Complex(0.0));
  a.back() = 1.0;
  return HoloPoly(std::move(a));
}

HoloPoly HoloPoly::coherent_state(Complex alpha, int degree_cap) {
  const double gauss = std::exp(-0.5 * std::norm(alpha));
  std::vector<Complex> a;
  Complex term = gauss;  // a_m = e^{-|alpha|^2/2} alpha^m / sqrt(m!)
  for (int m = 0;; ++m) {
    a.push_back(term);
    if (m > std::norm(alpha) && std::abs(term) < 1e-18) break;
    if (m >= degree_cap)
      throw DegreeOverflow("coherent_state: degree cap exceeded");
    term *= alpha / std::sqrt(static_cast<double>(m + 1));
  }
  return HoloPoly(std::move(a));
}

double HoloPoly::norm() const {
  double s = 0.0;
  for (const auto& c : a_) s += std::norm(c);
  return std::sqrt(s);
}

Complex HoloPoly::inner(const HoloPoly& other) const {
  const std::size_t n = std::min(a_.size(), other.a_.size());
  Complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a_[i]) * other.a_[i];
  return s;
}

Complex HoloPoly::eval(Complex z) const {
  Complex basis = 1.0;  // phi_m(z), built as prod z / sqrt(i)
  Complex s = 0.0;
  for (std::size_t m = 0; m < a_.size(); ++m) {
    if (m > 0) basis *= z / std::sqrt(static_cast<double>(m));
    s += a_[m] * basis;
  }
  return s;
}

void HoloPoly::set(int m, Complex v) {
  if (m < 0) throw std::invalid_argument("HoloPoly::set: negative degree");
  if (m >= static_cast<int>(a_.size()))
    a_.resize(static_cast<std::size_t>(m) + 1, Complex(0.0));
  a_[static_cast<std::size_t>(m)] = v;
}

void HoloPoly::trim(double eps) {
  while (!a_.empty() && std::abs(a_.back()) <= eps) a_.pop_back();
}

HoloPoly displace(Complex alpha, const HoloPoly& f, const DisplaceOptions& opts) {
  const int d = f.degree();
  if (d < 0) return f;

  // Translation f(z - conj(alpha)) in normalized coefficients:
  //   u_j = sum_{m>=j} a_m * sqrt(m!/j!) (-conj(alpha))^{m-j} / (m-j)!.
  const Complex shift = -std::conj(alpha);
  std::vector<Complex> u(static_cast<std::size_t>(d) + 1, Complex(0.0));
  for (int j = 0; j <= d; ++j) {
    Complex factor = 1.0;  // sqrt(m!/j!) shift^{m-j} / (m-j)! at m = j + s
    Complex acc = f.coeff(j);
    for (int s = 1; j + s <= d; ++s) {
      factor *= shift * std::sqrt(static_cast<double>(j + s)) /
                static_cast<double>(s);
      acc += f.coeff(j + s) * factor;
    }
    u[static_cast<std::size_t>(j)] = acc;
  }

  // Multiplication by e^{alpha z}:
  //   A_r = e^{-|alpha|^2/2} sum_{j<=min(r,d)} u_j sqrt(r!/j!) alpha^{r-j}/(r-j)!.
  const double gauss = std::exp(-0.5 * std::norm(alpha));
  const double amag = std::abs(alpha);
  std::vector<Complex> out;
  // Column factors sqrt(r!/j!) alpha^{r-j} / (r-j)! grow one step per r.
  std::vector<Complex> col(static_cast<std::size_t>(d) + 1, Complex(1.0));
  double norm_sq = 0.0;
  for (int r = 0;; ++r) {
    if (r > 0) {
      const double sr = std::sqrt(static_cast<double>(r));
      for (int j = 0; j <= std::min(r - 1, d); ++j)
        col[static_cast<std::size_t>(j)] *= alpha * sr / static_cast<double>(r - j);
      if (r <= d) col[static_cast<std::size_t>(r)] = 1.0;
    }
    Complex acc = 0.0;
    double majorant = 0.0;  // sum of |terms|; A_r itself can cancel to zero
    for (int j = 0; j <= std::min(r, d); ++j) {
      const Complex term =
          u[static_cast<std::size_t>(j)] * col[static_cast<std::size_t>(j)];
      acc += term;
      majorant += std::abs(term);
    }
    const Complex a_r = gauss * acc;
    out.push_back(a_r);
    norm_sq += std::norm(a_r);

    if (r >= d) {
      // Every per-j step ratio beyond r is below q, so |A_i| stays under
      // gauss * majorant * q^{i-r} and the dropped 2-norm is bounded by a
      // geometric tail.
      const double q = amag * std::sqrt(static_cast<double>(r + 2)) /
                       static_cast<double>(r + 2 - d);
      if (q < 0.9) {
        const double tail = gauss * majorant * q /
                            std::sqrt(std::max(1.0 - q * q, 1e-12));
        if (tail <= opts.tail_tol * std::sqrt(std::max(norm_sq, 1e-300))) break;
      }
    }
    if (r + 1 > opts.degree_cap)
      throw DegreeOverflow("displace: degree cap " +
                           std::to_string(opts.degree_cap) +
                           " exceeded before meeting the tail tolerance");
  }
  HoloPoly result{std::move(out)};
  result.trim(0.0);
  return result;
}

Eigen::MatrixXcd displacement_matrix(Complex alpha, int N) {
  if (N < 4) throw std::invalid_argument("displacement_matrix: require N >= 4");
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    const HoloPoly column = displace(alpha, HoloPoly::basis_state(n));
    for (int m = 0; m < N; ++m) mat(m, n) = column.coeff(m);
  }
  return mat;
}

Complex InstantonParams::alpha() const {
  if (!(s_inst > 0.0) || !(g > 0.0))
    throw std::invalid_argument("InstantonParams: require s_inst > 0 and g > 0");
  const double mag = std::sqrt(s_inst / (2.0 * g));
  return std::polar(mag, theta);
}

double InstantonParams::weight() const { return std::exp(-s_inst / g); }

HoloPoly instanton_apply(const InstantonParams& p, const HoloPoly& f,
                         const DisplaceOptions& opts) {
  HoloPoly displaced = displace(p.alpha(), f, opts);
  const double w = p.weight();
  std::vector<Complex> scaled = displaced.coeffs();
  for (auto& c : scaled) c *= w;
  return HoloPoly(std::move(scaled));
}

HoloPoly apply_hamiltonian(double g, const HoloPoly& f) {
  const int d = f.degree();
  HoloPoly out;
  if (d < 0) return out;
  for (int m = 0; m <= d + 4; ++m) {
    Complex acc = 0.0;
    for (int n = std::max(0, m - 4); n <= std::min(d, m + 4); ++n)
      acc += matrix_element(g, m, n) * f.coeff(n);
    out.set(m, acc);
  }
  out.trim(0.0);
  return out;
}

Complex sector_energy(int level, double g, const InstantonParams& p, int ell) {
  if (ell < 0) throw std::invalid_argument("sector_energy: negative sector");
  const HoloPoly base = HoloPoly::basis_state(level);
  const HoloPoly psi =
      ell == 0 ? base : displace(static_cast<double>(ell) * p.alpha(), base);
  const Complex den = psi.coeff(level);
  if (std::abs(den) < 1e-300)
    throw DenominatorVanishes("sector_energy: vanishing overlap at sector " +
                              std::to_string(ell));
  const Complex num = apply_hamiltonian(g, psi).coeff(level);
  return num / den;
}

Complex rayleigh_ratio(int level, double g, const InstantonParams& p, int lmax) {
  if (lmax < 0) throw std::invalid_argument("rayleigh_ratio: negative lmax");
  const HoloPoly base = HoloPoly::basis_state(level);

  Complex num = 0.0, den = 0.0;
  double inv_factorial = 1.0;
  std::ostringstream partial;
  for (int ell = 0; ell <= lmax; ++ell) {
    if (ell > 0) inv_factorial /= static_cast<double>(ell);
    const HoloPoly psi =
        ell == 0 ? base : displace(static_cast<double>(ell) * p.alpha(), base);
    const double w = inv_factorial * std::exp(-ell * p.s_inst / g);
    num += w * apply_hamiltonian(g, psi).coeff(level);
    den += w * psi.coeff(level);
    partial << (ell ? ", " : "") << "l=" << ell << ": den=" << den;
  }
  if (std::abs(den) < 1e-300)
    throw DenominatorVanishes("rayleigh_ratio: denominator vanished (" +
                              partial.str() + ")");
  return num / den;
}

Complex transseries_energy(const TransSeriesParams& tp, const InstantonParams& p,
                           double g,
                           const std::function<Complex(double)>& resummed_phi0) {
  if (tp.lmax < 0) throw std::invalid_argument("transseries_energy: lmax < 0");
  Complex value = resummed_phi0(g);
  if (tp.sigma == Complex(0.0)) return value;

  Complex sigma_pow = 1.0;
  for (int ell = 1; ell <= tp.lmax; ++ell) {
    sigma_pow *= tp.sigma;
    const Complex increment =
        sector_energy(tp.level, g, p, ell) - sector_energy(tp.level, g, p, ell - 1);
    const double weight = std::exp(-ell * p.s_inst / g) *
                          std::pow(g, ell * tp.sector_exponent);
    value += sigma_pow * weight * increment;
  }
  return value;
}

HoloPoly evolve(const HoloPoly& f, double t) {
  std::vector<Complex> a = f.coeffs();
  for (std::size_t n = 0; n < a.size(); ++n)
    a[n] *= std::polar(1.0, -(static_cast<double>(n) + 0.5) * t);
  return HoloPoly(std::move(a));
}

double husimi(const HoloPoly& f, Complex z) {
  if (std::fabs(f.norm() - 1.0) > 1e-10)
    throw NotNormalized("husimi: state norm deviates from 1 by more than 1e-10");
  return std::exp(-std::norm(z)) * std::norm(f.eval(z)) / M_PI;
}

Complex kernel(Complex z, Complex w) { return std::exp(z * std::conj(w)); }

namespace {

// (1/pi) int conj(K(z,w)) f(z) e^{-|z|^2} d^2 z on a polar grid with
// Gauss-Laguerre nodes in s = r^2 and a uniform angular rule.
Complex kernel_pairing(const HoloPoly& f, Complex w, int radial, int angular) {
  const QuadratureRule rule = gauss_laguerre(radial);
  Complex total = 0.0;
  for (int i = 0; i < radial; ++i) {
    const double r = std::sqrt(rule.nodes[static_cast<std::size_t>(i)]);
    Complex ring = 0.0;
    for (int t = 0; t < angular; ++t) {
      const double theta = 2.0 * M_PI * t / angular;
      const Complex z = std::polar(r, theta);
      ring += std::exp(std::conj(z) * w) * f.eval(z);
    }
    total += rule.weights[static_cast<std::size_t>(i)] * ring /
             static_cast<double>(angular);
  }
  return total;
}

}  // namespace

Complex reproducing_check(const HoloPoly& f, Complex w) {
  const int d = std::max(f.degree(), 0);
  int radial = d + 16;
  int angular = 2 * d + 32;
  Complex prev = kernel_pairing(f, w, radial, angular);
  for (int pass = 0; pass < 4; ++pass) {
    radial *= 2;
    angular *= 2;
    const Complex cur = kernel_pairing(f, w, radial, angular);
    const double tol = 1e-10 * std::max(std::abs(cur), std::abs(prev)) +
                       1e-13 * std::max(1.0, f.norm());
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("reproducing_check: refinement stalled");
}

namespace {

Complex toeplitz_symbol_value(const ToeplitzSpec& spec, Complex z) {
  switch (spec.symbol) {
    case ToeplitzSymbol::Z:
      return z;
    case ToeplitzSymbol::ConjZ:
      return std::conj(z);
    case ToeplitzSymbol::AbsZSquared:
      return std::norm(z);
    case ToeplitzSymbol::Coherent:
      return std::exp(-0.5 * std::norm(spec.alpha)) * std::exp(spec.alpha * z);
  }
  throw std::invalid_argument("toeplitz_element: unknown symbol");
}

Complex toeplitz_grid(const ToeplitzSpec& spec, int m, int n, int radial,
                      int angular) {
  const QuadratureRule rule = gauss_laguerre(radial);
  const double half = 0.5 * (m + n);
  Complex total = 0.0;
  for (int i = 0; i < radial; ++i) {
    const double s = rule.nodes[static_cast<std::size_t>(i)];
    const double r = std::sqrt(s);
    Complex ring = 0.0;
    for (int t = 0; t < angular; ++t) {
      const double theta = 2.0 * M_PI * t / angular;
      const Complex z = std::polar(r, theta);
      ring += std::polar(1.0, (n - m) * theta) * toeplitz_symbol_value(spec, z);
    }
    // d^2 z = r dr dtheta = (1/2) ds dtheta
    total += rule.weights[static_cast<std::size_t>(i)] * std::pow(s, half) *
             ring * (M_PI / angular);
  }
  double norm = 1.0;  // (m! n!)^{-1/2}
  for (int i = 1; i <= m; ++i) norm /= std::sqrt(static_cast<double>(i));
  for (int i = 1; i <= n; ++i) norm /= std::sqrt(static_cast<double>(i));
  total *= norm;
  if (spec.measure == Measure::Normalized) total /= M_PI;
  return total;
}

}  // namespace

Complex toeplitz_element(const ToeplitzSpec& spec, int m, int n) {
  if (m < 0 || n < 0)
    throw std::invalid_argument("toeplitz_element: negative index");

  int radial = m + n + 16;
  int angular = std::max(64, 2 * (m + n) + 16);
  Complex prev = toeplitz_grid(spec, m, n, radial, angular);
  for (int pass = 0; pass < 4; ++pass) {
    radial *= 2;
    angular *= 2;
    const Complex cur = toeplitz_grid(spec, m, n, radial, angular);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1.0});
    if (std::abs(cur - prev) <= 1e-8 * scale) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("toeplitz_element: refinement stalled");
}

namespace {

// Orthonormal Hermite polynomials for weight e^{-x^2}:
// Htilde_0 = pi^{-1/4}, Htilde_{k+1} = x sqrt(2/(k+1)) Htilde_k
//            - sqrt(k/(k+1)) Htilde_{k-1}.
double hermite_orthonormal(int n, double x) {
  double h0 = std::pow(M_PI, -0.25);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = x * std::sqrt(2.0 / (k + 1)) * h1 -
                      std::sqrt(static_cast<double>(k) / (k + 1)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

Complex sb_transform_fixed(int n, Complex z, int nodes) {
  const QuadratureRule rule = gauss_hermite(nodes);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    acc += rule.weights[i] * hermite_orthonormal(n, x) *
           std::exp(std::sqrt(2.0) * x * z);
  }
  return std::pow(M_PI, -0.25) * std::exp(-0.5 * z * z) * acc;
}

}  // namespace

Complex sb_transform(int hermite_index, Complex z) {
  if (hermite_index < 0 || hermite_index > 12)
    throw std::invalid_argument(
        "sb_transform: hermite index must be in [0, 12]");

  int nodes = 48;
  Complex prev = sb_transform_fixed(hermite_index, z, nodes);
  for (int pass = 0; pass < 4; ++pass) {
    nodes *= 2;
    const Complex cur = sb_transform_fixed(hermite_index, z, nodes);
    // The integrand is O(1), so absolute agreement is floored at roundoff
    // even when the transform value itself is tiny.
    const double tol =
        1e-10 * std::max(std::abs(cur), std::abs(prev)) + 1e-13;
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("sb_transform: refinement stalled");
}

}  // namespace resosc

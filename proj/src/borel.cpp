#include "resosc/borel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "resosc/errors.hpp"
#include "resosc/quadrature.hpp"

namespace resosc {

BorelSeries borel_transform(const EnergySeries& s) {
  BorelSeries b;
  b.level = s.level;
  b.coeffs.reserve(s.coeffs.size());
  for (std::size_t k = 0; k < s.coeffs.size(); ++k)
    b.coeffs.push_back(s.coeffs[k] /
                       Rational(factorial(static_cast<unsigned>(k)), 1));
  return b;
}

std::complex<double> PadeApproximant::eval(std::complex<double> x) const {
  std::complex<double> n = 0.0, d = 0.0;
  for (auto it = num_d.rbegin(); it != num_d.rend(); ++it) n = n * x + *it;
  for (auto it = den_d.rbegin(); it != den_d.rend(); ++it) d = d * x + *it;
  return n / d;
}

double PadeApproximant::eval(double x) const {
  double n = 0.0, d = 0.0;
  for (auto it = num_d.rbegin(); it != num_d.rend(); ++it) n = n * x + *it;
  for (auto it = den_d.rbegin(); it != den_d.rend(); ++it) d = d * x + *it;
  return n / d;
}

namespace {

Rational coeff_at(const std::vector<Rational>& b, int i) {
  if (i < 0 || i >= static_cast<int>(b.size())) return Rational();
  return b[static_cast<std::size_t>(i)];
}

// Exact Gaussian elimination; returns false (with the achieved rank) on a
// rank-deficient system.
bool solve_exact(std::vector<std::vector<Rational>>& a,
                 std::vector<Rational>& rhs, std::vector<Rational>& x,
                 int& rank) {
  const int m = static_cast<int>(rhs.size());
  rank = 0;
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int r = col; r < m; ++r) {
      if (!a[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return false;
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    ++rank;
    for (int r = col + 1; r < m; ++r) {
      if (a[r][col].is_zero()) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (int c = col; c < m; ++c) a[r][c] -= factor * a[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  x.assign(m, Rational());
  for (int r = m - 1; r >= 0; --r) {
    Rational acc = rhs[r];
    for (int c = r + 1; c < m; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return true;
}

}  // namespace

PadeApproximant pade(const BorelSeries& b, int L, int M) {
  if (L < 0 || M < 0) throw std::invalid_argument("pade: negative order");
  const int need = L + M + 1;
  if (static_cast<int>(b.coeffs.size()) < need)
    throw InsufficientOrder("pade: need " + std::to_string(need) +
                            " coefficients, have " +
                            std::to_string(b.coeffs.size()));

  PadeApproximant p;
  p.L = L;
  p.M = M;
  p.den.assign(static_cast<std::size_t>(M) + 1, Rational());
  p.den[0] = Rational(1);

  if (M > 0) {
    // sum_{j=1..M} d_j b_{L+1+r-j} = -b_{L+1+r},  r = 0..M-1
    std::vector<std::vector<Rational>> a(
        M, std::vector<Rational>(static_cast<std::size_t>(M)));
    std::vector<Rational> rhs(static_cast<std::size_t>(M));
    for (int r = 0; r < M; ++r) {
      for (int j = 1; j <= M; ++j) a[r][j - 1] = coeff_at(b.coeffs, L + 1 + r - j);
      rhs[r] = -coeff_at(b.coeffs, L + 1 + r);
    }
    std::vector<Rational> d;
    int rank = 0;
    if (!solve_exact(a, rhs, d, rank))
      throw SingularPadeSystem("pade: rank-deficient denominator system", rank);
    for (int j = 1; j <= M; ++j) p.den[j] = d[j - 1];
  }

  p.num.assign(static_cast<std::size_t>(L) + 1, Rational());
  for (int i = 0; i <= L; ++i) {
    Rational acc;
    for (int j = 0; j <= std::min(i, M); ++j)
      acc += p.den[j] * coeff_at(b.coeffs, i - j);
    p.num[i] = acc;
  }

  // Postcondition: the Taylor expansion of N/D reproduces every input
  // coefficient through order L+M, exactly.
  std::vector<Rational> t(static_cast<std::size_t>(L + M) + 1);
  for (int i = 0; i <= L + M; ++i) {
    Rational acc = (i <= L) ? p.num[i] : Rational();
    for (int j = 1; j <= std::min(i, M); ++j) acc -= p.den[j] * t[i - j];
    t[i] = acc;
    if (t[i] != b.coeffs[static_cast<std::size_t>(i)])
      throw Error("pade: re-expansion mismatch at order " + std::to_string(i));
  }

  p.num_d.reserve(p.num.size());
  p.den_d.reserve(p.den.size());
  for (const auto& c : p.num) p.num_d.push_back(c.to_double());
  for (const auto& c : p.den) p.den_d.push_back(c.to_double());
  return p;
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[static_cast<std::size_t>(deg)] == 0.0) --deg;
  if (deg < 1) return {};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  const double lead = coeffs[static_cast<std::size_t>(deg)];
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("poly_roots: companion eigensolve failed");

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

namespace {

double poly_scale_at(const std::vector<double>& coeffs, double radius) {
  double scale = 0.0, r = 1.0;
  for (double c : coeffs) {
    scale = std::max(scale, std::fabs(c) * r);
    r *= radius;
  }
  return scale;
}

std::complex<double> poly_eval(const std::vector<double>& coeffs,
                               std::complex<double> x) {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

std::vector<std::complex<double>> filtered_poles(const PadeApproximant& p) {
  const auto poles = poly_roots(p.den_d);
  const auto zeros = poly_roots(p.num_d);

  std::vector<std::complex<double>> kept;
  for (const auto& pole : poles) {
    const double near = 1e-6 * (1.0 + std::abs(pole));
    bool doublet = false;
    for (const auto& zero : zeros) {
      if (std::abs(pole - zero) <= near) {
        doublet = true;
        break;
      }
    }
    const double num_mag = std::abs(poly_eval(p.num_d, pole));
    const double num_scale = poly_scale_at(p.num_d, std::abs(pole));
    const bool tiny_residue = num_mag <= 1e-12 * num_scale;
    if (doublet || tiny_residue) continue;
    kept.push_back(pole);
  }
  return kept;
}

namespace {

// Above roughly [12/12] the exact approximants of these Gevrey series grow
// genuine defect poles (verified by exact sign scans of the denominator),
// so pole-based estimation stays at moderate order even when many more
// coefficients are available.
constexpr int kMaxPoleOrder = 12;

std::complex<double> nearest_pole_estimate(const BorelSeries& b, int order,
                                           int M) {
  BorelSeries window;
  window.level = b.level;
  window.coeffs.assign(b.coeffs.begin(), b.coeffs.begin() + order);
  int L = order - 1 - M;
  int seen_rank = -1;
  for (;;) {
    try {
      const PadeApproximant p = pade(window, L, M);
      const auto poles = filtered_poles(p);
      if (poles.empty())
        throw InsufficientOrder("singularity_estimate: no surviving poles");
      auto best = poles.front();
      for (const auto& pole : poles)
        if (std::abs(pole) < std::abs(best)) best = pole;
      // Real coefficients force conjugate pairs; a pair with small split
      // straddles a real branch point, so report its real midpoint.
      if (std::fabs(best.imag()) <= 0.15 * std::fabs(best.real()))
        best = {best.real(), 0.0};
      return best;
    } catch (const SingularPadeSystem& e) {
      seen_rank = std::max(seen_rank, e.rank);
      if (L > 0) {
        --L;  // tie-break rule: retry with a smaller numerator
        continue;
      }
      // Exactly-rational input: every system with M above the true
      // denominator degree is singular, and the achieved rank bounds that
      // degree. Generic series never reach this branch.
      if (seen_rank >= 1 && seen_rank < M) {
        M = seen_rank;
        L = order - 1 - M;
        seen_rank = -1;
        continue;
      }
      throw;
    }
  }
}

// Neville extrapolation of (h_i, y_i) to h = 0.
double neville_at_zero(const std::vector<double>& h, std::vector<double> y) {
  const std::size_t n = h.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      y[i] = ((0.0 - h[i + level]) * y[i] - (0.0 - h[i]) * y[i + 1]) /
             (h[i] - h[i + level]);
    }
  }
  return y[0];
}

// Three-level Richardson in 1/k applied to ratios b_{k+1}/b_k, using the
// last four ratios available below `order`.
std::complex<double> ratio_estimate(const BorelSeries& b, int order) {
  const int kmax = order - 2;  // last index with a ratio inside the window
  const int points = 4;
  if (kmax - points + 1 < 1)
    throw InsufficientOrder("singularity_estimate: ratio window too short");
  std::vector<double> h, u;
  for (int k = kmax - points + 1; k <= kmax; ++k) {
    const Rational& bk = b.coeffs[static_cast<std::size_t>(k)];
    const Rational& bk1 = b.coeffs[static_cast<std::size_t>(k) + 1];
    if (bk.is_zero())
      throw InsufficientOrder("singularity_estimate: zero coefficient in window");
    h.push_back(1.0 / static_cast<double>(k));
    u.push_back((bk1 / bk).to_double());
  }
  std::reverse(h.begin(), h.end());
  std::reverse(u.begin(), u.end());
  const double limit = neville_at_zero(h, u);
  if (limit == 0.0)
    throw InsufficientOrder("singularity_estimate: vanishing ratio limit");
  return {1.0 / limit, 0.0};
}

}  // namespace

SingularityEstimate singularity_estimate(const BorelSeries& b,
                                         SingularityMethod method) {
  const int K = static_cast<int>(b.coeffs.size());
  if (K < 12)
    throw InsufficientOrder("singularity_estimate: need at least 12 coefficients");

  SingularityEstimate est;
  est.method = method;

  if (method == SingularityMethod::PadePole) {
    // Median over a small band of orders: individual [M/M] nearest poles
    // jitter by a few percent when a defect pole wanders close, and the
    // median rejects those outliers; the half-spread is the stability bar.
    const int M0 = std::min((K - 1) / 2, kMaxPoleOrder);
    std::vector<std::complex<double>> band;
    for (int M = std::max(4, M0 - 2); M <= M0 + 2; ++M) {
      if (2 * M + 1 > K) break;
      try {
        band.push_back(nearest_pole_estimate(b, 2 * M + 1, M));
        est.order_used = std::max(est.order_used, 2 * M + 1);
      } catch (const Error&) {
        // a single band member may fail; the median over the rest stands
      }
    }
    if (band.empty())
      throw InsufficientOrder("singularity_estimate: no usable approximant");
    std::sort(band.begin(), band.end(),
              [](auto a, auto c) { return std::abs(a) < std::abs(c); });
    est.location = band[band.size() / 2];
    const double spread =
        0.5 * (std::abs(band.back()) - std::abs(band.front()));
    est.stability = spread / std::abs(est.location);
  } else {
    // Stability compares against the window eight orders shorter; the
    // last-window drift alone underestimates the remaining 1/K bias.
    const std::complex<double> cur = ratio_estimate(b, K);
    const std::complex<double> prev = ratio_estimate(b, K - 8);
    est.location = cur;
    est.order_used = K;
    est.stability = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
  }
  return est;
}

Resummation resummation_with_order_variation(const BorelSeries& b, int L,
                                             int M, double g) {
  BorelSeries head;
  head.level = b.level;
  head.coeffs.assign(b.coeffs.begin(),
                     b.coeffs.begin() + std::min<std::size_t>(
                                            b.coeffs.size(),
                                            static_cast<std::size_t>(L + M) + 1));
  const ResummationResult main = laplace_sum(pade(head, L, M), g);
  Resummation out;
  out.result = main;
  out.L = L;
  out.M = M;
  if (L >= 2 && M >= 2) {
    const ResummationResult varied =
        laplace_sum(pade(head, L - 2, M - 2), g);
    out.order_variation = std::fabs(main.value - varied.value);
    out.result.error_estimate =
        std::max(out.result.error_estimate, out.order_variation);
  }
  out.stability =
      out.order_variation / std::max(std::fabs(main.value), 1e-300);
  return out;
}

ResummationResult laplace_sum(const PadeApproximant& p, double g) {
  if (!(g > 0.0)) throw std::invalid_argument("laplace_sum: require g > 0");

  for (const auto& pole : poly_roots(p.den_d)) {
    const double dist =
        pole.real() >= 0.0 ? std::fabs(pole.imag()) : std::abs(pole);
    if (dist <= 1e-8)
      throw PoleOnContour("laplace_sum: denominator root on the integration "
                          "contour",
                          pole);
  }

  const double T = 40.0;  // e^{-40} ~ 4e-18 relative to the head
  const int panel_order = 16;
  const QuadratureRule base = gauss_legendre(panel_order);

  auto integrate_panels = [&](int panels) {
    double sum = 0.0;
    const double width = T / panels;
    for (int pa = 0; pa < panels; ++pa) {
      const double a = pa * width;
      double local = 0.0;
      for (int i = 0; i < panel_order; ++i) {
        const double t = a + 0.5 * width * (base.nodes[static_cast<std::size_t>(i)] + 1.0);
        local += base.weights[static_cast<std::size_t>(i)] *
                 std::exp(-t) * p.eval(g * t);
      }
      sum += 0.5 * width * local;
    }
    return sum;
  };

  // Fixed-order exponential-weight rule for the remainder past T.
  const QuadratureRule tail_rule = gauss_laguerre(32);
  double tail = 0.0;
  for (std::size_t i = 0; i < tail_rule.nodes.size(); ++i)
    tail += tail_rule.weights[i] * p.eval(g * (T + tail_rule.nodes[i]));
  tail *= std::exp(-T);

  ResummationResult result;
  int panels = 2;
  double value = integrate_panels(panels);
  const int max_nodes = 1 << 14;
  for (;;) {
    const int next = panels * 2;
    if (next * panel_order > max_nodes) break;
    const double refined = integrate_panels(next);
    const double delta = std::fabs(refined - value);
    result.refinement_deltas.push_back(delta);
    value = refined;
    panels = next;
    if (delta < 1e-10 * std::fabs(refined + tail)) break;
  }

  result.value = value + tail;
  result.nodes = panels * panel_order + static_cast<int>(tail_rule.nodes.size());
  const double floor = std::numeric_limits<double>::epsilon() * std::fabs(result.value);
  result.error_estimate =
      std::max(result.refinement_deltas.empty() ? floor
                                                : result.refinement_deltas.back(),
               floor);
  return result;
}

LargeOrderFit fit_large_order(const EnergySeries& s, int k_min, int k_max) {
  if (k_max > s.order())
    throw InsufficientOrder("fit_large_order: k_max exceeds available order");
  if (k_min < 1 || k_max - k_min < 8)
    throw InsufficientOrder("fit_large_order: window must span at least 8 orders");

  std::vector<double> ks, ys;
  bool skipped = false;
  for (int k = k_min; k <= k_max; ++k) {
    const Rational& ek = s.coeffs[static_cast<std::size_t>(k)];
    if (ek.is_zero()) {
      skipped = true;
      continue;
    }
    ks.push_back(static_cast<double>(k));
    ys.push_back(log_abs(ek) - std::lgamma(static_cast<double>(k) + 1.0));
  }
  if (ks.size() < 9)
    throw InsufficientOrder("fit_large_order: fewer than 9 usable orders");

  const int rows = static_cast<int>(ks.size());
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd target(rows);
  for (int i = 0; i < rows; ++i) {
    design(i, 0) = ks[static_cast<std::size_t>(i)];
    design(i, 1) = std::log(ks[static_cast<std::size_t>(i)]);
    design(i, 2) = 1.0;
    target(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d params =
      design.colPivHouseholderQr().solve(target);

  LargeOrderFit fit;
  fit.growth_rate = std::exp(params(0));
  fit.subleading_exponent = params(1);
  fit.amplitude = std::exp(params(2));
  fit.degenerate = skipped;

  const Eigen::VectorXd resid = target - design * params;
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  double rms = 0.0;
  for (double r : fit.residuals) rms += r * r;
  rms = std::sqrt(rms / rows);
  if (rms > 0.5) fit.degenerate = true;
  return fit;
}

double stokes_constant(const LargeOrderFit& fit, int level) {
  const double sign = (level % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(3.0, fit.subleading_exponent) /
         std::tgamma(-fit.subleading_exponent) * fit.amplitude;
}

std::string report_json(int level, const std::string& method, int order_used,
                        double value, double error_estimate, double stability) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\"level\": %d, \"method\": \"%s\", \"order_used\": %d, "
                "\"value\": %.17g, \"error_estimate\": %.17g, "
                "\"stability\": %.17g}",
                level, method.c_str(), order_used, value, error_estimate,
                stability);
  return buf;
}

}  // namespace resosc

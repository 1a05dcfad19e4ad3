#pragma once

#include <complex>
#include <string>
#include <vector>

#include "resosc/rational.hpp"
#include "resosc/series.hpp"

namespace resosc {

/// Borel-transformed series: coeffs[k] = E^{(k)} / k!, exact.
struct BorelSeries {
  int level = 0;
  std::vector<Rational> coeffs;
};

BorelSeries borel_transform(const EnergySeries& s);

/// Rational [L/M] Pade approximant N(x)/D(x) with D(0) = 1. Solved exactly
/// over the rationals (the Hankel systems are hopeless in floating point);
/// evaluation uses cached double copies of the coefficients.
struct PadeApproximant {
  std::vector<Rational> num;  // degree L
  std::vector<Rational> den;  // degree M, den[0] == 1
  int L = 0;
  int M = 0;
  std::vector<double> num_d;
  std::vector<double> den_d;

  std::complex<double> eval(std::complex<double> x) const;
  double eval(double x) const;
};

/// Exact solve of the Pade linear system; the Taylor re-expansion of N/D is
/// verified to match all L+M+1 input coefficients before returning.
/// Throws SingularPadeSystem (with the achieved rank) when the system is
/// rank-deficient; callers retry with (L-1, M).
PadeApproximant pade(const BorelSeries& b, int L, int M);

/// Roots of sum_i coeffs[i] x^i via the balanced companion matrix.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

enum class SingularityMethod { PadePole, RatioTest };

struct SingularityEstimate {
  std::complex<double> location;
  SingularityMethod method = SingularityMethod::PadePole;
  int order_used = 0;
  double stability = 0.0;  // relative change vs the previous order window
};

/// Nearest Borel-plane singularity. PadePole: closest filtered pole of the
/// [M/M] approximant (Froissart doublets discarded). RatioTest: Richardson
/// extrapolation of consecutive-coefficient ratios in 1/k.
SingularityEstimate singularity_estimate(const BorelSeries& b,
                                         SingularityMethod method);

/// Poles of the approximant after Froissart filtering.
std::vector<std::complex<double>> filtered_poles(const PadeApproximant& p);

struct ResummationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int nodes = 0;
  std::vector<double> refinement_deltas;  // |I_P - I_{P/2}| per doubling
};

/// laplace_sum composed with a Pade-order variation, so the error estimate
/// covers both quadrature refinement and approximant order.
struct Resummation {
  ResummationResult result;
  int L = 0;
  int M = 0;
  double order_variation = 0.0;
  double stability = 0.0;  // order variation relative to the value
};

Resummation resummation_with_order_variation(const BorelSeries& b, int L,
                                             int M, double g);

/// Borel sum E(g) = (1/g) int_0^inf e^{-xi/g} N/D(xi) dxi, evaluated after
/// the substitution xi = g t as int_0^inf e^{-t} N/D(g t) dt. Composite
/// Gauss-Legendre on [0, T] with panel doubling until the relative change
/// drops below 1e-10 (node cap 2^14), plus a fixed Gauss-Laguerre tail.
/// Throws PoleOnContour if a denominator root lies within 1e-8 of the
/// closed positive real axis.
ResummationResult laplace_sum(const PadeApproximant& p, double g);

struct LargeOrderFit {
  double growth_rate = 0.0;          // A in |E_k| ~ K k! A^k k^b
  double subleading_exponent = 0.0;  // b
  double amplitude = 0.0;            // K
  std::vector<double> residuals;
  bool degenerate = false;
};

/// Least-squares fit of log|E_k| - log k! against k log A + b log k + log K
/// over k in [k_min, k_max]. Zero coefficients are skipped; fewer than nine
/// usable points raises InsufficientOrder.
LargeOrderFit fit_large_order(const EnergySeries& s, int k_min, int k_max);

/// Stokes constant (-1)^n 3^b K / Gamma(-b) from a large-order fit.
double stokes_constant(const LargeOrderFit& fit, int level);

/// Deterministic one-line JSON with fields exactly
/// {level, method, order_used, value, error_estimate, stability};
/// floats carry 17 significant digits.
std::string report_json(int level, const std::string& method, int order_used,
                        double value, double error_estimate, double stability);

}  // namespace resosc

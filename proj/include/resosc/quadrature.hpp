#pragma once

#include <vector>

namespace resosc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss-Laguerre for weight e^{-x} on [0, inf).
QuadratureRule gauss_laguerre(int n);

/// Gauss-Hermite for weight e^{-x^2} on the real line.
QuadratureRule gauss_hermite(int n);

}  // namespace resosc

#include "resosc/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace resosc {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix of the
// monic orthogonal-polynomial recurrence, weights mu0 * (first eigenvector
// component)^2.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag,
                            const Eigen::VectorXd& subdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag,
                                Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("golub_welsch: tridiagonal eigensolve failed");

  const int n = static_cast<int>(diag.size());
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  return golub_welsch(diag, sub, 2.0);
}

QuadratureRule gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n < 1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) sub(k - 1) = static_cast<double>(k);
  return golub_welsch(diag, sub, 1.0);
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  return golub_welsch(diag, sub, std::sqrt(M_PI));
}

}  // namespace resosc

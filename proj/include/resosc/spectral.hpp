#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace resosc {

/// Truncated Hamiltonian in the orthonormal basis phi_n = z^n/sqrt(n!):
/// real symmetric with half-bandwidth 4 (entries vanish for |m - n| > 4).
struct OperatorMatrix {
  double g = 0.0;
  Eigen::MatrixXd mat;

  int dim() const { return static_cast<int>(mat.rows()); }
};

/// Exact-rational matrix element (m, n) of H(g) converted to double:
/// [coefficient of z^m in (H0 + g V) z^n] * sqrt(m!/n!).
double matrix_element(double g, int m, int n);

/// Builds the symmetric truncation; requires N >= 8. The upper triangle is
/// computed from the exact elements and mirrored, so symmetry is exact.
OperatorMatrix build_matrix(double g, int N);

struct EigenResult {
  double g = 0.0;
  int dim = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;   // ||H v - lambda v||_2 per pair
};

/// Lowest `count` eigenvalues; requires count <= N/4 (truncation guard).
EigenResult eigenvalues(const OperatorMatrix& m, int count);

/// Same spectrum via separate even/odd parity blocks (the Hamiltonian only
/// couples degrees of equal parity); used as a cross-check.
EigenResult eigenvalues_parity(const OperatorMatrix& m, int count);

struct ConvergenceRow {
  int level = 0;
  std::vector<double> values;  // one per dimension
  std::vector<double> deltas;  // successive |differences|
  bool converged = false;
};

struct ConvergenceStudy {
  double g = 0.0;
  std::vector<int> dims;
  std::vector<ConvergenceRow> rows;
  double tolerance = 0.0;
};

/// Eigenvalues across an ascending ladder of truncation dimensions, with
/// per-level convergence flags at the requested tolerance.
ConvergenceStudy convergence_study(double g, int levels,
                                   const std::vector<int>& dims,
                                   double tolerance = 1e-10);

/// CSV with header "g,N,level,eigenvalue,residual"; floats at 17 significant
/// digits.
std::string to_csv(const EigenResult& r);

std::string to_csv(const ConvergenceStudy& s);

}  // namespace resosc

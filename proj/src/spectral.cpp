#include "resosc/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "resosc/errors.hpp"
#include "resosc/weyl.hpp"

namespace resosc {

namespace {

const Hamiltonian& cached_hamiltonian() {
  static const Hamiltonian ham = build_hamiltonian();
  return ham;
}

// Exact rational coefficient of z^m in (op z^n).
Rational op_coeff(const WeylPoly& op, int m, int n) {
  return weyl_apply(op, MonomialVector::monomial(n)).coeff(m);
}

// X z^n = sum_m c_{mn} z^m and phi_n = z^n/sqrt(n!) give
// <phi_m|X phi_n> = c_{mn} sqrt(m!/n!); |m - n| <= 4 keeps the ratio small.
double basis_factor(int m, int n) {
  double ratio = 1.0;
  for (int i = n + 1; i <= m; ++i) ratio *= static_cast<double>(i);
  for (int i = m + 1; i <= n; ++i) ratio /= static_cast<double>(i);
  return std::sqrt(ratio);
}

void append_float(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

double matrix_element(double g, int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("matrix_element: negative index");
  if (std::abs(m - n) > 4) return 0.0;
  const auto& ham = cached_hamiltonian();
  const double h0 = op_coeff(ham.h0, m, n).to_double();
  const double v = op_coeff(ham.v, m, n).to_double();
  return (h0 + g * v) * basis_factor(m, n);
}

OperatorMatrix build_matrix(double g, int N) {
  if (N < 8) throw std::invalid_argument("build_matrix: require N >= 8");
  OperatorMatrix out;
  out.g = g;
  out.mat = Eigen::MatrixXd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    for (int m = n; m <= std::min(n + 4, N - 1); ++m) {
      const double e = matrix_element(g, m, n);
      out.mat(m, n) = e;
      out.mat(n, m) = e;
    }
  }
  return out;
}

namespace {

EigenResult finish_result(const OperatorMatrix& m, int count,
                          const Eigen::VectorXd& values,
                          const Eigen::MatrixXd& vectors) {
  EigenResult r;
  r.g = m.g;
  r.dim = m.dim();
  r.eigenvalues.reserve(static_cast<std::size_t>(count));
  r.residuals.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    r.eigenvalues.push_back(values(i));
    const Eigen::VectorXd res = m.mat * vectors.col(i) - values(i) * vectors.col(i);
    r.residuals.push_back(res.norm());
  }
  return r;
}

}  // namespace

EigenResult eigenvalues(const OperatorMatrix& m, int count) {
  const int N = m.dim();
  if (count < 1 || count > N / 4)
    throw std::invalid_argument("eigenvalues: require 1 <= count <= N/4");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("eigenvalues: eigensolver did not converge");

  return finish_result(m, count, solver.eigenvalues(), solver.eigenvectors());
}

EigenResult eigenvalues_parity(const OperatorMatrix& m, int count) {
  const int N = m.dim();
  if (count < 1 || count > N / 4)
    throw std::invalid_argument("eigenvalues_parity: require 1 <= count <= N/4");

  EigenResult r;
  r.g = m.g;
  r.dim = N;

  std::vector<std::pair<double, int>> all;  // (eigenvalue, parity)
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> idx;
    for (int i = parity; i < N; i += 2) idx.push_back(i);
    const int nb = static_cast<int>(idx.size());
    Eigen::MatrixXd block(nb, nb);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) block(a, b) = m.mat(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw ConvergenceFailure("eigenvalues_parity: eigensolver failed");
    for (int i = 0; i < nb; ++i) all.emplace_back(solver.eigenvalues()(i), parity);
  }
  std::sort(all.begin(), all.end());
  for (int i = 0; i < count; ++i) r.eigenvalues.push_back(all[static_cast<std::size_t>(i)].first);
  return r;
}

ConvergenceStudy convergence_study(double g, int levels,
                                   const std::vector<int>& dims,
                                   double tolerance) {
  if (dims.empty()) throw std::invalid_argument("convergence_study: no dims");
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] <= dims[i - 1])
      throw std::invalid_argument("convergence_study: dims must ascend");

  ConvergenceStudy study;
  study.g = g;
  study.dims = dims;
  study.tolerance = tolerance;
  study.rows.assign(static_cast<std::size_t>(levels), ConvergenceRow{});
  for (int n = 0; n < levels; ++n) study.rows[static_cast<std::size_t>(n)].level = n;

  for (int N : dims) {
    const OperatorMatrix m = build_matrix(g, N);
    const int count = std::min(levels, N / 4);
    const EigenResult r = eigenvalues(m, count);
    for (int n = 0; n < levels; ++n) {
      auto& row = study.rows[static_cast<std::size_t>(n)];
      if (n < count) row.values.push_back(r.eigenvalues[static_cast<std::size_t>(n)]);
    }
  }

  for (auto& row : study.rows) {
    for (std::size_t i = 1; i < row.values.size(); ++i)
      row.deltas.push_back(std::fabs(row.values[i] - row.values[i - 1]));
    row.converged = !row.deltas.empty() &&
                    row.deltas.back() <=
                        tolerance * std::max(1.0, std::fabs(row.values.back()));
  }
  return study;
}

std::string to_csv(const EigenResult& r) {
  std::string out = "g,N,level,eigenvalue,residual\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    append_float(out, r.g);
    out += ',';
    out += std::to_string(r.dim);
    out += ',';
    out += std::to_string(i);
    out += ',';
    append_float(out, r.eigenvalues[i]);
    out += ',';
    append_float(out, i < r.residuals.size() ? r.residuals[i] : 0.0);
    out += '\n';
  }
  return out;
}

std::string to_csv(const ConvergenceStudy& s) {
  std::string out = "g,N,level,eigenvalue,delta,converged\n";
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      append_float(out, s.g);
      out += ',';
      out += std::to_string(s.dims[i]);
      out += ',';
      out += std::to_string(row.level);
      out += ',';
      append_float(out, row.values[i]);
      out += ',';
      if (i == 0)
        out += "nan";
      else
        append_float(out, row.deltas[i - 1]);
      out += ',';
      out += row.converged ? "1" : "0";
      out += '\n';
    }
  }
  return out;
}

}  // namespace resosc

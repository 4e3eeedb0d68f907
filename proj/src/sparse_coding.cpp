#include "structdict/sparse_coding.hpp"

#include <algorithm>
#include <cmath>

namespace structdict {

namespace {

void check_unit_norm(const Dictionary& D) {
  for (Eigen::Index k = 0; k < D.atoms.cols(); ++k) {
    if (std::abs(D.atoms.col(k).norm() - 1.0) > 1e-10)
      throw DataError("omp_code: dictionary atom " + std::to_string(k) +
                      " is not unit-norm");
  }
}

} // namespace

Vector omp_code(const Dictionary& D, const Vector& y, const OmpParams& p) {
  const Eigen::Index K = D.atoms.cols();
  if (p.sparsity < 1 || p.sparsity > K)
    throw ConfigError("omp_code: sparsity must be in 1.." + std::to_string(K));
  if (p.residual_tol < 0) throw ConfigError("omp_code: residual_tol must be nonnegative");
  if (y.size() != D.atoms.rows())
    throw DimensionError("omp_code: y vs D dimension mismatch");
  if (!y.allFinite()) throw NumericalError("omp_code: non-finite input vector");
  check_unit_norm(D);

  Vector x = Vector::Zero(K);
  if (y.norm() == 0.0) return x;

  Vector residual = y;
  std::vector<Eigen::Index> support;
  std::vector<char> selected(static_cast<size_t>(K), 0);
  Vector coeffs;

  for (int step = 0; step < p.sparsity; ++step) {
    // Atom most correlated with the current residual, ties to lowest index.
    Vector corr = D.atoms.transpose() * residual;
    Eigen::Index best = -1;
    double best_abs = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (selected[static_cast<size_t>(k)]) continue;
      double a = std::abs(corr(k));
      if (a > best_abs) {
        best_abs = a;
        best = k;
      }
    }
    if (best < 0 || best_abs == 0.0) break;
    support.push_back(best);
    selected[static_cast<size_t>(best)] = 1;

    // Refit on the full support; minimum-norm solution when rank-deficient.
    Matrix sub(D.atoms.rows(), static_cast<Eigen::Index>(support.size()));
    for (size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = D.atoms.col(support[j]);
    coeffs = sub.completeOrthogonalDecomposition().solve(y);
    residual = y - sub * coeffs;
    if (residual.norm() <= p.residual_tol) break;
  }

  for (size_t j = 0; j < support.size(); ++j) x(support[j]) = coeffs(static_cast<Eigen::Index>(j));
  return x;
}

CoefficientMatrix omp_code_batch(const Dictionary& D, const Matrix& Y,
                                 const OmpParams& p) {
  CoefficientMatrix X(D.atoms.cols(), Y.cols());
  for (Eigen::Index i = 0; i < Y.cols(); ++i) X.col(i) = omp_code(D, Y.col(i), p);
  return X;
}

CoefficientMatrix omp_code_batch(const Dictionary& D, const LabeledMatrix& Y,
                                 const OmpParams& p) {
  return omp_code_batch(D, Y.data, p);
}

Matrix soft_threshold(const Matrix& M, double tau) {
  if (tau < 0) throw ConfigError("soft_threshold: negative threshold");
  return M.unaryExpr([tau](double m) {
    return std::max(m - tau, 0.0) + std::min(m + tau, 0.0);
  });
}

} // namespace structdict

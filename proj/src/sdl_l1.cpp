#include "structdict/sdl_l1.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>

#include "structdict/sparse_coding.hpp"

namespace structdict {

namespace {

void validate_admm_params(const AdmmParams& p) {
  validate_esdl_params(p);
  if (!(p.mu0 > 0)) throw ConfigError("admm: mu0 must be positive");
  if (p.mu0 > p.mu_max) throw ConfigError("admm: mu0 exceeds mu_max");
  if (!(p.rho > 1.0)) throw ConfigError("admm: rho must exceed 1");
  if (!(p.primal_tol > 0)) throw ConfigError("admm: primal_tol must be positive");
}

} // namespace

CoefficientMatrix admm_update_x(const Dictionary& D, const LabeledMatrix& Y,
                                const LabeledMatrix& Y_alter, const IdealMatrix& Q,
                                const CoefficientMatrix& Z, const CoefficientMatrix& L,
                                double mu, const AdmmParams& p) {
  if (!(mu > 0)) throw ConfigError("admm_update_x: mu must be positive");
  if (Y.data.rows() != Y_alter.data.rows() || Y.data.cols() != Y_alter.data.cols())
    throw DimensionError("admm_update_x: Y vs Y_alter shape mismatch");
  if (D.atoms.rows() != Y.data.rows())
    throw DimensionError("admm_update_x: Y vs D row mismatch");
  const Eigen::Index K = D.atoms.cols();
  const Eigen::Index N = Y.data.cols();
  if (Q.rows() != K || Q.cols() != N)
    throw DimensionError("admm_update_x: Q vs (D, Y) shape mismatch");
  if (Z.rows() != K || Z.cols() != N || L.rows() != K || L.cols() != N)
    throw DimensionError("admm_update_x: Z or L vs (D, Y) shape mismatch");

  Matrix gram = (1.0 + p.alpha) * (D.atoms.transpose() * D.atoms);
  gram.diagonal().array() += mu / 2.0 + p.gamma;

  Matrix rhs = D.atoms.transpose() * (Y.data + p.alpha * Y_alter.data) + p.gamma * Q +
               (mu * Z - L) / 2.0;
  return gram.ldlt().solve(rhs);
}

CoefficientMatrix admm_update_z(const CoefficientMatrix& X, const CoefficientMatrix& L,
                                double mu, double beta) {
  if (!(mu > 0)) throw ConfigError("admm_update_z: mu must be positive");
  if (beta < 0) throw ConfigError("admm_update_z: negative beta");
  if (L.rows() != X.rows() || L.cols() != X.cols())
    throw DimensionError("admm_update_z: X vs L shape mismatch");
  return soft_threshold(X + L / mu, beta / mu);
}

EsdlModel sdl_l1_train(const LabeledMatrix& Y, const LabeledMatrix& Y_alter, int K,
                       const AdmmParams& p, const KsvdParams& init) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_labeled_matrix(Y, "sdl_l1_train: Y");
  validate_labeled_matrix(Y_alter, "sdl_l1_train: Y_alter");
  if (Y.data.rows() != Y_alter.data.rows() || Y.data.cols() != Y_alter.data.cols())
    throw DimensionError("sdl_l1_train: Y vs Y_alter shape mismatch");
  if (Y.labels != Y_alter.labels)
    throw DataError("sdl_l1_train: Y and Y_alter label sequences differ");
  validate_admm_params(p);

  EsdlModel model;
  model.params = p;
  SolverReport& report = model.report;

  Dictionary D = init_dictionary_per_class(Y, K, init);
  const IdealMatrix Q = build_ideal_matrix(Y.labels, D.atom_labels);
  const Eigen::Index N = Y.data.cols();

  CoefficientMatrix X = Matrix::Zero(K, N);
  CoefficientMatrix Z = Matrix::Zero(K, N);
  CoefficientMatrix L = Matrix::Zero(K, N);
  double mu = p.mu0;

  for (int it = 0; it < p.max_iters; ++it) {
    X = admm_update_x(D, Y, Y_alter, Q, Z, L, mu, p);
    Z = admm_update_z(X, L, mu, p.beta);
    Dictionary updated =
        update_dictionary(X, Y, Y_alter, p.alpha, D.atom_labels, &report.warnings);
    D = normalize_atoms(updated, &report.warnings, init.seed);
    L += mu * (X - Z);

    if (!X.allFinite() || !Z.allFinite() || !L.allFinite())
      throw NumericalError("sdl_l1_train: non-finite iterate at iteration " +
                           std::to_string(it + 1));

    double residual = (X - Z).cwiseAbs().maxCoeff();
    double f = sdl_l1_objective(Y, Y_alter, D, Z, Q, p);
    report.objective_trace.push_back(f);
    report.residual_trace.push_back(residual);
    report.penalty_trace.push_back(mu);
    report.iterations_run = it + 1;

    mu = std::min(p.rho * mu, p.mu_max);

    if (residual < p.primal_tol) {
      report.converged = true;
      break;
    }
  }

  model.dictionary = std::move(D);
  model.coefficients = std::move(Z);
  report.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return model;
}

} // namespace structdict

#include "structdict/esdl.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace structdict {

namespace {

void warn(std::vector<std::string>* sink, const std::string& msg) {
  if (sink) sink->push_back(msg);
}

struct SymmetricSolve {
  Eigen::LDLT<Matrix> ldlt;
  bool usable = false;

  explicit SymmetricSolve(const Matrix& G) : ldlt(G) {
    if (ldlt.info() != Eigen::Success) return;
    const Vector d = ldlt.vectorD();
    double dmin = d.minCoeff();
    double dmax = d.maxCoeff();
    usable = dmin > 0.0 && dmax / dmin <= 1e12;
  }
};

void check_pair_shapes(const LabeledMatrix& Y, const LabeledMatrix& Y_alter) {
  if (Y.data.rows() != Y_alter.data.rows() || Y.data.cols() != Y_alter.data.cols())
    throw DimensionError("Y vs Y_alter shape mismatch");
}

} // namespace

namespace {

// Ridge-regularized coefficient solve; `gram` holds (1+alpha) D'D on entry
// and S = Y + alpha*Y_alter. The training loop derives `gram` from cached
// products, the public entry point assembles it directly.
CoefficientMatrix solve_coefficients(Matrix gram, const Dictionary& D, const Matrix& S,
                                     const Matrix& gamma_Q, const EsdlParams& p,
                                     std::vector<std::string>* warnings) {
  const Eigen::Index K = D.atoms.cols();
  gram.diagonal().array() += p.beta + p.gamma;

  SymmetricSolve solve(gram);
  if (!solve.usable) {
    if (p.beta + p.gamma == 0.0)
      throw NumericalError(
          "update_coefficients: singular Gram matrix with beta = gamma = 0; "
          "set beta or gamma positive");
    double jitter = 1e-10 * gram.trace() / static_cast<double>(K);
    gram.diagonal().array() += jitter;
    solve = SymmetricSolve(gram);
    warn(warnings, "update_coefficients: ill-conditioned Gram matrix, added diagonal jitter");
    if (!solve.usable)
      throw NumericalError("update_coefficients: Gram matrix not positive definite");
  }

  Matrix rhs = D.atoms.transpose() * S + gamma_Q;
  return solve.ldlt.solve(rhs);
}

} // namespace

CoefficientMatrix update_coefficients(const Dictionary& D, const LabeledMatrix& Y,
                                      const LabeledMatrix& Y_alter, const IdealMatrix& Q,
                                      const EsdlParams& p,
                                      std::vector<std::string>* warnings) {
  check_pair_shapes(Y, Y_alter);
  if (D.atoms.rows() != Y.data.rows())
    throw DimensionError("update_coefficients: Y vs D row mismatch");
  if (Q.rows() != D.atoms.cols() || Q.cols() != Y.data.cols())
    throw DimensionError("update_coefficients: Q vs (D, Y) shape mismatch");
  if (p.alpha < 0 || p.beta < 0 || p.gamma < 0)
    throw ConfigError("update_coefficients: negative balancing parameter");

  return solve_coefficients((1.0 + p.alpha) * (D.atoms.transpose() * D.atoms), D,
                            Y.data + p.alpha * Y_alter.data, p.gamma * Q, p, warnings);
}

namespace {

// Core of the closed-form dictionary update over the combined sample matrix
// S = Y + alpha*Y_alter. When `fit` is non-null it also receives the
// reconstruction part of the objective,
//   ||Y - DX||_F^2 + alpha ||Y_alter - DX||_F^2
//     = data_energy - 2 <D, S X'> + (1+alpha) <D'D, X X'>,
// reusing B = S X' and X X' that the update just formed. The alternating
// solver records its trace through this identity instead of a full
// reconstruction pass.
Dictionary update_dictionary_core(const CoefficientMatrix& X, const Matrix& S,
                                  double alpha, const std::vector<int>& atom_labels,
                                  std::vector<std::string>* warnings,
                                  double data_energy = 0.0, double* fit = nullptr,
                                  Matrix* raw_gram = nullptr) {
  const Matrix XXt = X * X.transpose();
  const Matrix B = S * X.transpose(); // n x K
  const Matrix gram = (1.0 + alpha) * XXt;

  Dictionary out;
  out.atom_labels = atom_labels;

  SymmetricSolve solve(gram);
  if (solve.usable) {
    out.atoms = solve.ldlt.solve(B.transpose()).transpose();
  } else {
    // Minimum-norm solution through the pseudo-inverse of the Gram matrix.
    warn(warnings, "update_dictionary: rank-deficient X X', used pseudo-inverse");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
    out.atoms = cod.solve(B.transpose()).transpose();
  }
  if (fit || raw_gram) {
    Matrix g = out.atoms.transpose() * out.atoms;
    if (fit)
      *fit = data_energy - 2.0 * out.atoms.cwiseProduct(B).sum() +
             (1.0 + alpha) * g.cwiseProduct(XXt).sum();
    if (raw_gram) *raw_gram = std::move(g);
  }
  return out;
}

} // namespace

Dictionary update_dictionary(const CoefficientMatrix& X, const LabeledMatrix& Y,
                             const LabeledMatrix& Y_alter, double alpha,
                             const std::vector<int>& atom_labels,
                             std::vector<std::string>* warnings) {
  check_pair_shapes(Y, Y_alter);
  if (X.cols() != Y.data.cols())
    throw DimensionError("update_dictionary: Y vs X column mismatch");
  if (static_cast<Eigen::Index>(atom_labels.size()) != X.rows())
    throw DimensionError("update_dictionary: atom label count vs X row mismatch");
  if (alpha < 0) throw ConfigError("update_dictionary: negative alpha");

  return update_dictionary_core(X, Y.data + alpha * Y_alter.data, alpha, atom_labels,
                                warnings);
}

Dictionary normalize_atoms(const Dictionary& D, std::vector<std::string>* warnings,
                           std::uint64_t seed) {
  Dictionary out = D;
  for (Eigen::Index k = 0; k < out.atoms.cols(); ++k) {
    double nrm = out.atoms.col(k).norm();
    if (nrm == 0.0) {
      std::mt19937_64 rng(seed ^ (0xd1b54a32d192ed03ULL + static_cast<std::uint64_t>(k)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Vector v(out.atoms.rows());
      do {
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
        nrm = v.norm();
      } while (nrm == 0.0);
      out.atoms.col(k) = v / nrm;
      warn(warnings, "normalize_atoms: zero atom " + std::to_string(k) +
                         " replaced by a random unit vector");
    } else {
      out.atoms.col(k) /= nrm;
    }
  }
  return out;
}

EsdlModel esdl_train(const LabeledMatrix& Y, const LabeledMatrix& Y_alter, int K,
                     const EsdlParams& p, const KsvdParams& init) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_labeled_matrix(Y, "esdl_train: Y");
  validate_labeled_matrix(Y_alter, "esdl_train: Y_alter");
  check_pair_shapes(Y, Y_alter);
  if (Y.labels != Y_alter.labels)
    throw DataError("esdl_train: Y and Y_alter label sequences differ");
  validate_esdl_params(p);

  EsdlModel model;
  model.params = p;
  SolverReport& report = model.report;

  Dictionary D = init_dictionary_per_class(Y, K, init);
  const IdealMatrix Q = build_ideal_matrix(Y.labels, D.atom_labels);

  const Matrix S = Y.data + p.alpha * Y_alter.data;
  const Matrix gamma_Q = p.gamma * Q;
  const double data_energy =
      Y.data.squaredNorm() + p.alpha * Y_alter.data.squaredNorm();

  // The dictionary update computes D_raw' D_raw for the objective identity;
  // after column normalization D = D_raw diag(1/norms), so the next
  // iteration's Gram is a diagonal rescale of that cached product. A
  // replaced zero atom invalidates the cache.
  Matrix raw_gram;
  Vector inv_norms;
  bool gram_cached = false;

  CoefficientMatrix X;
  double prev = 0.0;
  for (int it = 0; it < p.max_iters; ++it) {
    Matrix gram;
    if (gram_cached) {
      gram = (1.0 + p.alpha) *
             (inv_norms.asDiagonal() * raw_gram * inv_norms.asDiagonal());
    } else {
      gram = (1.0 + p.alpha) * (D.atoms.transpose() * D.atoms);
    }
    X = solve_coefficients(std::move(gram), D, S, gamma_Q, p, &report.warnings);

    double fit = 0.0;
    Dictionary updated =
        update_dictionary_core(X, S, p.alpha, D.atom_labels, &report.warnings,
                               data_energy, &fit, &raw_gram);

    double f = fit + p.beta * X.squaredNorm() + p.gamma * (X - Q).squaredNorm();
    if (!std::isfinite(f))
      throw NumericalError("esdl_train: non-finite objective at iteration " +
                           std::to_string(it + 1));
    report.objective_trace.push_back(f);
    report.iterations_run = it + 1;

    if (p.normalize_each_iter) {
      Vector norms = updated.atoms.colwise().norm().transpose();
      D = normalize_atoms(updated, &report.warnings, init.seed);
      if ((norms.array() > 0.0).all()) {
        inv_norms = norms.cwiseInverse();
        gram_cached = true;
      } else {
        gram_cached = false;
      }
    } else {
      D = std::move(updated);
      inv_norms = Vector::Ones(K);
      gram_cached = true;
    }

    if (it > 0 && std::abs(f - prev) / std::max(prev, 1e-12) < p.tol) {
      report.converged = true;
      break;
    }
    prev = f;
  }

  if (!p.normalize_each_iter) D = normalize_atoms(D, &report.warnings, init.seed);

  model.dictionary = std::move(D);
  model.coefficients = std::move(X);
  report.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return model;
}

} // namespace structdict

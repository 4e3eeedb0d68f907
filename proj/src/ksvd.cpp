#include "structdict/ksvd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "structdict/rng.hpp"

namespace structdict {

namespace {

// Seeded selection of `count` distinct column indices.
std::vector<Eigen::Index> pick_distinct_columns(Eigen::Index total, int count,
                                                std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<size_t>(total));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<size_t>(count));
  return idx;
}

Matrix init_atoms_from_columns(const Matrix& Y, int K, std::uint64_t seed) {
  auto cols = pick_distinct_columns(Y.cols(), K, seed);
  Matrix D(Y.rows(), K);
  std::mt19937_64 rng(seed ^ 0x5bf0a8b1u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < K; ++k) {
    Vector col = Y.col(cols[static_cast<size_t>(k)]);
    double nrm = col.norm();
    while (nrm == 0.0) {
      for (Eigen::Index i = 0; i < col.size(); ++i) col(i) = gauss(rng);
      nrm = col.norm();
    }
    D.col(k) = col / nrm;
  }
  return D;
}

// Index of the column worst represented by the current model.
Eigen::Index worst_represented_column(const Matrix& Y, const Matrix& D,
                                      const CoefficientMatrix& X) {
  Eigen::Index best = 0;
  double worst = -1.0;
  for (Eigen::Index i = 0; i < Y.cols(); ++i) {
    double e = (Y.col(i) - D * X.col(i)).squaredNorm();
    if (e > worst) {
      worst = e;
      best = i;
    }
  }
  return best;
}

} // namespace

namespace detail {

bool ksvd_update_atom(const Matrix& Y, Matrix& D, CoefficientMatrix& X,
                      Eigen::Index k, std::uint64_t seed) {
  std::vector<Eigen::Index> users;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    if (X(k, i) != 0.0) users.push_back(i);

  if (users.empty()) {
    Eigen::Index col = worst_represented_column(Y, D, X);
    Vector atom = Y.col(col);
    double nrm = atom.norm();
    if (nrm == 0.0) {
      std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(k)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (Eigen::Index i = 0; i < atom.size(); ++i) atom(i) = gauss(rng);
      nrm = atom.norm();
    }
    D.col(k) = atom / nrm;
    return false;
  }

  // Residual restricted to the users, excluding atom k's own contribution.
  Matrix Er(Y.rows(), static_cast<Eigen::Index>(users.size()));
  for (size_t j = 0; j < users.size(); ++j) {
    Eigen::Index i = users[j];
    Er.col(static_cast<Eigen::Index>(j)) = Y.col(i) - D * X.col(i) + D.col(k) * X(k, i);
  }

  // Leading singular triple through the small m x m residual Gram; the
  // residual is tall (n >= m), so this is much cheaper than a full SVD.
  const auto m = static_cast<Eigen::Index>(users.size());
  Vector u, v;
  double sv = 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Er.transpose() * Er);
  if (eig.info() == Eigen::Success && eig.eigenvalues()(m - 1) > 0.0) {
    v = eig.eigenvectors().col(m - 1);
    Vector w = Er * v;
    sv = w.norm();
    u = w / sv;
  }
  if (!(sv > 0.0)) { // degenerate residual, take the full decomposition
    Eigen::JacobiSVD<Matrix> svd(Er, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU().col(0);
    v = svd.matrixV().col(0);
    sv = svd.singularValues()(0);
  }

  // Deterministic sign: largest-magnitude entry of the atom positive.
  Eigen::Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  double sign = u(imax) < 0.0 ? -1.0 : 1.0;

  D.col(k) = sign * u;
  for (size_t j = 0; j < users.size(); ++j)
    X(k, users[j]) = sign * sv * v(static_cast<Eigen::Index>(j));
  return true;
}

} // namespace detail

KsvdResult ksvd_train(const Matrix& Y, const KsvdParams& p) {
  const Eigen::Index N = Y.cols();
  if (p.atoms < 1) throw ConfigError("ksvd_train: atoms must be positive");
  if (p.atoms > N)
    throw ConfigError("ksvd_train: atom count " + std::to_string(p.atoms) +
                      " exceeds sample count " + std::to_string(N));
  if (p.iterations < 1) throw ConfigError("ksvd_train: iterations must be positive");
  if (p.sparsity < 1 || p.sparsity > p.atoms)
    throw ConfigError("ksvd_train: sparsity must be in 1..atoms");
  if (!Y.allFinite()) throw DataError("ksvd_train: non-finite data");

  Matrix D;
  if (p.initial_atoms) {
    if (p.initial_atoms->rows() != Y.rows() || p.initial_atoms->cols() != p.atoms)
      throw DimensionError("ksvd_train: initial_atoms vs (Y, atoms) shape mismatch");
    D = *p.initial_atoms;
    for (Eigen::Index k = 0; k < D.cols(); ++k) {
      double nrm = D.col(k).norm();
      if (nrm == 0.0) throw DataError("ksvd_train: zero column in initial_atoms");
      D.col(k) /= nrm;
    }
  } else {
    D = init_atoms_from_columns(Y, p.atoms, p.seed);
  }

  Dictionary coder{D, std::vector<int>(static_cast<size_t>(p.atoms), 0)};
  OmpParams omp{p.sparsity, 1e-10};

  KsvdResult result;
  CoefficientMatrix X;
  for (int it = 0; it < p.iterations; ++it) {
    coder.atoms = D;
    X = omp_code_batch(coder, Y, omp);
    for (Eigen::Index k = 0; k < D.cols(); ++k)
      detail::ksvd_update_atom(Y, D, X, k, p.seed);
    result.objective_trace.push_back((Y - D * X).squaredNorm());
  }

  result.atoms = std::move(D);
  result.coefficients = std::move(X);
  return result;
}

Dictionary init_dictionary_per_class(const LabeledMatrix& Y, int K,
                                     const KsvdParams& p) {
  validate_labeled_matrix(Y, "init_dictionary_per_class: Y");
  const int C = Y.class_count;
  if (K < 1) throw ConfigError("init_dictionary_per_class: K must be positive");
  if (K % C != 0)
    throw ConfigError("init_dictionary_per_class: K=" + std::to_string(K) +
                      " not divisible by class count " + std::to_string(C) +
                      "; pass explicit per-class atom counts via a divisible K");
  const int per_class = K / C;

  Dictionary dict;
  dict.atoms.resize(Y.data.rows(), K);
  dict.atom_labels.resize(static_cast<size_t>(K));

  for (int c = 0; c < C; ++c) {
    std::vector<Eigen::Index> cols;
    for (size_t i = 0; i < Y.labels.size(); ++i)
      if (Y.labels[i] == c) cols.push_back(static_cast<Eigen::Index>(i));
    if (static_cast<int>(cols.size()) < per_class)
      throw ConfigError("init_dictionary_per_class: class " + std::to_string(c) +
                        " has " + std::to_string(cols.size()) + " samples, fewer than " +
                        std::to_string(per_class) + " atoms");
    Matrix Yc(Y.data.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
      Yc.col(static_cast<Eigen::Index>(j)) = Y.data.col(cols[j]);

    KsvdParams pc = p;
    pc.atoms = per_class;
    pc.sparsity = std::min(p.sparsity, per_class);
    pc.initial_atoms.reset();
    pc.seed = mix_seed(p.seed, static_cast<std::uint64_t>(c));

    KsvdResult sub = ksvd_train(Yc, pc);
    dict.atoms.middleCols(static_cast<Eigen::Index>(c) * per_class, per_class) = sub.atoms;
    for (int k = 0; k < per_class; ++k)
      dict.atom_labels[static_cast<size_t>(c * per_class + k)] = c;
  }
  return dict;
}

} // namespace structdict

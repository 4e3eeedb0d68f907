#include "structdict/types.hpp"

#include <cmath>
#include <set>

namespace structdict {

EsdlParams face_preset() {
  EsdlParams p;
  p.alpha = 0.01;
  p.beta = 1e-3;
  p.gamma = 1e-3;
  return p;
}

EsdlParams scene_preset() {
  EsdlParams p;
  p.alpha = 0.1;
  p.beta = 1e-4;
  p.gamma = 1e-4;
  return p;
}

void validate_labeled_matrix(const LabeledMatrix& m, const std::string& name,
                             bool require_all_classes) {
  if (static_cast<Eigen::Index>(m.labels.size()) != m.data.cols())
    throw DataError(name + ": label count " + std::to_string(m.labels.size()) +
                    " does not match sample count " + std::to_string(m.data.cols()));
  if (m.class_count <= 0)
    throw DataError(name + ": class_count must be positive");
  if (!m.data.allFinite())
    throw DataError(name + ": non-finite entries");
  std::vector<char> seen(static_cast<size_t>(m.class_count), 0);
  for (int lab : m.labels) {
    if (lab < 0 || lab >= m.class_count)
      throw DataError(name + ": label " + std::to_string(lab) +
                      " outside 0.." + std::to_string(m.class_count - 1));
    seen[static_cast<size_t>(lab)] = 1;
  }
  if (require_all_classes) {
    for (int c = 0; c < m.class_count; ++c)
      if (!seen[static_cast<size_t>(c)])
        throw DataError(name + ": class " + std::to_string(c) + " has no samples");
  }
}

void validate_dictionary(const Dictionary& d, const std::string& name) {
  if (static_cast<Eigen::Index>(d.atom_labels.size()) != d.atoms.cols())
    throw DataError(name + ": atom label count does not match atom count");
  if (!d.atoms.allFinite())
    throw DataError(name + ": non-finite atoms");
  for (Eigen::Index k = 0; k < d.atoms.cols(); ++k) {
    double nrm = d.atoms.col(k).norm();
    if (std::abs(nrm - 1.0) > 1e-10)
      throw DataError(name + ": atom " + std::to_string(k) + " has norm " +
                      std::to_string(nrm) + ", expected 1");
  }
  for (size_t k = 1; k < d.atom_labels.size(); ++k) {
    if (d.atom_labels[k] < d.atom_labels[k - 1])
      throw DataError(name + ": atoms not grouped contiguously by class at index " +
                      std::to_string(k));
  }
  for (int lab : d.atom_labels)
    if (lab < 0) throw DataError(name + ": negative atom label");
}

void validate_esdl_params(const EsdlParams& p) {
  if (p.alpha < 0 || p.beta < 0 || p.gamma < 0)
    throw ConfigError("alpha, beta, gamma must be nonnegative");
  if (p.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(p.tol > 0)) throw ConfigError("tol must be positive");
}

LabelMatrix build_label_matrix(const std::vector<int>& labels, int class_count) {
  if (labels.empty()) throw DimensionError("build_label_matrix: empty label list");
  LabelMatrix H = Matrix::Zero(class_count, static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= class_count)
      throw DataError("build_label_matrix: label " + std::to_string(labels[i]) +
                      " outside 0.." + std::to_string(class_count - 1));
    H(labels[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return H;
}

IdealMatrix build_ideal_matrix(const std::vector<int>& sample_labels,
                               const std::vector<int>& atom_labels) {
  if (sample_labels.empty() || atom_labels.empty())
    throw DimensionError("build_ideal_matrix: empty label list");
  for (int lab : sample_labels)
    if (lab < 0) throw DataError("build_ideal_matrix: negative sample label");
  for (int lab : atom_labels)
    if (lab < 0) throw DataError("build_ideal_matrix: negative atom label");
  const Eigen::Index K = static_cast<Eigen::Index>(atom_labels.size());
  const Eigen::Index N = static_cast<Eigen::Index>(sample_labels.size());
  IdealMatrix Q = Matrix::Zero(K, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index k = 0; k < K; ++k)
      if (atom_labels[static_cast<size_t>(k)] == sample_labels[static_cast<size_t>(i)])
        Q(k, i) = 1.0;
  return Q;
}

namespace {

void check_conformance(const LabeledMatrix& Y, const LabeledMatrix& Y_alter,
                       const Dictionary& D, const CoefficientMatrix& X,
                       const IdealMatrix& Q) {
  if (Y.data.rows() != Y_alter.data.rows() || Y.data.cols() != Y_alter.data.cols())
    throw DimensionError("objective: Y vs Y_alter shape mismatch");
  if (D.atoms.rows() != Y.data.rows())
    throw DimensionError("objective: Y vs D row mismatch");
  if (X.rows() != D.atoms.cols())
    throw DimensionError("objective: D vs X (atom count vs coefficient rows)");
  if (X.cols() != Y.data.cols())
    throw DimensionError("objective: Y vs X column mismatch");
  if (Q.rows() != X.rows() || Q.cols() != X.cols())
    throw DimensionError("objective: X vs Q shape mismatch");
}

} // namespace

double esdl_objective(const LabeledMatrix& Y, const LabeledMatrix& Y_alter,
                      const Dictionary& D, const CoefficientMatrix& X,
                      const IdealMatrix& Q, const EsdlParams& p) {
  check_conformance(Y, Y_alter, D, X, Q);
  const Matrix R = D.atoms * X;
  return (Y.data - R).squaredNorm() + p.alpha * (Y_alter.data - R).squaredNorm() +
         p.beta * X.squaredNorm() + p.gamma * (X - Q).squaredNorm();
}

double sdl_l1_objective(const LabeledMatrix& Y, const LabeledMatrix& Y_alter,
                        const Dictionary& D, const CoefficientMatrix& X,
                        const IdealMatrix& Q, const EsdlParams& p) {
  check_conformance(Y, Y_alter, D, X, Q);
  const Matrix R = D.atoms * X;
  return (Y.data - R).squaredNorm() + p.alpha * (Y_alter.data - R).squaredNorm() +
         p.beta * X.cwiseAbs().sum() + p.gamma * (X - Q).squaredNorm();
}

} // namespace structdict

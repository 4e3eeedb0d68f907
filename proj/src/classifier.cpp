#include "structdict/classifier.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Cholesky>

namespace structdict {

LinearClassifier train_classifier(const CoefficientMatrix& X, const LabelMatrix& H,
                                  double lambda) {
  if (H.cols() != X.cols())
    throw DimensionError("train_classifier: X vs H column mismatch");
  if (lambda < 0) throw ConfigError("train_classifier: negative lambda");
  if (!X.allFinite()) throw NumericalError("train_classifier: non-finite coefficients");

  Matrix gram = X * X.transpose();
  gram.diagonal().array() += lambda;

  Eigen::LDLT<Matrix> ldlt(gram);
  const Vector d = ldlt.vectorD();
  bool singular = ldlt.info() != Eigen::Success || d.minCoeff() <= 0.0 ||
                  d.maxCoeff() / d.minCoeff() > 1e12;
  if (singular && lambda == 0.0)
    throw NumericalError("train_classifier: singular X X' with lambda = 0; "
                         "set lambda positive");
  if (singular)
    throw NumericalError("train_classifier: X X' + lambda I not positive definite");

  LinearClassifier model;
  model.lambda = lambda;
  model.weights = ldlt.solve(X * H.transpose()).transpose();
  return model;
}

int predict(const LinearClassifier& model, const Vector& code) {
  if (code.size() != model.weights.cols())
    throw DimensionError("predict: code length vs classifier width mismatch");
  if (!code.allFinite()) throw NumericalError("predict: non-finite code");
  Vector scores = model.weights * code;
  // First maximum wins, so exact ties go to the lowest class index.
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c)
    if (scores(c) > scores(best)) best = c;
  return static_cast<int>(best);
}

CoefficientMatrix code_samples(const Dictionary& D, const Matrix& Y,
                               const CodingSpec& coding,
                               std::vector<std::string>* warnings) {
  if (coding.kind == CodingSpec::Kind::ridge) {
    if (!(coding.ridge > 0)) throw ConfigError("code_samples: ridge must be positive");
    Matrix gram = D.atoms.transpose() * D.atoms;
    gram.diagonal().array() += coding.ridge;
    return gram.ldlt().solve(D.atoms.transpose() * Y);
  }
  OmpParams omp = coding.omp;
  if (omp.sparsity > D.atoms.cols()) {
    omp.sparsity = static_cast<int>(D.atoms.cols());
    if (warnings)
      warnings->push_back("code_samples: OMP sparsity clamped to atom count " +
                          std::to_string(omp.sparsity));
  }
  return omp_code_batch(D, Y, omp);
}

EvaluationResult evaluate_classifier(const LinearClassifier& model, const Dictionary& D,
                                     const LabeledMatrix& Y_test, const CodingSpec& coding,
                                     std::vector<std::string>* warnings) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_labeled_matrix(Y_test, "evaluate: Y_test", /*require_all_classes=*/false);
  if (Y_test.count() == 0) throw DataError("evaluate: empty test set");
  const int C = static_cast<int>(model.weights.rows());
  for (int lab : Y_test.labels)
    if (lab >= C)
      throw DataError("evaluate: unknown test label id " + std::to_string(lab) +
                      " for a " + std::to_string(C) + "-class model");
  if (D.atoms.cols() != model.weights.cols())
    throw DimensionError("evaluate: D vs classifier width mismatch");

  EvaluationResult result;
  result.confusion = Eigen::MatrixXi::Zero(C, C);

  CoefficientMatrix codes = code_samples(D, Y_test.data, coding, warnings);
  long correct = 0;
  for (Eigen::Index i = 0; i < codes.cols(); ++i) {
    int predicted = predict(model, codes.col(i));
    int truth = Y_test.labels[static_cast<size_t>(i)];
    result.confusion(truth, predicted) += 1;
    if (predicted == truth) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(codes.cols());
  result.test_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

} // namespace structdict

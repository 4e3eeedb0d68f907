#ifndef STRUCTDICT_CLASSIFIER_HPP
#define STRUCTDICT_CLASSIFIER_HPP

// Ridge-regression linear classifier trained on learned coefficients, plus
// the argmax prediction rule and batch evaluation with confusion counts.

#include "structdict/sparse_coding.hpp"
#include "structdict/types.hpp"

namespace structdict {

struct LinearClassifier {
  Matrix weights; // C x K
  double lambda = 1e-3;
};

// How test samples are coded over the dictionary before prediction: greedy
// OMP (the default) or ridge codes x = (D'D + ridge I)^-1 D'y.
struct CodingSpec {
  enum class Kind { omp, ridge };
  Kind kind = Kind::omp;
  OmpParams omp{30, 1e-6};
  double ridge = 1e-3;
};

struct EvaluationResult {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion; // rows: true class, cols: predicted class
  double test_seconds = 0.0;
};

// W = H X' (X X' + lambda I)^-1, the exact ridge minimizer. With lambda = 0
// a singular X X' is an error.
LinearClassifier train_classifier(const CoefficientMatrix& X, const LabelMatrix& H,
                                  double lambda);

// argmax of W x, ties broken toward the lowest class index.
int predict(const LinearClassifier& model, const Vector& code);

// Codes every test column per the coding spec, predicts, and accumulates
// confusion counts; accuracy is the diagonal fraction. The OMP sparsity is
// clamped to the atom count with a warning when it exceeds it.
EvaluationResult evaluate_classifier(const LinearClassifier& model, const Dictionary& D,
                                     const LabeledMatrix& Y_test, const CodingSpec& coding,
                                     std::vector<std::string>* warnings = nullptr);

// Test codes alone (used by evaluate_classifier; exposed for reuse).
CoefficientMatrix code_samples(const Dictionary& D, const Matrix& Y,
                               const CodingSpec& coding,
                               std::vector<std::string>* warnings = nullptr);

} // namespace structdict

#endif

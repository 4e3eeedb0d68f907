#ifndef STRUCTDICT_TYPES_HPP
#define STRUCTDICT_TYPES_HPP

// Shared numerical data model: label-annotated sample matrices, dictionaries
// with per-atom class labels, and the objective evaluators used by the
// solvers for convergence checks and testing.
//
// All types are plain value objects. Invariant checks live in the
// validate_* functions and are invoked at module entry points, so
// intermediate states (e.g. a dictionary with unnormalized atoms between
// update and renormalization) remain representable.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "structdict/errors.hpp"

namespace structdict {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// K x N representation codes of N samples over a K-atom dictionary.
// Also used for the ADMM auxiliary variable Z and the multiplier L.
using CoefficientMatrix = Matrix;

// K x N binary target, 1 exactly where the sample's class matches the
// atom's class; block-diagonal under class-contiguous ordering.
using IdealMatrix = Matrix;

// C x N one-hot label matrix, one 1 per column.
using LabelMatrix = Matrix;

// Dense sample matrix, one sample per column, with integer class labels
// remapped to 0..class_count-1.
struct LabeledMatrix {
  Matrix data;              // n x N
  std::vector<int> labels;  // size N, values in 0..class_count-1
  int class_count = 0;

  Eigen::Index dim() const { return data.rows(); }
  Eigen::Index count() const { return data.cols(); }
};

// Atom matrix with per-atom class labels. Columns are unit-norm and grouped
// contiguously by class once normalized/validated.
struct Dictionary {
  Matrix atoms;                 // n x K
  std::vector<int> atom_labels; // size K

  Eigen::Index dim() const { return atoms.rows(); }
  Eigen::Index atom_count() const { return atoms.cols(); }
};

// Balancing parameters and stopping rule for the alternating solver.
struct EsdlParams {
  double alpha = 0.01;
  double beta = 1e-3;
  double gamma = 1e-3;
  int max_iters = 50;
  double tol = 1e-6;  // relative objective change
  // Renormalize atoms after every dictionary update (true) or only once
  // at the end of training (false).
  bool normalize_each_iter = true;
};

// Parameter presets reported for the two data regimes.
EsdlParams face_preset();
EsdlParams scene_preset();

struct SolverReport {
  std::vector<double> objective_trace;  // one value per iteration
  int iterations_run = 0;
  bool converged = false;
  double train_seconds = 0.0;
  std::vector<std::string> warnings;
  // ADMM-only traces; empty for the plain alternating solver.
  std::vector<double> residual_trace;  // max-abs(X - Z) per iteration
  std::vector<double> penalty_trace;   // mu per iteration
};

// ---- invariant validation -------------------------------------------------

// Throws DataError on violated invariants. When require_all_classes is set,
// every id in 0..class_count-1 must occur (training-side requirement);
// evaluation sets may legitimately miss classes.
void validate_labeled_matrix(const LabeledMatrix& m, const std::string& name,
                             bool require_all_classes = true);

// Unit-norm columns (|norm - 1| <= 1e-10), label count, class contiguity.
void validate_dictionary(const Dictionary& d, const std::string& name);

void validate_esdl_params(const EsdlParams& p);

// ---- constructors ----------------------------------------------------------

// One-hot C x N matrix from per-column class ids.
LabelMatrix build_label_matrix(const std::vector<int>& labels, int class_count);

// K x N binary matrix with entry (k, i) = 1 iff atom_labels[k] == sample_labels[i].
IdealMatrix build_ideal_matrix(const std::vector<int>& sample_labels,
                               const std::vector<int>& atom_labels);

// ---- objective evaluators ---------------------------------------------------

// ||Y - DX||_F^2 + alpha ||Y_alter - DX||_F^2 + beta ||X||_F^2 + gamma ||X - Q||_F^2
double esdl_objective(const LabeledMatrix& Y, const LabeledMatrix& Y_alter,
                      const Dictionary& D, const CoefficientMatrix& X,
                      const IdealMatrix& Q, const EsdlParams& p);

// Same, with the entrywise absolute sum beta ||X||_1 in place of the ridge term.
double sdl_l1_objective(const LabeledMatrix& Y, const LabeledMatrix& Y_alter,
                        const Dictionary& D, const CoefficientMatrix& X,
                        const IdealMatrix& Q, const EsdlParams& p);

} // namespace structdict

#endif

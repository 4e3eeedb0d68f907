#ifndef STRUCTDICT_ESDL_HPP
#define STRUCTDICT_ESDL_HPP

// Alternating minimization with closed-form coefficient and dictionary
// updates, an ideal block-diagonal regularizer pulling same-class codes
// together, and an alternative-training-sample reconstruction term.

#include "structdict/ksvd.hpp"
#include "structdict/types.hpp"

namespace structdict {

struct EsdlModel {
  Dictionary dictionary;
  CoefficientMatrix coefficients;
  EsdlParams params;
  SolverReport report;
};

// X = ((1+alpha) D'D + (beta+gamma) I)^-1 (D'Y + alpha D'Y_alter + gamma Q).
// The K x K system is factored once and reused across all N right-hand
// sides. With beta+gamma = 0 a singular Gram matrix is an error; otherwise
// an ill-conditioned system gets a small diagonal jitter and a warning.
CoefficientMatrix update_coefficients(const Dictionary& D, const LabeledMatrix& Y,
                                      const LabeledMatrix& Y_alter, const IdealMatrix& Q,
                                      const EsdlParams& p,
                                      std::vector<std::string>* warnings = nullptr);

// D = (Y X' + alpha Y_alter X') ((1+alpha) X X')^-1 with the given labels
// carried over. Atoms are NOT renormalized here. A rank-deficient X X' is
// solved via pseudo-inverse with a warning.
Dictionary update_dictionary(const CoefficientMatrix& X, const LabeledMatrix& Y,
                             const LabeledMatrix& Y_alter, double alpha,
                             const std::vector<int>& atom_labels,
                             std::vector<std::string>* warnings = nullptr);

// Scales every column to unit norm, labels unchanged. A zero column is
// replaced by a seeded random unit vector with a warning.
Dictionary normalize_atoms(const Dictionary& D,
                           std::vector<std::string>* warnings = nullptr,
                           std::uint64_t seed = 0);

// Full training loop: per-class K-SVD initialization, ideal-matrix
// construction, then alternate coefficient and dictionary updates until the
// relative objective change drops below p.tol or p.max_iters is reached.
// The objective is recorded after each dictionary update and before
// renormalization, so the trace is non-increasing when
// p.normalize_each_iter is false. Training time includes initialization.
EsdlModel esdl_train(const LabeledMatrix& Y, const LabeledMatrix& Y_alter, int K,
                     const EsdlParams& p, const KsvdParams& init);

} // namespace structdict

#endif

#ifndef STRUCTDICT_KSVD_HPP
#define STRUCTDICT_KSVD_HPP

// K-SVD dictionary learner: alternates OMP sparse coding with sequential
// rank-1 atom updates. Used standalone as the reconstruction baseline and
// per class as the initializer for the structured solvers.

#include <optional>

#include "structdict/sparse_coding.hpp"
#include "structdict/types.hpp"

namespace structdict {

struct KsvdParams {
  int atoms = 0;          // dictionary size K
  int sparsity = 5;       // OMP sparsity level for the coding step
  int iterations = 10;
  std::uint64_t seed = 0; // seeds atom initialization
  // Optional explicit starting dictionary (n x atoms, unit-norm columns).
  // Empty: atoms are initialized from seeded distinct data columns.
  std::optional<Matrix> initial_atoms;
};

struct KsvdResult {
  Matrix atoms;                 // n x K, unit-norm columns
  CoefficientMatrix coefficients;
  std::vector<double> objective_trace; // ||Y - DX||_F^2 after each iteration
};

// Train on raw (unlabeled) data, one sample per column. Each iteration codes
// every column by OMP at the given sparsity, then updates atoms one at a
// time: restrict to the columns using the atom, form the residual excluding
// the atom's own contribution, and replace atom and coefficient row with the
// leading singular pair. Unused atoms are replaced by the worst-represented
// data column. The leading singular vector's sign is fixed so the atom's
// largest-magnitude entry is positive.
KsvdResult ksvd_train(const Matrix& Y, const KsvdParams& p);

// Runs ksvd_train on each class's columns with K/C atoms each and
// concatenates the sub-dictionaries in class order, so atom labels come out
// sorted and class-contiguous. K must be divisible by the class count and
// each class must have at least K/C samples. The OMP sparsity is clamped to
// the per-class atom count; p.atoms is ignored (K governs).
Dictionary init_dictionary_per_class(const LabeledMatrix& Y, int K,
                                     const KsvdParams& p);

namespace detail {

// One atom update, exposed for oracle comparison in tests. Updates D.col(k)
// and row k of X in place; returns false when the atom is unused and was
// replaced by the worst-represented column instead.
bool ksvd_update_atom(const Matrix& Y, Matrix& D, CoefficientMatrix& X,
                      Eigen::Index k, std::uint64_t seed);

} // namespace detail

} // namespace structdict

#endif

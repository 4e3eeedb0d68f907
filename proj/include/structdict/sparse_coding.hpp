#ifndef STRUCTDICT_SPARSE_CODING_HPP
#define STRUCTDICT_SPARSE_CODING_HPP

// Greedy and proximal sparse-coding primitives: orthogonal matching pursuit
// for test-time coding and the soft-threshold operator used by the ADMM
// solver. All functions are pure.

#include "structdict/types.hpp"

namespace structdict {

struct OmpParams {
  int sparsity = 30;          // maximum number of nonzeros per code
  double residual_tol = 1e-6; // stop early once the residual norm drops below
};

// Greedy sparse code of y over a unit-norm dictionary. At each step the atom
// with the largest absolute correlation with the residual is selected and
// the coefficients on the whole selected support are refit by least squares
// (minimum-norm solution if the selected atoms are rank-deficient). Stops at
// p.sparsity atoms or residual norm <= p.residual_tol. A zero input yields a
// zero code.
Vector omp_code(const Dictionary& D, const Vector& y, const OmpParams& p);

// Column-wise application of omp_code; column i of the result equals
// omp_code on column i exactly.
CoefficientMatrix omp_code_batch(const Dictionary& D, const LabeledMatrix& Y,
                                 const OmpParams& p);

// Same, on a raw matrix without labels.
CoefficientMatrix omp_code_batch(const Dictionary& D, const Matrix& Y,
                                 const OmpParams& p);

// Elementwise max(m - tau, 0) + min(m + tau, 0); the proximal operator of
// tau * |.|. Entries inside the dead zone become exact zeros.
Matrix soft_threshold(const Matrix& M, double tau);

} // namespace structdict

#endif

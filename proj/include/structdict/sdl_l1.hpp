#ifndef STRUCTDICT_SDL_L1_HPP
#define STRUCTDICT_SDL_L1_HPP

// ADMM solver for the l1-constrained variant: the coefficient matrix splits
// into X (smooth subproblems) and a sparse auxiliary Z coupled through a
// multiplier L and a growing penalty mu.

#include "structdict/esdl.hpp"

namespace structdict {

struct AdmmParams : EsdlParams {
  double mu0 = 0.01;
  double mu_max = 1e8;
  double rho = 1.1;         // penalty growth factor, > 1
  double primal_tol = 1e-6; // stop once max-abs(X - Z) falls below

  AdmmParams() { max_iters = 200; }
};

// X = ((1+alpha) D'D + (mu/2 + gamma) I)^-1
//     (D'Y + alpha D'Y_alter + gamma Q + (mu Z - L)/2).
// Never singular for mu > 0. The Gram factorization depends on mu and is
// recomputed on every call.
CoefficientMatrix admm_update_x(const Dictionary& D, const LabeledMatrix& Y,
                                const LabeledMatrix& Y_alter, const IdealMatrix& Q,
                                const CoefficientMatrix& Z, const CoefficientMatrix& L,
                                double mu, const AdmmParams& p);

// Z = soft_threshold(X + L/mu, beta/mu).
CoefficientMatrix admm_update_z(const CoefficientMatrix& X, const CoefficientMatrix& L,
                                double mu, double beta);

// Full training loop: per-class K-SVD initialization, Z = L = 0, mu = mu0;
// each iteration updates X, Z, the dictionary (renormalized), then
// L += mu (X - Z) and mu = min(rho mu, mu_max), until the primal residual
// max-abs(X - Z) drops below primal_tol or max_iters is reached. The
// returned coefficients are the sparse iterate Z; the report carries the
// objective evaluated at Z plus the residual and penalty traces.
EsdlModel sdl_l1_train(const LabeledMatrix& Y, const LabeledMatrix& Y_alter, int K,
                       const AdmmParams& p, const KsvdParams& init);

} // namespace structdict

#endif

#include <doctest.h>

#include "oracles.hpp"
#include "structdict/benchmark.hpp"
#include "structdict/sdl_l1.hpp"

using namespace structdict;

namespace {

LabeledMatrix wrap(const Matrix& data, std::vector<int> labels, int classes) {
  return LabeledMatrix{data, std::move(labels), classes};
}

Matrix eq16_gradient(const Matrix& D, const Matrix& Y, const Matrix& Ya, const Matrix& Q,
                     const Matrix& Z, const Matrix& L, const Matrix& X, double alpha,
                     double gamma, double mu) {
  return 2.0 * D.transpose() * (D * X - Y) + 2.0 * alpha * D.transpose() * (D * X - Ya) +
         2.0 * gamma * (X - Q) + mu * (X - Z) + L;
}

} // namespace

TEST_SUITE("sdl_l1") {

TEST_CASE("huge penalty pins X to Z") {
  std::mt19937_64 rng(61);
  const int n = 4;
  Dictionary D{Matrix::Identity(n, n), {0, 0, 1, 1}};
  Matrix Yd = oracles::gaussian_matrix(n, 5, rng);
  LabeledMatrix Y = wrap(Yd, {0, 0, 0, 1, 1}, 2);
  IdealMatrix Q = Matrix::Zero(n, 5);
  AdmmParams p;
  p.alpha = 0;
  p.gamma = 0;
  CoefficientMatrix Z = Yd;
  CoefficientMatrix L = Matrix::Zero(n, 5);
  CoefficientMatrix X = admm_update_x(D, Y, Y, Q, Z, L, 1e8, p);
  CHECK((X - Yd).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zero right-hand side produces the zero coefficient matrix") {
  std::mt19937_64 rng(62);
  Dictionary D = oracles::random_dictionary(4, 3, rng);
  D.atom_labels = {0, 0, 1};
  LabeledMatrix Y0 = wrap(Matrix::Zero(4, 4), {0, 0, 1, 1}, 2);
  IdealMatrix Q = Matrix::Zero(3, 4);
  AdmmParams p;
  p.alpha = 0.3;
  p.gamma = 0.0;
  double mu = 0.5;
  CoefficientMatrix Z = oracles::gaussian_matrix(3, 4, rng);
  CoefficientMatrix L = mu * Z;
  CoefficientMatrix X = admm_update_x(D, Y0, Y0, Q, Z, L, mu, p);
  CHECK(X.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("admm x-update zeroes the subproblem gradient and matches the generic solver") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    Dictionary D = oracles::random_dictionary(5, 4, rng);
    D.atom_labels = {0, 0, 1, 1};
    Matrix Yd = oracles::gaussian_matrix(5, 6, rng);
    Matrix Ya = oracles::gaussian_matrix(5, 6, rng);
    std::vector<int> labels{0, 0, 0, 1, 1, 1};
    IdealMatrix Q = build_ideal_matrix(labels, D.atom_labels);
    LabeledMatrix Y = wrap(Yd, labels, 2), Yalt = wrap(Ya, labels, 2);
    CoefficientMatrix Z = oracles::gaussian_matrix(4, 6, rng);
    CoefficientMatrix L = oracles::gaussian_matrix(4, 6, rng);
    AdmmParams p;
    p.alpha = 0.01;
    p.gamma = 1e-3;
    double mu = 0.37;

    CoefficientMatrix X = admm_update_x(D, Y, Yalt, Q, Z, L, mu, p);
    Matrix grad = eq16_gradient(D.atoms, Yd, Ya, Q, Z, L, X, p.alpha, p.gamma, mu);
    CHECK(grad.cwiseAbs().maxCoeff() < 1e-8);

    Matrix G = (1 + p.alpha) * oracles::matmul_scalar(D.atoms.transpose(), D.atoms);
    G.diagonal().array() += mu / 2.0 + p.gamma;
    Matrix rhs = oracles::matmul_scalar(D.atoms.transpose(), Yd + p.alpha * Ya) +
                 p.gamma * Q + (mu * Z - L) / 2.0;
    Matrix X_oracle = oracles::solve_gauss(G, rhs);
    CHECK((X - X_oracle).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("x-update with zeroed splitting state reproduces the closed-form ridge update") {
  std::mt19937_64 rng(64);
  Dictionary D = oracles::random_dictionary(5, 4, rng);
  D.atom_labels = {0, 0, 1, 1};
  Matrix Yd = oracles::gaussian_matrix(5, 6, rng);
  Matrix Ya = oracles::gaussian_matrix(5, 6, rng);
  std::vector<int> labels{0, 0, 0, 1, 1, 1};
  IdealMatrix Q = build_ideal_matrix(labels, D.atom_labels);
  LabeledMatrix Y = wrap(Yd, labels, 2), Yalt = wrap(Ya, labels, 2);

  double beta_ridge = 2.5e-3;
  EsdlParams ridge;
  ridge.alpha = 0.01;
  ridge.beta = beta_ridge;
  ridge.gamma = 1e-3;
  AdmmParams admm;
  admm.alpha = ridge.alpha;
  admm.beta = 0.0;
  admm.gamma = ridge.gamma;

  CoefficientMatrix zero = Matrix::Zero(4, 6);
  CoefficientMatrix X_admm = admm_update_x(D, Y, Yalt, Q, zero, zero, 2.0 * beta_ridge, admm);
  CoefficientMatrix X_ridge = update_coefficients(D, Y, Yalt, Q, ridge);
  CHECK((X_admm - X_ridge).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("z-update literal cases") {
  std::mt19937_64 rng(65);
  CoefficientMatrix X = oracles::gaussian_matrix(3, 4, rng);
  CoefficientMatrix L = oracles::gaussian_matrix(3, 4, rng);
  double mu = 2.0;

  CoefficientMatrix Z0 = admm_update_z(X, L, mu, 0.0);
  CHECK((Z0 - (X + L / mu)).cwiseAbs().maxCoeff() == 0.0);

  // dead zone: |x + l/mu| < beta/mu everywhere
  CoefficientMatrix Xs = 0.01 * Matrix::Ones(2, 2);
  CoefficientMatrix Ls = Matrix::Zero(2, 2);
  CoefficientMatrix Zs = admm_update_z(Xs, Ls, 1.0, 0.5);
  CHECK(Zs.isZero(0));
}

TEST_CASE("z-update matches the scalar prox oracle") {
  std::mt19937_64 rng(66);
  CoefficientMatrix X = oracles::gaussian_matrix(4, 5, rng);
  CoefficientMatrix L = oracles::gaussian_matrix(4, 5, rng);
  double mu = 1.7, beta = 0.9;
  CoefficientMatrix Z = admm_update_z(X, L, mu, beta);
  for (Eigen::Index j = 0; j < Z.cols(); ++j)
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      // argmin_z beta|z| + (mu/2)(z - (x + l/mu))^2
      double v = X(i, j) + L(i, j) / mu;
      double expected = oracles::prox_ternary(v, beta, mu);
      CHECK(Z(i, j) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("without thresholding the splitting gap closes immediately") {
  LabeledMatrix data = make_synthetic(2, 8, 2, 6, 0.01, 4);
  data = normalize_columns(data);
  auto halves = half_split_alternative(data, 3);
  AdmmParams p;
  p.alpha = 0;
  p.beta = 0;
  p.gamma = 0;
  KsvdParams init;
  init.sparsity = 2;
  init.iterations = 2;
  EsdlModel m = sdl_l1_train(halves.first, halves.second, 4, p, init);
  CHECK(m.report.converged);
  CHECK(m.report.iterations_run == 1);
  CHECK(m.report.residual_trace.front() < 1e-12);
}

TEST_CASE("zero data keeps every iterate at zero") {
  LabeledMatrix Y0;
  Y0.class_count = 2;
  Y0.data = Matrix::Zero(4, 6);
  Y0.labels = {0, 0, 0, 1, 1, 1};
  AdmmParams p;
  p.alpha = 0.01;
  p.beta = 1e-3;
  p.gamma = 0; // the ideal-matrix pull is disabled so zero is a fixed point
  p.max_iters = 7;
  KsvdParams init;
  init.sparsity = 1;
  init.iterations = 1;
  EsdlModel m = sdl_l1_train(Y0, Y0, 2, p, init);
  CHECK(m.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.report.converged);
  CHECK(m.report.residual_trace.front() == 0.0);
}

TEST_CASE("primal residual reaches the tolerance on synthetic data") {
  LabeledMatrix data = make_synthetic(3, 20, 3, 12, 0.05, 7);
  data = normalize_columns(data);
  auto halves = half_split_alternative(data, 11);
  AdmmParams p;
  p.alpha = 0.01;
  p.beta = 1e-3;
  p.gamma = 1e-3;
  p.max_iters = 200;
  KsvdParams init;
  init.seed = 5;
  EsdlModel m = sdl_l1_train(halves.first, halves.second, 6, p, init);
  CHECK(m.report.converged);
  CHECK(m.report.iterations_run <= 200);
  CHECK(m.report.residual_trace.back() < p.primal_tol);

  // mu trace is non-decreasing and capped
  const auto& mu = m.report.penalty_trace;
  REQUIRE(!mu.empty());
  CHECK(mu.front() == 0.01);
  for (size_t i = 1; i < mu.size(); ++i) {
    CHECK(mu[i] >= mu[i - 1]);
    CHECK(mu[i] <= 1e8);
  }
}

TEST_CASE("a meaningful l1 weight produces exact zeros, never near-zeros") {
  LabeledMatrix data = make_synthetic(3, 20, 3, 12, 0.05, 7);
  data = normalize_columns(data);
  auto halves = half_split_alternative(data, 11);
  AdmmParams p;
  p.alpha = 0.01;
  p.beta = 0.05;
  p.gamma = 1e-3;
  p.max_iters = 200;
  KsvdParams init;
  init.seed = 5;
  EsdlModel m = sdl_l1_train(halves.first, halves.second, 6, p, init);
  const auto& Z = m.coefficients;
  long zeros = 0, near = 0;
  for (Eigen::Index i = 0; i < Z.size(); ++i) {
    double v = std::abs(Z.data()[i]);
    if (v == 0.0) ++zeros;
    else if (v < 1e-12) ++near;
  }
  CHECK(zeros > 0);
  CHECK(near == 0);
}

TEST_CASE("admm parameter validation") {
  LabeledMatrix data = make_synthetic(2, 6, 2, 4, 0.01, 1);
  AdmmParams p;
  p.mu0 = 0;
  KsvdParams init;
  init.sparsity = 1;
  init.iterations = 1;
  CHECK_THROWS_AS(sdl_l1_train(data, data, 2, p, init), ConfigError);
  p = AdmmParams{};
  p.rho = 1.0;
  CHECK_THROWS_AS(sdl_l1_train(data, data, 2, p, init), ConfigError);
  p = AdmmParams{};
  p.mu0 = 10;
  p.mu_max = 1;
  CHECK_THROWS_AS(sdl_l1_train(data, data, 2, p, init), ConfigError);
}

} // TEST_SUITE

#include <doctest.h>

#include "oracles.hpp"
#include "structdict/ksvd.hpp"

using namespace structdict;

TEST_SUITE("ksvd") {

TEST_CASE("orthonormal data with matching initialization is a fixed point") {
  std::mt19937_64 rng(31);
  Matrix raw = oracles::gaussian_matrix(6, 4, rng);
  Eigen::HouseholderQR<Matrix> qr(raw);
  Matrix Y = qr.householderQ() * Matrix::Identity(6, 4);

  KsvdParams p;
  p.atoms = 4;
  p.sparsity = 1;
  p.iterations = 1;
  p.initial_atoms = Y;
  KsvdResult r = ksvd_train(Y, p);

  for (Eigen::Index k = 0; k < 4; ++k) {
    double dot = std::abs(r.atoms.col(k).dot(Y.col(k)));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
  }
  // coefficients are the identity up to sign
  for (Eigen::Index k = 0; k < 4; ++k)
    for (Eigen::Index i = 0; i < 4; ++i) {
      if (k == i) CHECK(std::abs(r.coefficients(k, i)) == doctest::Approx(1.0).epsilon(1e-10));
      else CHECK(r.coefficients(k, i) == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("rank-1 repeated column collapses to the normalized column") {
  Vector c(3);
  c << 3.0, 0.0, 4.0;
  Matrix Y(3, 5);
  for (int i = 0; i < 5; ++i) Y.col(i) = c;
  KsvdParams p;
  p.atoms = 1;
  p.sparsity = 1;
  p.iterations = 2;
  p.seed = 9;
  KsvdResult r = ksvd_train(Y, p);
  CHECK(r.atoms.col(0)(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.atoms.col(0)(2) == doctest::Approx(0.8).epsilon(1e-12));
  for (int i = 0; i < 5; ++i)
    CHECK(r.coefficients(0, i) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("objective trace is non-increasing and the final fit beats iteration 1") {
  std::mt19937_64 rng(32);
  Matrix Y = oracles::gaussian_matrix(6, 20, rng);
  KsvdParams p;
  p.atoms = 4;
  p.sparsity = 2;
  p.iterations = 10;
  p.seed = 1;
  KsvdResult r = ksvd_train(Y, p);
  REQUIRE(r.objective_trace.size() == 10);
  for (size_t i = 1; i < r.objective_trace.size(); ++i) {
    double prev = r.objective_trace[i - 1];
    CHECK(r.objective_trace[i] <= prev + 1e-8 * std::max(prev, 1.0));
  }
  CHECK(r.objective_trace.back() <= r.objective_trace.front());
}

TEST_CASE("atom update matches the full-SVD oracle") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    Matrix Y = oracles::gaussian_matrix(6, 12, rng);
    Dictionary D = oracles::random_dictionary(6, 4, rng);
    Matrix atoms = D.atoms;
    OmpParams omp{2, 1e-10};
    CoefficientMatrix X = omp_code_batch(D, Y, omp);

    Matrix atoms_oracle = atoms;
    CoefficientMatrix X_oracle = X;
    for (Eigen::Index k = 0; k < 4; ++k) {
      detail::ksvd_update_atom(Y, atoms, X, k, 0);
      oracles::ksvd_atom_update_oracle(Y, atoms_oracle, X_oracle, k);
      CHECK((atoms.col(k) - atoms_oracle.col(k)).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((X.row(k) - X_oracle.row(k)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("unused atom is replaced by the worst-represented column") {
  Matrix Y(3, 4);
  Y << 1, 0, 0, 9,
       0, 1, 0, 0,
       0, 0, 1, 0;
  Matrix atoms = Matrix::Identity(3, 3);
  CoefficientMatrix X = Matrix::Zero(3, 4);
  X(0, 0) = 1;
  X(1, 1) = 1;
  X(2, 2) = 1;
  // atom 2 unused after zeroing its row; column 3 (norm 9) is worst represented
  X(2, 2) = 0;
  bool used = detail::ksvd_update_atom(Y, atoms, X, 2, 0);
  CHECK_FALSE(used);
  CHECK(atoms.col(2)(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(atoms.col(2).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("atoms stay unit-norm after every iteration") {
  std::mt19937_64 rng(34);
  Matrix Y = oracles::gaussian_matrix(5, 15, rng);
  for (int iters = 1; iters <= 4; ++iters) {
    KsvdParams p;
    p.atoms = 3;
    p.sparsity = 2;
    p.iterations = iters;
    p.seed = 2;
    KsvdResult r = ksvd_train(Y, p);
    for (Eigen::Index k = 0; k < 3; ++k)
      CHECK(std::abs(r.atoms.col(k).norm() - 1.0) <= 1e-10);
  }
}

TEST_CASE("same seed reproduces the dictionary bitwise") {
  std::mt19937_64 rng(35);
  Matrix Y = oracles::gaussian_matrix(6, 18, rng);
  KsvdParams p;
  p.atoms = 4;
  p.sparsity = 2;
  p.iterations = 5;
  p.seed = 77;
  KsvdResult a = ksvd_train(Y, p);
  KsvdResult b = ksvd_train(Y, p);
  CHECK((a.atoms - b.atoms).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ksvd_train validates its preconditions") {
  std::mt19937_64 rng(36);
  Matrix Y = oracles::gaussian_matrix(4, 3, rng);
  KsvdParams p;
  p.atoms = 5;
  p.sparsity = 1;
  CHECK_THROWS_AS(ksvd_train(Y, p), ConfigError); // K > N
  p.atoms = 2;
  p.sparsity = 3;
  CHECK_THROWS_AS(ksvd_train(Y, p), ConfigError); // T0 > K
}

TEST_CASE("per-class initializer on repeated columns gives normalized class means") {
  Vector c0(4), c1(4);
  c0 << 2, 0, 0, 0;
  c1 << 0, 0, 5, 0;
  LabeledMatrix Y;
  Y.class_count = 2;
  Y.data.resize(4, 6);
  for (int i = 0; i < 3; ++i) Y.data.col(i) = c0;
  for (int i = 3; i < 6; ++i) Y.data.col(i) = c1;
  Y.labels = {0, 0, 0, 1, 1, 1};

  KsvdParams p;
  p.sparsity = 1;
  p.iterations = 2;
  p.seed = 3;
  Dictionary d = init_dictionary_per_class(Y, 2, p);
  CHECK(d.atom_labels == std::vector<int>{0, 1});
  CHECK(d.atoms.col(0)(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.atoms.col(1)(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(validate_dictionary(d, "per-class init"));
}

TEST_CASE("per-class initializer output is class-contiguous and valid") {
  std::mt19937_64 rng(37);
  LabeledMatrix Y = oracles::random_labeled(6, 3, 8, rng);
  KsvdParams p;
  p.sparsity = 2;
  p.iterations = 3;
  p.seed = 4;
  Dictionary d = init_dictionary_per_class(Y, 6, p);
  CHECK(d.atom_labels == std::vector<int>{0, 0, 1, 1, 2, 2});
  CHECK_NOTHROW(validate_dictionary(d, "init"));
}

TEST_CASE("per-class initializer recovers noiseless class subspaces") {
  LabeledMatrix Y;
  Y.class_count = 3;
  const int n = 12, r = 2, m = 9;
  Y.data.resize(n, 3 * m);
  std::mt19937_64 rng(38);
  std::vector<Matrix> bases;
  for (int c = 0; c < 3; ++c) {
    Matrix raw = oracles::gaussian_matrix(n, r, rng);
    Eigen::HouseholderQR<Matrix> qr(raw);
    Matrix B = qr.householderQ() * Matrix::Identity(n, r);
    bases.push_back(B);
    Matrix coefs = oracles::gaussian_matrix(r, m, rng);
    Y.data.middleCols(c * m, m) = B * coefs;
    for (int i = 0; i < m; ++i) Y.labels.push_back(c);
  }

  KsvdParams p;
  p.sparsity = 2;
  p.iterations = 10;
  p.seed = 5;
  Dictionary d = init_dictionary_per_class(Y, 6, p);
  for (int c = 0; c < 3; ++c) {
    Matrix sub = d.atoms.middleCols(2 * c, 2);
    CHECK(oracles::max_principal_angle(sub, bases[static_cast<size_t>(c)]) < 1e-6);
  }
}

TEST_CASE("per-class initializer rejects bad atom budgets") {
  std::mt19937_64 rng(39);
  LabeledMatrix Y = oracles::random_labeled(5, 3, 4, rng);
  KsvdParams p;
  CHECK_THROWS_WITH_AS(init_dictionary_per_class(Y, 7, p),
                       doctest::Contains("divisible"), ConfigError);
  CHECK_THROWS_AS(init_dictionary_per_class(Y, 18, p), ConfigError); // 6 > 4 per class
}

} // TEST_SUITE

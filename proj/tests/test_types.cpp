#include <doctest.h>

#include "oracles.hpp"
#include "structdict/types.hpp"

using namespace structdict;

namespace {

LabeledMatrix wrap(const Matrix& data, std::vector<int> labels, int classes) {
  return LabeledMatrix{data, std::move(labels), classes};
}

} // namespace

TEST_SUITE("types") {

TEST_CASE("esdl_objective vanishes at an exact fit") {
  std::mt19937_64 rng(1);
  Dictionary D = oracles::random_dictionary(4, 3, rng);
  CoefficientMatrix X = oracles::gaussian_matrix(3, 5, rng);
  Matrix Yd = D.atoms * X;
  LabeledMatrix Y = wrap(Yd, {0, 0, 0, 0, 0}, 1);
  EsdlParams p;
  p.alpha = 0.7;
  p.beta = 0;
  p.gamma = 0;
  IdealMatrix Q = Matrix::Zero(3, 5);
  CHECK(esdl_objective(Y, Y, D, X, Q, p) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("esdl_objective on identity pieces") {
  Dictionary D{Matrix::Identity(2, 2), {0, 0}};
  LabeledMatrix Y = wrap(Matrix::Identity(2, 2), {0, 0}, 1);
  CoefficientMatrix X = Matrix::Zero(2, 2);
  IdealMatrix Q = Matrix::Zero(2, 2);
  EsdlParams p;
  p.alpha = 1.0;
  p.beta = 3.7;
  p.gamma = 11.0;
  CHECK(esdl_objective(Y, Y, D, X, Q, p) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("esdl_objective matches the scalar-loop oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix Yd = oracles::gaussian_matrix(3, 4, rng);
    Matrix Ya = oracles::gaussian_matrix(3, 4, rng);
    Dictionary D = oracles::random_dictionary(3, 2, rng);
    CoefficientMatrix X = oracles::gaussian_matrix(2, 4, rng);
    IdealMatrix Q = build_ideal_matrix({0, 0, 1, 1}, {0, 1});
    LabeledMatrix Y = wrap(Yd, {0, 0, 1, 1}, 2);
    LabeledMatrix Yalt = wrap(Ya, {0, 0, 1, 1}, 2);
    EsdlParams p;
    p.alpha = p.beta = p.gamma = 0.5;
    double expected =
        oracles::esdl_objective_scalar(Yd, Ya, D.atoms, X, Q, 0.5, 0.5, 0.5);
    CHECK(esdl_objective(Y, Yalt, D, X, Q, p) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sdl_l1_objective trivial and literal values") {
  // zero dictionary columns are fine here; the objective checks conformance,
  // not dictionary invariants
  Dictionary D{Matrix::Zero(2, 2), {0, 0}};
  LabeledMatrix Y0 = wrap(Matrix::Zero(2, 2), {0, 0}, 1);
  EsdlParams p;
  p.alpha = 0.3;
  p.beta = 1.0;
  p.gamma = 0.0;
  CoefficientMatrix X = Matrix::Zero(2, 2);
  IdealMatrix Q = Matrix::Zero(2, 2);
  CHECK(sdl_l1_objective(Y0, Y0, D, X, Q, p) == 0.0);

  X << 1, -2, 0, 3;
  CHECK(sdl_l1_objective(Y0, Y0, D, X, Q, p) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("sdl_l1_objective matches the scalar-loop oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix Yd = oracles::gaussian_matrix(4, 6, rng);
    Matrix Ya = oracles::gaussian_matrix(4, 6, rng);
    Dictionary D = oracles::random_dictionary(4, 3, rng);
    CoefficientMatrix X = oracles::gaussian_matrix(3, 6, rng);
    IdealMatrix Q = build_ideal_matrix({0, 0, 0, 1, 1, 1}, {0, 0, 1});
    LabeledMatrix Y = wrap(Yd, {0, 0, 0, 1, 1, 1}, 2);
    LabeledMatrix Yalt = wrap(Ya, {0, 0, 0, 1, 1, 1}, 2);
    EsdlParams p;
    p.alpha = 0.25;
    p.beta = 0.8;
    p.gamma = 1.5;
    double expected =
        oracles::sdl_l1_objective_scalar(Yd, Ya, D.atoms, X, Q, 0.25, 0.8, 1.5);
    CHECK(sdl_l1_objective(Y, Yalt, D, X, Q, p) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("objective dimension mismatches name the offending pair") {
  std::mt19937_64 rng(4);
  Dictionary D = oracles::random_dictionary(3, 2, rng);
  LabeledMatrix Y = wrap(oracles::gaussian_matrix(3, 4, rng), {0, 0, 1, 1}, 2);
  CoefficientMatrix X = oracles::gaussian_matrix(2, 4, rng);
  IdealMatrix Q = Matrix::Zero(2, 4);
  EsdlParams p;

  LabeledMatrix bad_alt = wrap(oracles::gaussian_matrix(3, 5, rng), {0, 0, 1, 1, 1}, 2);
  CHECK_THROWS_WITH_AS(esdl_objective(Y, bad_alt, D, X, Q, p),
                       doctest::Contains("Y vs Y_alter"), DimensionError);
  CHECK_THROWS_WITH_AS(esdl_objective(Y, Y, D, Matrix::Zero(3, 4), Q, p),
                       doctest::Contains("D vs X"), DimensionError);
  CHECK_THROWS_WITH_AS(esdl_objective(Y, Y, D, Matrix::Zero(2, 3), Q, p),
                       doctest::Contains("Y vs X"), DimensionError);
  CHECK_THROWS_WITH_AS(esdl_objective(Y, Y, D, X, Matrix::Zero(2, 5), p),
                       doctest::Contains("X vs Q"), DimensionError);
}

TEST_CASE("objective with beta=gamma=0 and shared data reduces to (1+alpha) residual") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Dictionary D = oracles::random_dictionary(5, 3, rng);
    CoefficientMatrix X = oracles::gaussian_matrix(3, 6, rng);
    LabeledMatrix Y = wrap(oracles::gaussian_matrix(5, 6, rng), {0, 0, 0, 1, 1, 1}, 2);
    IdealMatrix Q = Matrix::Zero(3, 6);
    EsdlParams p;
    p.alpha = 0.37;
    p.beta = p.gamma = 0;
    double expected = (1 + p.alpha) * (Y.data - D.atoms * X).squaredNorm();
    CHECK(esdl_objective(Y, Y, D, X, Q, p) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("objectives are invariant under simultaneous column permutation") {
  std::mt19937_64 rng(6);
  Dictionary D = oracles::random_dictionary(4, 3, rng);
  const int N = 6;
  Matrix Yd = oracles::gaussian_matrix(4, N, rng);
  Matrix Ya = oracles::gaussian_matrix(4, N, rng);
  CoefficientMatrix X = oracles::gaussian_matrix(3, N, rng);
  std::vector<int> labels{0, 0, 1, 1, 2, 2};
  IdealMatrix Q = build_ideal_matrix(labels, {0, 1, 2});
  EsdlParams p;
  p.alpha = 0.2;
  p.beta = 0.4;
  p.gamma = 0.6;

  std::vector<Eigen::Index> perm{3, 0, 5, 1, 4, 2};
  Matrix Yp(4, N), Yap(4, N), Xp(3, N), Qp(3, N);
  std::vector<int> labp(N);
  for (int i = 0; i < N; ++i) {
    auto src = perm[static_cast<size_t>(i)];
    Yp.col(i) = Yd.col(src);
    Yap.col(i) = Ya.col(src);
    Xp.col(i) = X.col(src);
    Qp.col(i) = Q.col(src);
    labp[static_cast<size_t>(i)] = labels[static_cast<size_t>(src)];
  }
  LabeledMatrix Y = wrap(Yd, labels, 3), Yalt = wrap(Ya, labels, 3);
  LabeledMatrix Yperm = wrap(Yp, labp, 3), Yaperm = wrap(Yap, labp, 3);
  CHECK(esdl_objective(Y, Yalt, D, X, Q, p) ==
        doctest::Approx(esdl_objective(Yperm, Yaperm, D, Xp, Qp, p)).epsilon(1e-12));
  CHECK(sdl_l1_objective(Y, Yalt, D, X, Q, p) ==
        doctest::Approx(sdl_l1_objective(Yperm, Yaperm, D, Xp, Qp, p)).epsilon(1e-12));
}

TEST_CASE("build_ideal_matrix block example") {
  std::vector<int> samples{0, 0, 0, 1, 1, 1, 1, 2, 2, 2};
  std::vector<int> atoms{0, 0, 1, 1, 2, 2};
  IdealMatrix Q = build_ideal_matrix(samples, atoms);
  REQUIRE(Q.rows() == 6);
  REQUIRE(Q.cols() == 10);
  for (Eigen::Index k = 0; k < 6; ++k)
    for (Eigen::Index i = 0; i < 10; ++i) {
      double expected =
          atoms[static_cast<size_t>(k)] == samples[static_cast<size_t>(i)] ? 1.0 : 0.0;
      CHECK(Q(k, i) == expected);
    }
  CHECK(Q.block(0, 0, 2, 3).sum() == 6.0);
  CHECK(Q.block(2, 3, 2, 4).sum() == 8.0);
  CHECK(Q.block(4, 7, 2, 3).sum() == 6.0);
  CHECK(Q.sum() == 20.0);
}

TEST_CASE("build_ideal_matrix trivial cases and errors") {
  IdealMatrix one = build_ideal_matrix({0}, {0});
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 1);
  CHECK(one(0, 0) == 1.0);

  IdealMatrix disjoint = build_ideal_matrix({0, 0}, {1, 1, 1});
  CHECK(disjoint.isZero(0));

  CHECK_THROWS_AS(build_ideal_matrix({}, {0}), DimensionError);
  CHECK_THROWS_AS(build_ideal_matrix({0}, {}), DimensionError);
}

TEST_CASE("build_ideal_matrix transpose and ones-count properties") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(8), b(5);
    for (auto& v : a) v = pick(rng);
    for (auto& v : b) v = pick(rng);
    IdealMatrix ab = build_ideal_matrix(a, b);
    IdealMatrix ba = build_ideal_matrix(b, a);
    CHECK((ab - ba.transpose()).cwiseAbs().maxCoeff() == 0.0);

    double expected = 0;
    for (int c = 0; c <= 3; ++c) {
      auto sc = std::count(a.begin(), a.end(), c);
      auto ac = std::count(b.begin(), b.end(), c);
      expected += static_cast<double>(sc) * static_cast<double>(ac);
    }
    CHECK(ab.sum() == expected);
  }
}

TEST_CASE("build_label_matrix is one-hot") {
  LabelMatrix H = build_label_matrix({2, 0, 1, 1}, 3);
  REQUIRE(H.rows() == 3);
  REQUIRE(H.cols() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(H.col(i).sum() == 1.0);
  CHECK(H(2, 0) == 1.0);
  CHECK(H(0, 1) == 1.0);
  CHECK(H(1, 2) == 1.0);
  CHECK(H(1, 3) == 1.0);
}

TEST_CASE("validators catch invariant violations") {
  LabeledMatrix ok = wrap(Matrix::Ones(2, 3), {0, 1, 0}, 2);
  CHECK_NOTHROW(validate_labeled_matrix(ok, "ok"));

  LabeledMatrix short_labels = wrap(Matrix::Ones(2, 3), {0, 1}, 2);
  CHECK_THROWS_AS(validate_labeled_matrix(short_labels, "short"), DataError);

  LabeledMatrix missing_class = wrap(Matrix::Ones(2, 3), {0, 0, 0}, 2);
  CHECK_THROWS_AS(validate_labeled_matrix(missing_class, "missing"), DataError);
  CHECK_NOTHROW(validate_labeled_matrix(missing_class, "missing", false));

  LabeledMatrix nonfinite = ok;
  nonfinite.data(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_labeled_matrix(nonfinite, "nan"), DataError);

  Dictionary d{Matrix::Identity(3, 2), {0, 1}};
  CHECK_NOTHROW(validate_dictionary(d, "d"));
  Dictionary unnorm{2.0 * Matrix::Identity(3, 2), {0, 1}};
  CHECK_THROWS_AS(validate_dictionary(unnorm, "unnorm"), DataError);
  Dictionary out_of_order{Matrix::Identity(3, 2), {1, 0}};
  CHECK_THROWS_AS(validate_dictionary(out_of_order, "order"), DataError);
}

TEST_CASE("parameter presets carry the reported values") {
  EsdlParams face = face_preset();
  CHECK(face.alpha == 0.01);
  CHECK(face.beta == 1e-3);
  CHECK(face.gamma == 1e-3);
  EsdlParams scene = scene_preset();
  CHECK(scene.alpha == 0.1);
  CHECK(scene.beta == 1e-4);
  CHECK(scene.gamma == 1e-4);
}

} // TEST_SUITE

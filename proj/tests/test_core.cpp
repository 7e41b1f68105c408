#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

#include "trls/core.hpp"
#include "trls/rng.hpp"

using namespace trls;

namespace {

Vector random_vector(Rng& rng, Index d, double scale = 1.0) {
  Vector v(d);
  for (Index j = 0; j < d; ++j) v[j] = scale * rng.normal();
  return v;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("psi_value l1") {
    Vector v(3);
    v << 3, -4, 0;
    CHECK(psi_value(Regularizer::l1(), v) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(psi_value(Regularizer::l1(), Vector::Zero(5)) == 0.0);
  }

  TEST_CASE("psi_value nuclear of diagonal matrix") {
    Vector v(4);
    v << 3, 0, 0, 1;  // row-major diag(3, 1)
    CHECK(psi_value(Regularizer::nuclear(2, 2), v) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK_THROWS_AS(psi_value(Regularizer::nuclear(2, 2), Vector::Zero(3)),
                    std::invalid_argument);
  }

  TEST_CASE("psi_prox soft thresholding") {
    Vector v(3);
    v << 3, -0.2, 0;
    const Vector p = psi_prox(Regularizer::l1(), v, 1.0);
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 0.0);
  }

  TEST_CASE("psi_prox with t = 0 is the identity") {
    Rng rng(7);
    const Vector v = random_vector(rng, 6);
    CHECK((psi_prox(Regularizer::l1(), v, 0.0) - v).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((psi_prox(Regularizer::nuclear(2, 3), v, 0.0) - v).lpNorm<Eigen::Infinity>() < 1e-12);
  }

  TEST_CASE("psi_prox nuclear shrinks singular values") {
    Vector v(4);
    v << 3, 0, 0, 1;
    const Vector p = psi_prox(Regularizer::nuclear(2, 2), v, 2.0);
    Vector expect(4);
    expect << 1, 0, 0, 0;
    CHECK((p - expect).lpNorm<Eigen::Infinity>() < 1e-10);
  }

  TEST_CASE("objective quadratic and penalty terms") {
    Matrix x(1, 1);
    x << 1;
    Vector y(1);
    y << 2;
    const SampleSet s(x, y);
    EstimatorConfig config;
    config.lambda = 1.0;

    Vector theta(1);
    theta << 2.0;
    CHECK(objective(s, theta, config) == doctest::Approx(2.0).epsilon(1e-12));
    theta << 1.5;
    CHECK(objective(s, theta, config) == doctest::Approx(1.75).epsilon(1e-12));

    config.lambda = 0.0;
    CHECK(objective(s, Vector::Zero(1), config) == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("objective at zero is the mean squared response") {
    Rng rng(11);
    Matrix x(8, 3);
    Vector y(8);
    for (Index i = 0; i < 8; ++i) {
      y[i] = rng.normal();
      for (Index j = 0; j < 3; ++j) x(i, j) = rng.normal();
    }
    const SampleSet s(x, y);
    EstimatorConfig config;
    config.lambda = 0.7;
    CHECK(objective(s, Vector::Zero(3), config) ==
          doctest::Approx(y.squaredNorm() / 8.0).epsilon(1e-12));
  }

  TEST_CASE("norm axioms hold on random inputs") {
    Rng rng(21);
    for (int rep = 0; rep < 1000; ++rep) {
      const bool nuclear = rep % 2 == 1;
      const Regularizer reg = nuclear ? Regularizer::nuclear(4, 3) : Regularizer::l1();
      const Index d = nuclear ? 12 : 9;
      const Vector a = random_vector(rng, d, 2.0);
      const Vector b = random_vector(rng, d, 2.0);
      const double c = 3.0 * (rng.uniform() - 0.5);
      const double tol = nuclear ? 1e-8 : 1e-10;

      CHECK(psi_value(reg, a + b) <= psi_value(reg, a) + psi_value(reg, b) + tol);
      CHECK(psi_value(reg, c * a) ==
            doctest::Approx(std::abs(c) * psi_value(reg, a)).epsilon(1e-9));
      CHECK(psi_value(reg, a) >= 0.0);
    }
    CHECK(psi_value(Regularizer::l1(), Vector::Zero(4)) == 0.0);
    CHECK(psi_value(Regularizer::nuclear(2, 2), Vector::Zero(4)) < 1e-14);
  }

  TEST_CASE("prox is nonexpansive") {
    Rng rng(22);
    for (int rep = 0; rep < 1000; ++rep) {
      const bool nuclear = rep % 2 == 1;
      const Regularizer reg = nuclear ? Regularizer::nuclear(3, 4) : Regularizer::l1();
      const Index d = nuclear ? 12 : 10;
      const double t = 2.0 * rng.uniform();
      const Vector a = random_vector(rng, d, 3.0);
      const Vector b = random_vector(rng, d, 3.0);
      const double tol = nuclear ? 1e-8 : 1e-10;
      CHECK((psi_prox(reg, a, t) - psi_prox(reg, b, t)).norm() <= (a - b).norm() + tol);
    }
  }

  TEST_CASE("Moreau decomposition for l1") {
    Rng rng(23);
    for (int rep = 0; rep < 1000; ++rep) {
      const Index d = 8;
      const double t = 0.01 + 2.0 * rng.uniform();
      const Vector v = random_vector(rng, d, 4.0);
      const Vector p = psi_prox(Regularizer::l1(), v, t);
      Vector proj = v / t;
      for (Index j = 0; j < d; ++j) proj[j] = std::clamp(proj[j], -1.0, 1.0);
      CHECK((p + t * proj - v).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }

  TEST_CASE("nuclear norm equals l1 norm of singular values") {
    Rng rng(24);
    for (int rep = 0; rep < 1000; ++rep) {
      const Index m = 5, n = 4;
      const Vector v = random_vector(rng, m * n, 2.0);
      const Matrix mat = as_matrix(Regularizer::nuclear(m, n), v);
      Eigen::JacobiSVD<Matrix> svd(mat);
      const Vector sv = svd.singularValues();
      CHECK(psi_value(Regularizer::nuclear(m, n), v) ==
            doctest::Approx(psi_value(Regularizer::l1(), sv)).epsilon(1e-10));
    }
  }

  TEST_CASE("row-major flattening round trip") {
    Vector v(6);
    v << 1, 2, 3, 4, 5, 6;
    const Matrix m = as_matrix(Regularizer::nuclear(2, 3), v);
    CHECK(m(0, 0) == 1);
    CHECK(m(0, 2) == 3);
    CHECK(m(1, 0) == 4);
    CHECK((as_vector(m) - v).lpNorm<Eigen::Infinity>() == 0.0);
  }

  TEST_CASE("sample set invariants") {
    CHECK_THROWS_AS(SampleSet(Matrix::Zero(3, 2), Vector::Zero(4)), std::invalid_argument);
    Matrix bad = Matrix::Zero(2, 2);
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(SampleSet(bad, Vector::Zero(2)), std::invalid_argument);
  }
}

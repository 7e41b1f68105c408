#include <doctest.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "trls/dataset_io.hpp"
#include "trls/diagnostics.hpp"
#include "trls/sampling.hpp"

using namespace trls;

namespace {

Matrix random_orthogonal(Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(d, d);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

double directional_moment(const Matrix& x, const Vector& v, int p) {
  return (x * v).array().abs().pow(p).mean();
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("constant radius rows sit on the sphere of radius sqrt(d)") {
    const Index d = 7;
    const Matrix x = sample_elliptical(EllipticalSpec::constant_radius(Matrix::Identity(d, d)),
                                       200, 5);
    for (Index i = 0; i < x.rows(); ++i)
      CHECK(x.row(i).norm() == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
  }

  TEST_CASE("gaussian radial with B = I gives standard normal rows") {
    const Index d = 10;
    const Index n = 200000;
    const Matrix x = sample_elliptical(EllipticalSpec::gaussian(Matrix::Identity(d, d)), n, 42);
    const Matrix cov = (x.transpose() * x) / static_cast<double>(n);
    const double rel = (cov - Matrix::Identity(d, d)).norm() / Matrix::Identity(d, d).norm();
    CHECK(rel < 0.05);
  }

  TEST_CASE("identical spec and seed reproduce identical bytes") {
    const EllipticalSpec spec = EllipticalSpec::student(Matrix::Identity(4, 4), 6.0);
    const Matrix a = sample_elliptical(spec, 50, 77);
    const Matrix b = sample_elliptical(spec, 50, 77);
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
    const Matrix c = sample_elliptical(spec, 50, 78);
    CHECK((a - c).lpNorm<Eigen::Infinity>() > 0.0);
  }

  TEST_CASE("degenerate shape factor is rejected") {
    Matrix b = Matrix::Identity(3, 3);
    b(2, 2) = 0.0;
    CHECK_THROWS_AS(sample_elliptical(EllipticalSpec::gaussian(b), 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(EllipticalSpec::student(Matrix::Identity(2, 2), 4.0), std::invalid_argument);
    CHECK_THROWS_AS(EllipticalSpec::pareto(Matrix::Identity(2, 2), 3.0), std::invalid_argument);
  }

  TEST_CASE("radial normalization pins E[mu^2] = d") {
    const Index d = 10;
    const Index n = 200000;
    for (const auto& spec : {EllipticalSpec::student(Matrix::Identity(d, d), 8.0),
                             EllipticalSpec::pareto(Matrix::Identity(d, d), 8.0),
                             EllipticalSpec::gaussian(Matrix::Identity(d, d))}) {
      const Matrix x = sample_elliptical(spec, n, 11);
      const double mean_sq = x.rowwise().squaredNorm().mean();
      CHECK(mean_sq == doctest::Approx(static_cast<double>(d)).epsilon(0.01));
    }
  }

  TEST_CASE("sparse signal construction") {
    const Vector e1 = make_sparse_signal(10, 1, SignalMode::UnitEntries, 0);
    CHECK(e1[0] == 1.0);
    CHECK(e1.tail(9).lpNorm<Eigen::Infinity>() == 0.0);

    const Vector quarter = make_sparse_signal(4, 4, SignalMode::UnitEntries, 0);
    for (Index j = 0; j < 4; ++j) CHECK(std::abs(quarter[j]) == doctest::Approx(0.5));
    CHECK(quarter.norm() == doctest::Approx(1.0).epsilon(1e-12));

    const Vector random = make_sparse_signal(10, 3, SignalMode::Random, 123);
    Index nonzeros = 0;
    for (Index j = 0; j < 10; ++j) nonzeros += random[j] != 0.0 ? 1 : 0;
    CHECK(nonzeros == 3);
    CHECK(random.norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_sparse_signal(4, 5, SignalMode::Random, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_sparse_signal(4, 0, SignalMode::Random, 0), std::invalid_argument);
  }

  TEST_CASE("low-rank signal construction") {
    const Matrix rank1 = make_low_rank_signal(3, 3, 1, 9);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        const double minor = rank1(i, j) * rank1(i + 1, j + 1) - rank1(i, j + 1) * rank1(i + 1, j);
        CHECK(std::abs(minor) < 1e-10);
      }

    const Matrix full = make_low_rank_signal(4, 4, 4, 10);
    Eigen::JacobiSVD<Matrix> svd_full(full);
    CHECK(svd_full.singularValues()(3) > 1e-10);

    const Matrix r2 = make_low_rank_signal(20, 20, 2, 11);
    CHECK(r2.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::JacobiSVD<Matrix> svd(r2);
    Index numerical_rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      numerical_rank += svd.singularValues()(i) > 1e-10 ? 1 : 0;
    CHECK(numerical_rank == 2);

    CHECK_THROWS_AS(make_low_rank_signal(3, 4, 5, 0), std::invalid_argument);
  }

  TEST_CASE("noiseless linear synthesis reproduces the index exactly") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(6, 2, SignalMode::Random, 3);
    truth.sparsity = 2;
    truth.link = LinkFunction::linear();
    const DesignSpec design = IidEntrySpec::gaussian(6);
    const auto [samples, filled] = synthesize_dataset(design, truth, 40, 17);
    CHECK(filled.eta == 1.0);
    CHECK((samples.response - samples.design * filled.theta_star).lpNorm<Eigen::Infinity>() ==
          0.0);
  }

  TEST_CASE("linear link with noise keeps eta = 1") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(5, 5, SignalMode::Random, 4);
    truth.link = LinkFunction::linear(NoiseSpec::student(6.0, 0.5));
    const auto [samples, filled] =
        synthesize_dataset(IidEntrySpec::student_t(5, 25.0), truth, 30, 18);
    CHECK(filled.eta == 1.0);
    CHECK((samples.response - samples.design * filled.theta_star).lpNorm<Eigen::Infinity>() >
          0.0);
  }

  TEST_CASE("sign link under gaussian design has analytic eta") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(8, 3, SignalMode::Random, 5);
    truth.link = LinkFunction::sign();
    truth.single_index = true;
    const DesignSpec design = EllipticalSpec::gaussian(Matrix::Identity(8, 8));
    const auto [samples, filled] = synthesize_dataset(design, truth, 50, 19);
    CHECK(filled.eta == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK(filled.theta_star.norm() == doctest::Approx(1.0).epsilon(1e-10));
    for (Index i = 0; i < samples.n_samples(); ++i)
      CHECK(std::abs(samples.response[i]) == 1.0);
  }

  TEST_CASE("monte carlo eta agrees with the empirical estimate") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(6, 6, SignalMode::Random, 6);
    truth.link = LinkFunction::sign();
    truth.single_index = true;
    // Non-gaussian radial forces the Monte-Carlo route for eta.
    const DesignSpec design = EllipticalSpec::student(Matrix::Identity(6, 6), 9.0);
    const auto [samples, filled] = synthesize_dataset(design, truth, 100000, 20);
    const double eta_hat = estimate_eta(samples, filled, design_covariance(design));
    CHECK(filled.eta == doctest::Approx(eta_hat).epsilon(0.05));
  }

  TEST_CASE("even link is flagged degenerate") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(5, 2, SignalMode::Random, 7);
    truth.link = LinkFunction::custom("square");
    truth.single_index = true;
    CHECK_THROWS_AS(
        synthesize_dataset(DesignSpec(EllipticalSpec::gaussian(Matrix::Identity(5, 5))), truth,
                           50, 21),
        DegenerateProblem);
    CHECK_THROWS_AS(
        synthesize_dataset(DesignSpec(EllipticalSpec::constant_radius(Matrix::Identity(5, 5))),
                           truth, 50, 21),
        DegenerateProblem);
  }

  TEST_CASE("rotation covariance of the isotropic elliptical sampler") {
    const Index d = 6;
    const Index n = 100000;
    const EllipticalSpec spec = EllipticalSpec::student(Matrix::Identity(d, d), 10.0);
    const Matrix x = sample_elliptical(spec, n, 30);
    const Matrix rotated = x * random_orthogonal(d, 31).transpose();

    Rng dir_rng(32);
    for (int k = 0; k < 5; ++k) {
      Vector v(d);
      for (Index j = 0; j < d; ++j) v[j] = dir_rng.normal();
      v.normalize();
      const double m2 = directional_moment(x, v, 2);
      const double m2_rot = directional_moment(rotated, v, 2);
      CHECK(m2 == doctest::Approx(m2_rot).epsilon(0.05));
      const double m4 = directional_moment(x, v, 4);
      const double m4_rot = directional_moment(rotated, v, 4);
      CHECK(m4 == doctest::Approx(m4_rot).epsilon(0.25));
    }
  }

  TEST_CASE("projections are centered") {
    const Index d = 8;
    const Index n = 100000;
    const Matrix x = sample_iid_entries(IidEntrySpec::student_t(d, 25.0), n, 33);
    Rng dir_rng(34);
    for (int k = 0; k < 5; ++k) {
      Vector v(d);
      for (Index j = 0; j < d; ++j) v[j] = dir_rng.normal();
      v.normalize();
      const Vector proj = x * v;
      const double sd = std::sqrt(proj.array().square().mean());
      CHECK(std::abs(proj.mean()) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
    }
  }

  TEST_CASE("student radial fourth moment is stable across n") {
    const Index d = 5;
    const EllipticalSpec spec = EllipticalSpec::student(Matrix::Identity(d, d), 8.0);
    Vector v = Vector::Zero(d);
    v[0] = 1.0;
    const double m4_small = directional_moment(sample_elliptical(spec, 10000, 40), v, 4);
    const double m4_large = directional_moment(sample_elliptical(spec, 100000, 41), v, 4);
    CHECK(m4_large < 2.0 * m4_small);
    CHECK(m4_small < 2.0 * m4_large);
  }

  TEST_CASE("dataset csv round trip") {
    GroundTruth truth;
    truth.theta_star = make_sparse_signal(3, 2, SignalMode::Random, 8);
    truth.link = LinkFunction::linear(NoiseSpec::gaussian(0.1));
    const auto [samples, filled] =
        synthesize_dataset(IidEntrySpec::gaussian(3), truth, 25, 50);

    const std::string path =
        (std::filesystem::temp_directory_path() / "trls_dataset_test.csv").string();
    write_dataset_csv(samples, path);
    const SampleSet loaded = read_dataset_csv(path);
    CHECK(loaded.n_samples() == samples.n_samples());
    CHECK(loaded.dim() == samples.dim());
    CHECK((loaded.design - samples.design).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((loaded.response - samples.response).lpNorm<Eigen::Infinity>() == 0.0);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x1,x2,x3,y");
    std::filesystem::remove(path);
  }
}

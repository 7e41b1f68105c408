#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown when a problem instance has no usable information content,
/// e.g. the truncated design is identically zero or the link function
/// kills the signal (scaling constant indistinguishable from zero).
struct DegenerateProblem : std::runtime_error {
  explicit DegenerateProblem(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an iterative routine produces a non-finite value. The
/// message carries the iteration index at which it happened.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Measurements

/// Raw or truncated measurement pairs {(x_i, y_i)}. Rows of `design` are the
/// measurement vectors; `response` holds the matching scalar observations.
/// Immutable after construction; construction rejects dimension mismatches
/// and non-finite entries.
struct SampleSet {
  Matrix design;    // N x d
  Vector response;  // N

  SampleSet(Matrix x, Vector y) : design(std::move(x)), response(std::move(y)) {
    if (design.rows() != response.size())
      throw std::invalid_argument("SampleSet: design rows != response length");
    if (design.rows() < 1) throw std::invalid_argument("SampleSet: empty sample");
    if (!design.allFinite() || !response.allFinite())
      throw std::invalid_argument("SampleSet: non-finite entry");
  }

  Index n_samples() const { return design.rows(); }
  Index dim() const { return design.cols(); }
};

// ---------------------------------------------------------------------------
// Regularizer

enum class Norm { L1, Nuclear };

/// The structure-inducing norm: either the l1 norm on vectors or the nuclear
/// norm on matrices stored as row-major flattened vectors of length m*n.
struct Regularizer {
  Norm kind = Norm::L1;
  Index rows = 0;  // Nuclear only
  Index cols = 0;

  static Regularizer l1() { return {}; }

  static Regularizer nuclear(Index m, Index n) {
    if (m < 1 || n < 1) throw std::invalid_argument("Regularizer: nuclear shape must be positive");
    return {Norm::Nuclear, m, n};
  }

  /// Parameter length this regularizer expects (0 = any, for L1).
  Index expected_size() const { return kind == Norm::Nuclear ? rows * cols : 0; }
};

// ---------------------------------------------------------------------------
// Truncation

enum class Truncation { None, Entrywise, NormBased };

/// Which clipping rule tames the design, and at what level tau.
struct TruncationScheme {
  Truncation kind = Truncation::None;
  double tau = 0.0;

  static TruncationScheme none() { return {}; }

  static TruncationScheme entrywise(double tau) {
    require_tau(tau);
    return {Truncation::Entrywise, tau};
  }

  static TruncationScheme norm_based(double tau) {
    require_tau(tau);
    return {Truncation::NormBased, tau};
  }

 private:
  static void require_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("TruncationScheme: tau must be > 0");
  }
};

// ---------------------------------------------------------------------------
// Link function and noise

enum class Link { Linear, Sign, Cubic, Custom };

enum class NoiseKind { None, Gaussian, Student, Pareto };

/// Additive observation noise. `param` is the sd (Gaussian), degrees of
/// freedom (Student) or tail exponent (Pareto, symmetrized). Student and
/// Pareto require a finite first moment (df > 1, alpha > 1).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double param = 0.0;
  double scale = 1.0;

  static NoiseSpec none() { return {}; }

  static NoiseSpec gaussian(double sd) {
    if (!(sd >= 0.0)) throw std::invalid_argument("NoiseSpec: sd must be >= 0");
    return {NoiseKind::Gaussian, sd, 1.0};
  }

  static NoiseSpec student(double df, double scale) {
    if (!(df > 1.0)) throw std::invalid_argument("NoiseSpec: student df must be > 1");
    return {NoiseKind::Student, df, scale};
  }

  static NoiseSpec pareto(double alpha, double scale) {
    if (!(alpha > 1.0)) throw std::invalid_argument("NoiseSpec: pareto alpha must be > 1");
    return {NoiseKind::Pareto, alpha, scale};
  }
};

/// y = f(<x, theta*>, xi). Custom links are looked up by tag in a small
/// built-in registry ("square", "abs" -- both even, useful as degenerate
/// probes).
struct LinkFunction {
  Link kind = Link::Linear;
  std::string custom_tag;
  NoiseSpec noise;

  static LinkFunction linear(NoiseSpec noise = NoiseSpec::none()) {
    return {Link::Linear, "", noise};
  }
  static LinkFunction sign(NoiseSpec noise = NoiseSpec::none()) {
    return {Link::Sign, "", noise};
  }
  static LinkFunction cubic(NoiseSpec noise = NoiseSpec::none()) {
    return {Link::Cubic, "", noise};
  }
  static LinkFunction custom(std::string tag, NoiseSpec noise = NoiseSpec::none()) {
    return {Link::Custom, std::move(tag), noise};
  }
};

/// Evaluate the noiseless part of the link at index value u.
double apply_link(const LinkFunction& link, double u);

// ---------------------------------------------------------------------------
// Ground truth

/// The generating signal and its bookkeeping. `theta_star` is the parameter
/// vector (row-major flattened when `matrix_shape` is set); `eta` is the
/// scaling constant relating the population least-squares minimizer to
/// theta*; `sparsity` is the support size (or rank in matrix mode).
struct GroundTruth {
  Vector theta_star;
  double eta = 1.0;
  Index sparsity = 0;
  LinkFunction link;
  std::optional<std::pair<Index, Index>> matrix_shape;
  // When set, theta* is rescaled at synthesis time so that
  // ||Sigma^{1/2} theta*||_2 = 1 and eta is filled from the link.
  bool single_index = false;
};

// ---------------------------------------------------------------------------
// Estimator configuration and results

struct EstimatorConfig {
  double lambda = 0.0;
  TruncationScheme truncation;
  std::optional<double> response_clip;  // tau_y
  Regularizer regularizer;
  int max_iters = 20000;
  double rel_tol = 1e-9;
  std::optional<double> step_init;  // absent -> 1/L with L from power iterations
  double kkt_tol = 1e-6;
  // Start of the proximal-gradient iteration; absent -> the zero vector.
  std::optional<Vector> theta_init;
};

void validate(const EstimatorConfig& config);

struct RecoveryResult {
  Vector theta_hat;
  std::vector<double> objective_trace;  // non-increasing
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
};

struct FitReport {
  RecoveryResult result;
  double lambda_used = 0.0;
  double tau_used = 0.0;  // 0 when truncation is None
  Truncation truncation_kind = Truncation::None;
  double wall_time_ms = 0.0;
};

}  // namespace trls

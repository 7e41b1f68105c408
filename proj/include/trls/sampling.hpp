#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include "trls/rng.hpp"
#include "trls/types.hpp"

namespace trls {

// ---------------------------------------------------------------------------
// Design specifications

enum class Radial { GaussianChi, Student, Pareto, ConstantRadius };

/// Elliptical design x = mu * B * U with U uniform on the unit sphere,
/// mu drawn from the radial law, mu independent of U, Sigma = B B^T.
/// With `normalize_radial` the radial law is rescaled so E[mu^2] = d and
/// cov(x) = Sigma exactly.
struct EllipticalSpec {
  Matrix sigma_factor;  // B, d x d, full rank
  Radial radial = Radial::GaussianChi;
  double radial_param = 0.0;  // df (Student) or alpha (Pareto)
  bool normalize_radial = true;

  Index dim() const { return sigma_factor.rows(); }

  static EllipticalSpec gaussian(Matrix b) {
    return {std::move(b), Radial::GaussianChi, 0.0, true};
  }
  static EllipticalSpec student(Matrix b, double df, bool normalize = true) {
    if (!(df > 4.0)) throw std::invalid_argument("EllipticalSpec: student radial needs df > 4");
    return {std::move(b), Radial::Student, df, normalize};
  }
  static EllipticalSpec pareto(Matrix b, double alpha, bool normalize = true) {
    if (!(alpha > 4.0)) throw std::invalid_argument("EllipticalSpec: pareto radial needs alpha > 4");
    return {std::move(b), Radial::Pareto, alpha, normalize};
  }
  static EllipticalSpec constant_radius(Matrix b) {
    return {std::move(b), Radial::ConstantRadius, 0.0, true};
  }
};

enum class EntryDist { Gaussian, StudentT, SymmetricPareto };

/// Design with i.i.d. entries, for the general (non-elliptical) sparse
/// recovery setting. StudentT needs df > 2 and SymmetricPareto alpha > 2 so
/// the covariance exists.
struct IidEntrySpec {
  Index dim = 0;
  EntryDist dist = EntryDist::Gaussian;
  double param = 0.0;  // df or alpha

  static IidEntrySpec gaussian(Index d) { return {d, EntryDist::Gaussian, 0.0}; }
  static IidEntrySpec student_t(Index d, double df) {
    if (!(df > 2.0)) throw std::invalid_argument("IidEntrySpec: student entries need df > 2");
    return {d, EntryDist::StudentT, df};
  }
  static IidEntrySpec symmetric_pareto(Index d, double alpha) {
    if (!(alpha > 2.0)) throw std::invalid_argument("IidEntrySpec: pareto entries need alpha > 2");
    return {d, EntryDist::SymmetricPareto, alpha};
  }
};

using DesignSpec = std::variant<EllipticalSpec, IidEntrySpec>;

Index design_dim(const DesignSpec& spec);

/// Population covariance of one design row.
Matrix design_covariance(const DesignSpec& spec);

/// E[mu^2] of the radial law under the spec (equals d when normalized).
double radial_second_moment(const EllipticalSpec& spec);

// ---------------------------------------------------------------------------
// Samplers (pure given (spec, seed); rows are independent draws)

Matrix sample_elliptical(const EllipticalSpec& spec, Index n, std::uint64_t seed);
Matrix sample_iid_entries(const IidEntrySpec& spec, Index n, std::uint64_t seed);
Matrix sample_design(const DesignSpec& spec, Index n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Signals

enum class SignalMode { UnitEntries, Random };

/// s-sparse unit vector. UnitEntries puts +-1/sqrt(s) on the first s
/// coordinates; Random draws the support uniformly and N(0,1) magnitudes,
/// then normalizes.
Vector make_sparse_signal(Index d, Index s, SignalMode mode, std::uint64_t seed);

/// Rank-`rank` m x n matrix with unit Frobenius norm (product of Gaussian
/// factors).
Matrix make_low_rank_signal(Index m, Index n, Index rank, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Dataset synthesis

/// Draws X from the design spec and fills y_i = f(<x_i, theta*>, xi_i).
/// In single-index mode theta* is first rescaled so ||Sigma^{1/2} theta*|| = 1.
/// The returned GroundTruth carries the (possibly rescaled) theta* and the
/// scaling constant eta -- analytic where known, Monte-Carlo otherwise.
/// Throws DegenerateProblem when the link makes eta indistinguishable from
/// zero.
std::pair<SampleSet, GroundTruth> synthesize_dataset(const DesignSpec& spec, GroundTruth truth,
                                                     Index n, std::uint64_t seed);

}  // namespace trls

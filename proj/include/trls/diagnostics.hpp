#pragma once

#include <cstdint>

#include "trls/types.hpp"

namespace trls {

/// Estimated moment bounds of a measurement distribution: kappa_hat is the
/// smallest directional second moment, nu_hat the largest directional
/// fourth moment found (coordinates plus random directions, so a lower
/// bound of the true sup), nu_q_hat the largest q-th marginal norm across
/// coordinates and the response.
struct MomentProfile {
  double kappa_hat = 0.0;
  double nu_hat = 0.0;
  double nu_q_hat = 0.0;
  double q = 0.0;
};

MomentProfile estimate_moments(const Eigen::Ref<const Matrix>& x,
                               const Eigen::Ref<const Vector>& y, double q, Index n_dirs = 256,
                               std::uint64_t seed = 0x6d6f6d656e747331ULL);

struct SmallBallParams {
  double delta = 0.0;
  double q_prob = 0.0;
};

/// delta = 0.5 sqrt(kappa/2), Q = kappa^2 / (8 nu). Q <= 1/8 always.
SmallBallParams small_ball_params(const MomentProfile& profile);

/// Fraction of rows with |<x_i, v>| >= threshold, for unit v.
double empirical_small_ball(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& v,
                            double threshold);

// ---------------------------------------------------------------------------
// Gaussian mean width

struct WidthSet {
  enum class Kind { L2Ball, L1Ball, L1L2Intersection, NuclearBall };
  Kind kind = Kind::L2Ball;
  double radius_l2 = 0.0;   // r
  double radius_psi = 0.0;  // rho
  Index m = 0, n = 0;       // NuclearBall shape, m*n = d

  static WidthSet l2_ball(double r) { return {Kind::L2Ball, r, 0.0, 0, 0}; }
  static WidthSet l1_ball(double rho) { return {Kind::L1Ball, 0.0, rho, 0, 0}; }
  static WidthSet intersection(double rho, double r) {
    return {Kind::L1L2Intersection, r, rho, 0, 0};
  }
  static WidthSet nuclear_ball(double rho, Index m, Index n) {
    return {Kind::NuclearBall, 0.0, rho, m, n};
  }
};

/// Monte-Carlo estimate of E sup_{t in T} <g, t> over n_draws standard
/// Gaussian vectors. Support functions: r||g||_2 (L2 ball), rho||g||_inf
/// (l1 ball), rho * sigma_max(G) (nuclear ball), and for the l1/l2
/// intersection the infimal convolution min_{c>=0} rho*c + r*||(|g|-c)+||_2
/// scanned over its breakpoints and refined by golden section.
double gaussian_mean_width(const WidthSet& set, Index d, Index n_draws, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Scaling constant and rates

/// (1/N) sum y_i <x_i, theta*> / (theta*' Sigma theta*): the factor by which
/// population least squares scales theta* under a nonlinear link.
double estimate_eta(const SampleSet& samples, const GroundTruth& truth,
                    const Eigen::Ref<const Matrix>& sigma);

enum class RateKind { SparseL2, SparseL1, LowRankL2, LowRankNuclear };

/// Up-to-constant error-rate shapes. Sparse kinds use the ambient dimension
/// d; low-rank kinds use the matrix shape (m, n); s is sparsity or rank.
double theoretical_rate(RateKind kind, Index s, Index n_samples, Index d, Index m = 0,
                        Index n = 0);

// ---------------------------------------------------------------------------
// Recovery scoring

struct ErrorMetrics {
  double l2 = 0.0;             // ||theta_hat - eta theta*||_2
  double psi = 0.0;            // Psi(theta_hat - eta theta*), l1 or nuclear
  double cosine = 0.0;         // alignment of theta_hat with theta*; 0 if theta_hat = 0
};

ErrorMetrics error_metrics(const Eigen::Ref<const Vector>& theta_hat, const GroundTruth& truth);

}  // namespace trls

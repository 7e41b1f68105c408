#pragma once

#include <optional>

#include "trls/core.hpp"
#include "trls/types.hpp"

namespace trls {

/// Distance from -grad of the smooth part to lambda * dPsi(theta), the
/// optimality certificate of the regularized program; zero certifies a
/// minimizer. For L1 this is the max over coordinates of
/// max(|g_j| - lambda, 0) on the zero set and |g_j + lambda sign(theta_j)|
/// off it; for Nuclear the analogous spectral condition split between the
/// singular subspace of theta and its complement.
double kkt_residual(const SampleSet& truncated, const Eigen::Ref<const Vector>& theta,
                    const EstimatorConfig& config);

/// Solve argmin (1/N) sum (<x~_i, theta> - y~_i)^2 + lambda Psi(theta):
/// applies the configured truncation and response clip, then runs monotone
/// accelerated proximal gradient (momentum restart on objective increase)
/// with backtracking line search. The objective trace is non-increasing by
/// construction. Converged means the relative objective change dropped
/// below rel_tol on two consecutive iterations and the KKT residual is
/// below kkt_tol.
FitReport fit(const SampleSet& samples, const EstimatorConfig& config);

/// Sparse-recovery front end: entrywise truncation and response clip at
/// tau = tau_sparse(N, d), Psi = l1, lambda = lambda_scale * sqrt(ln(ed)/N).
/// s_hint is accepted for symmetry with the single-index front end; the
/// sparse threshold and penalty do not depend on it.
FitReport fit_thresholded_lasso(const SampleSet& raw, std::optional<Index> s_hint,
                                double lambda_scale);

/// Single-index front end: norm-based truncation and response clip at
/// tau = tau_elliptical(N, q), q > 4 being the moment order believed to
/// hold. lambda = lambda_scale * sqrt(ln(ed/s)/N) for l1 (s from s_hint,
/// default 1) or lambda_scale * sqrt(m+n) / sqrt(N) for nuclear.
FitReport fit_single_index(const SampleSet& raw, double q, const Regularizer& reg,
                           double lambda_scale, std::optional<Index> s_hint = {});

}  // namespace trls

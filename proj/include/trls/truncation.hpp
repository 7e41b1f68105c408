#pragma once

#include <Eigen/Core>

#include "trls/types.hpp"

namespace trls {

/// Threshold (N / ln(e*d))^{1/4} for entrywise truncation in the sparse
/// recovery setting.
double tau_sparse(Index n_samples, Index dim);

/// Threshold N^{2/(q+4)} for norm-based truncation under a q-th moment
/// bound, q > 4.
double tau_elliptical(Index n_samples, double q);

/// Clip every entry: sign(x) * min(|x|, tau).
Matrix entrywise_truncate(const Eigen::Ref<const Matrix>& x, double tau);

/// Rescale each row onto the ball of radius sqrt(d)*tau, keeping its
/// direction: x_i * min(1, sqrt(d)*tau / ||x_i||_2). Zero rows stay zero.
Matrix norm_truncate(const Eigen::Ref<const Matrix>& x, double tau);

/// Clip responses: sign(y) * min(|y|, tau). sign(0) = 0.
Vector clip_response(const Eigen::Ref<const Vector>& y, double tau);

/// Dispatch on the scheme; None returns the input unchanged.
Matrix apply_truncation(const Eigen::Ref<const Matrix>& x, const TruncationScheme& scheme);

}  // namespace trls

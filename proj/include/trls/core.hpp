#pragma once

#include <Eigen/Core>

#include "trls/types.hpp"

namespace trls {

/// Norm value Psi(theta): sum of absolute entries (L1) or sum of singular
/// values of the row-major reshaped matrix (Nuclear).
double psi_value(const Regularizer& reg, const Eigen::Ref<const Vector>& theta);

/// Proximal map argmin_u 0.5*||u - v||^2 + t*Psi(u). Componentwise
/// soft-threshold for L1, singular-value soft-threshold for Nuclear.
Vector psi_prox(const Regularizer& reg, const Eigen::Ref<const Vector>& v, double t);

/// (1/N) sum_i (<x_i, theta> - y_i)^2 + lambda * Psi(theta), evaluated on
/// samples that have already been truncated.
double objective(const SampleSet& samples, const Eigen::Ref<const Vector>& theta,
                 const EstimatorConfig& config);

/// View a flattened parameter as its m x n matrix form (row-major).
Matrix as_matrix(const Regularizer& reg, const Eigen::Ref<const Vector>& theta);

/// Flatten an m x n matrix row-major into a parameter vector.
Vector as_vector(const Eigen::Ref<const Matrix>& mat);

}  // namespace trls

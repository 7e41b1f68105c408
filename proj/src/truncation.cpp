#include "trls/truncation.hpp"

#include <cmath>

namespace trls {

double tau_sparse(Index n_samples, Index dim) {
  if (n_samples < 1 || dim < 1)
    throw std::invalid_argument("tau_sparse: N and d must be positive");
  // ln(e*d) = 1 + ln(d)
  const double denom = 1.0 + std::log(static_cast<double>(dim));
  return std::pow(static_cast<double>(n_samples) / denom, 0.25);
}

double tau_elliptical(Index n_samples, double q) {
  if (n_samples < 1) throw std::invalid_argument("tau_elliptical: N must be positive");
  if (!(q > 4.0)) throw std::invalid_argument("tau_elliptical: q must be > 4");
  return std::pow(static_cast<double>(n_samples), 2.0 / (q + 4.0));
}

Matrix entrywise_truncate(const Eigen::Ref<const Matrix>& x, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("entrywise_truncate: tau must be > 0");
  return x.array().min(tau).max(-tau);
}

Matrix norm_truncate(const Eigen::Ref<const Matrix>& x, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("norm_truncate: tau must be > 0");
  const double radius = std::sqrt(static_cast<double>(x.cols())) * tau;
  Matrix out = x;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > radius) out.row(i) *= radius / norm;
  }
  return out;
}

Vector clip_response(const Eigen::Ref<const Vector>& y, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("clip_response: tau must be > 0");
  return y.array().min(tau).max(-tau);
}

Matrix apply_truncation(const Eigen::Ref<const Matrix>& x, const TruncationScheme& scheme) {
  switch (scheme.kind) {
    case Truncation::None:
      return x;
    case Truncation::Entrywise:
      return entrywise_truncate(x, scheme.tau);
    case Truncation::NormBased:
      return norm_truncate(x, scheme.tau);
  }
  throw std::logic_error("apply_truncation: unreachable");
}

}  // namespace trls

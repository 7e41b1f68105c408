#include "trls/core.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace trls {

namespace {

void check_size(const Regularizer& reg, Index size) {
  if (reg.kind == Norm::Nuclear && size != reg.rows * reg.cols)
    throw std::invalid_argument("regularizer: parameter length does not equal m*n");
}

}  // namespace

double apply_link(const LinkFunction& link, double u) {
  switch (link.kind) {
    case Link::Linear:
      return u;
    case Link::Sign:
      return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    case Link::Cubic:
      return u * u * u;
    case Link::Custom:
      if (link.custom_tag == "square") return u * u;
      if (link.custom_tag == "abs") return std::abs(u);
      throw std::invalid_argument("LinkFunction: unknown custom tag '" + link.custom_tag + "'");
  }
  throw std::logic_error("apply_link: unreachable");
}

void validate(const EstimatorConfig& config) {
  if (!(config.lambda >= 0.0)) throw std::invalid_argument("EstimatorConfig: lambda must be >= 0");
  if (!(config.rel_tol > 0.0)) throw std::invalid_argument("EstimatorConfig: rel_tol must be > 0");
  if (config.max_iters < 1) throw std::invalid_argument("EstimatorConfig: max_iters must be >= 1");
  if (config.step_init && !(*config.step_init > 0.0))
    throw std::invalid_argument("EstimatorConfig: step_init must be > 0");
  if (config.response_clip && !(*config.response_clip >= 0.0))
    throw std::invalid_argument("EstimatorConfig: response_clip must be >= 0");
}

Matrix as_matrix(const Regularizer& reg, const Eigen::Ref<const Vector>& theta) {
  check_size(reg, theta.size());
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(theta.data(), reg.rows, reg.cols);
}

Vector as_vector(const Eigen::Ref<const Matrix>& mat) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor rm = mat;
  return Eigen::Map<const Vector>(rm.data(), rm.size());
}

double psi_value(const Regularizer& reg, const Eigen::Ref<const Vector>& theta) {
  if (reg.kind == Norm::L1) return theta.lpNorm<1>();
  Matrix m = as_matrix(reg, theta);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Vector psi_prox(const Regularizer& reg, const Eigen::Ref<const Vector>& v, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("psi_prox: t must be >= 0");
  if (reg.kind == Norm::L1) {
    Vector out(v.size());
    for (Index j = 0; j < v.size(); ++j) {
      const double mag = std::abs(v[j]) - t;
      out[j] = mag > 0.0 ? (v[j] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
  }
  Matrix m = as_matrix(reg, v);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector sv = (svd.singularValues().array() - t).max(0.0);
  Matrix shrunk = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  return as_vector(shrunk);
}

double objective(const SampleSet& samples, const Eigen::Ref<const Vector>& theta,
                 const EstimatorConfig& config) {
  if (samples.dim() != theta.size())
    throw std::invalid_argument("objective: theta length does not match design");
  const Vector residual = samples.design * theta - samples.response;
  const double fit = residual.squaredNorm() / static_cast<double>(samples.n_samples());
  return fit + config.lambda * psi_value(config.regularizer, theta);
}

}  // namespace trls

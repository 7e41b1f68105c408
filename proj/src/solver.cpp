#include "trls/solver.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <cmath>

#include "trls/rng.hpp"
#include "trls/truncation.hpp"

namespace trls {

namespace {

constexpr int kPowerIterations = 50;

// Largest eigenvalue of (2/N) X^T X by power iteration, matrix-free.
double lipschitz_estimate(const Matrix& x) {
  const double n = static_cast<double>(x.rows());
  Rng rng(0x11b5c41f2ULL);
  Vector v(x.cols());
  for (Index j = 0; j < v.size(); ++j) v[j] = rng.normal();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector w = (2.0 / n) * (x.transpose() * (x * v));
    lambda = w.norm();
    if (!(lambda > 0.0)) return 0.0;
    v = w / lambda;
  }
  return lambda;
}

double smooth_value(const Matrix& x, const Vector& y, const Vector& theta) {
  return (x * theta - y).squaredNorm() / static_cast<double>(x.rows());
}

Vector smooth_gradient(const Matrix& x, const Vector& y, const Vector& theta) {
  return (2.0 / static_cast<double>(x.rows())) * (x.transpose() * (x * theta - y));
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double kkt_residual(const SampleSet& truncated, const Eigen::Ref<const Vector>& theta,
                    const EstimatorConfig& config) {
  if (truncated.dim() != theta.size())
    throw std::invalid_argument("kkt_residual: theta length does not match design");
  const Vector g = smooth_gradient(truncated.design, truncated.response, theta);
  const double lambda = config.lambda;

  if (config.regularizer.kind == Norm::L1) {
    double res = 0.0;
    for (Index j = 0; j < theta.size(); ++j) {
      double dist;
      if (theta[j] == 0.0) {
        dist = std::max(std::abs(g[j]) - lambda, 0.0);
      } else {
        dist = std::abs(g[j] + lambda * (theta[j] > 0.0 ? 1.0 : -1.0));
      }
      res = std::max(res, dist);
    }
    return res;
  }

  // Nuclear: -G must equal lambda*U V^T on the singular subspace of theta and
  // have spectral norm <= lambda on its complement.
  const Regularizer& reg = config.regularizer;
  const Matrix grad = as_matrix(reg, g);
  const Matrix th = as_matrix(reg, theta);
  Eigen::JacobiSVD<Matrix> svd(th, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10) ++rank;

  const Matrix m = -grad - lambda * svd.matrixU().leftCols(rank) *
                               svd.matrixV().leftCols(rank).transpose();
  Matrix free_part = m;
  if (rank > 0) {
    const Matrix pu = svd.matrixU().leftCols(rank) * svd.matrixU().leftCols(rank).transpose();
    const Matrix pv = svd.matrixV().leftCols(rank) * svd.matrixV().leftCols(rank).transpose();
    free_part = (Matrix::Identity(reg.rows, reg.rows) - pu) * m *
                (Matrix::Identity(reg.cols, reg.cols) - pv);
  }
  const Matrix fixed_part = m - free_part;
  const double on_support = spectral_norm(fixed_part);
  const double off_support = std::max(spectral_norm(free_part) - lambda, 0.0);
  return std::max(on_support, off_support);
}

FitReport fit(const SampleSet& samples, const EstimatorConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  Matrix xt = apply_truncation(samples.design, config.truncation);
  Vector yt = config.response_clip ? clip_response(samples.response, *config.response_clip)
                                   : samples.response;
  const SampleSet truncated(std::move(xt), std::move(yt));
  const Matrix& x = truncated.design;
  const Vector& y = truncated.response;
  const Index d = truncated.dim();
  if (config.regularizer.kind == Norm::Nuclear &&
      d != config.regularizer.rows * config.regularizer.cols)
    throw std::invalid_argument("fit: design dim does not equal m*n of the nuclear regularizer");

  const double lipschitz = lipschitz_estimate(x);
  if (!(lipschitz > 0.0))
    throw DegenerateProblem("fit: truncated design has zero Gram spectrum");

  double step = config.step_init.value_or(1.0 / lipschitz);
  Vector theta = config.theta_init.value_or(Vector::Zero(d));
  if (theta.size() != d) throw std::invalid_argument("fit: theta_init length does not match");

  const auto full_objective = [&](const Vector& t, double smooth) {
    return smooth + config.lambda * psi_value(config.regularizer, t);
  };

  double obj = full_objective(theta, smooth_value(x, y, theta));
  if (!std::isfinite(obj)) throw NumericalError("fit: non-finite objective at iteration 0");
  RecoveryResult result;
  result.objective_trace.push_back(obj);

  Vector accel = theta;  // extrapolated point
  double momentum = 1.0;
  int flat_streak = 0;
  bool converged = false;
  int iter = 0;

  // One backtracked proximal step from `from`; returns the candidate and its
  // smooth value, shrinking `step` until sufficient decrease holds.
  const auto prox_step = [&](const Vector& from) {
    const double f_from = smooth_value(x, y, from);
    const Vector grad = smooth_gradient(x, y, from);
    while (true) {
      Vector cand = psi_prox(config.regularizer, from - step * grad,
                             step * config.lambda);
      const Vector diff = cand - from;
      const double f_cand = smooth_value(x, y, cand);
      const double bound =
          f_from + grad.dot(diff) + diff.squaredNorm() / (2.0 * step);
      // Slack is relative so that rescaled problems take identical paths.
      const double slack = 1e-12 * std::max(std::abs(f_from), std::abs(f_cand));
      if (f_cand <= bound + slack) return std::make_pair(cand, f_cand);
      step *= 0.5;
      if (step < 1e-300) throw NumericalError("fit: backtracking step underflow at iteration " +
                                              std::to_string(iter));
    }
  };

  for (iter = 1; iter <= config.max_iters; ++iter) {
    auto [cand, f_cand] = prox_step(accel);
    double cand_obj = full_objective(cand, f_cand);
    // Ties within rounding noise count as descent; otherwise iterates freeze
    // once the true decrease drops below the fp resolution of the objective.
    const auto noise = [&](double a) { return 1e-14 * std::max(std::abs(obj), std::abs(a)); };

    if (cand_obj > obj + noise(cand_obj)) {
      // Accelerated candidate overshoots: restart momentum and step from the
      // last accepted iterate, which cannot increase the objective.
      momentum = 1.0;
      std::tie(cand, f_cand) = prox_step(theta);
      cand_obj = full_objective(cand, f_cand);
      if (cand_obj > obj + noise(cand_obj)) {
        cand = theta;
        cand_obj = obj;
      }
    }

    if (!std::isfinite(cand_obj))
      throw NumericalError("fit: non-finite objective at iteration " + std::to_string(iter));

    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    accel = cand + ((momentum - 1.0) / next_momentum) * (cand - theta);
    momentum = next_momentum;

    // The trace records the monotone envelope min(F_k); it can sit below the
    // candidate value by at most the rounding-noise allowance above.
    const double recorded = std::min(cand_obj, obj);
    const double rel_change =
        std::abs(obj - recorded) / (std::abs(obj) > 0.0 ? std::abs(obj) : 1.0);
    theta = cand;
    obj = recorded;
    result.objective_trace.push_back(obj);

    flat_streak = rel_change < config.rel_tol ? flat_streak + 1 : 0;
    if (flat_streak >= 2) {
      result.kkt_residual = kkt_residual(truncated, theta, config);
      if (result.kkt_residual < config.kkt_tol) {
        converged = true;
        break;
      }
    }
  }

  result.theta_hat = theta;
  result.iterations = std::min(iter, config.max_iters);
  result.converged = converged;
  if (!converged) result.kkt_residual = kkt_residual(truncated, theta, config);

  FitReport report;
  report.result = std::move(result);
  report.lambda_used = config.lambda;
  report.tau_used = config.truncation.kind == Truncation::None ? 0.0 : config.truncation.tau;
  report.truncation_kind = config.truncation.kind;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

FitReport fit_thresholded_lasso(const SampleSet& raw, std::optional<Index> s_hint,
                                double lambda_scale) {
  (void)s_hint;
  if (!(lambda_scale > 0.0))
    throw std::invalid_argument("fit_thresholded_lasso: lambda_scale must be > 0");
  const Index n = raw.n_samples();
  const Index d = raw.dim();
  const double tau = tau_sparse(n, d);

  EstimatorConfig config;
  config.truncation = TruncationScheme::entrywise(tau);
  config.response_clip = tau;
  config.regularizer = Regularizer::l1();
  config.lambda = lambda_scale *
                  std::sqrt((1.0 + std::log(static_cast<double>(d))) / static_cast<double>(n));
  return fit(raw, config);
}

FitReport fit_single_index(const SampleSet& raw, double q, const Regularizer& reg,
                           double lambda_scale, std::optional<Index> s_hint) {
  if (!(lambda_scale > 0.0))
    throw std::invalid_argument("fit_single_index: lambda_scale must be > 0");
  const Index n = raw.n_samples();
  const Index d = raw.dim();
  const double tau = tau_elliptical(n, q);

  EstimatorConfig config;
  config.truncation = TruncationScheme::norm_based(tau);
  config.response_clip = tau;
  config.regularizer = reg;
  if (reg.kind == Norm::L1) {
    const double s = static_cast<double>(std::max<Index>(s_hint.value_or(1), 1));
    config.lambda = lambda_scale * std::sqrt((1.0 + std::log(static_cast<double>(d) / s)) /
                                             static_cast<double>(n));
  } else {
    config.lambda = lambda_scale * std::sqrt(static_cast<double>(reg.rows + reg.cols)) /
                    std::sqrt(static_cast<double>(n));
  }
  return fit(raw, config);
}

}  // namespace trls

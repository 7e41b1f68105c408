#include "trls/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

#include "trls/core.hpp"
#include "trls/rng.hpp"

namespace trls {

namespace {

double fourth_moment_along(const Eigen::Ref<const Matrix>& x, const Vector& v) {
  return (x * v).array().pow(4).mean();
}

// rho*c + r*||(|g| - c)+||_2 evaluated from the sorted |g| and suffix sums.
struct ClipObjective {
  std::vector<double> sorted;   // |g| ascending
  std::vector<double> suffix1;  // suffix sums of sorted
  std::vector<double> suffix2;  // suffix sums of sorted^2
  double rho, r;

  double operator()(double c) const {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), c);
    const size_t k = static_cast<size_t>(it - sorted.begin());
    const size_t cnt = sorted.size() - k;
    const double s1 = suffix1[k];
    const double s2 = suffix2[k];
    const double sq = std::max(0.0, s2 - 2.0 * c * s1 + c * c * static_cast<double>(cnt));
    return rho * c + r * std::sqrt(sq);
  }
};

double golden_section(const ClipObjective& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

// Support function of the l1-ball(rho) intersected with the l2-ball(r):
// min over the clip level c of rho*c + r*||(|g| - c)+||_2. Convex in c with
// breakpoints at the |g_j|; scan them, then refine around the best.
double intersection_support(const Vector& g, double rho, double r) {
  ClipObjective f;
  f.rho = rho;
  f.r = r;
  f.sorted.resize(static_cast<size_t>(g.size()));
  for (Index j = 0; j < g.size(); ++j) f.sorted[static_cast<size_t>(j)] = std::abs(g[j]);
  std::sort(f.sorted.begin(), f.sorted.end());
  const size_t n = f.sorted.size();
  f.suffix1.assign(n + 1, 0.0);
  f.suffix2.assign(n + 1, 0.0);
  for (size_t k = n; k-- > 0;) {
    f.suffix1[k] = f.suffix1[k + 1] + f.sorted[k];
    f.suffix2[k] = f.suffix2[k + 1] + f.sorted[k] * f.sorted[k];
  }

  double best = f(0.0);
  size_t best_idx = 0;  // 0 = breakpoint c=0, j+1 = breakpoint sorted[j]
  for (size_t j = 0; j < n; ++j) {
    const double val = f(f.sorted[j]);
    if (val < best) {
      best = val;
      best_idx = j + 1;
    }
  }
  const auto breakpoint = [&](size_t idx) { return idx == 0 ? 0.0 : f.sorted[idx - 1]; };
  const double lo = breakpoint(best_idx > 0 ? best_idx - 1 : 0);
  const double hi = breakpoint(std::min(best_idx + 1, n));
  if (hi > lo) best = std::min(best, golden_section(f, lo, hi));
  return best;
}

}  // namespace

MomentProfile estimate_moments(const Eigen::Ref<const Matrix>& x,
                               const Eigen::Ref<const Vector>& y, double q, Index n_dirs,
                               std::uint64_t seed) {
  if (!(q >= 2.0)) throw std::invalid_argument("estimate_moments: q must be >= 2");
  if (x.rows() < 1) throw std::invalid_argument("estimate_moments: empty sample");
  const Index n = x.rows();
  const Index d = x.cols();

  // Second-moment matrix (x is centered by assumption).
  const Matrix gram = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("estimate_moments: eigendecomposition failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-8 * std::max(1.0, eig.eigenvalues().maxCoeff()))
    throw std::runtime_error("estimate_moments: second-moment matrix not PSD");

  MomentProfile profile;
  profile.q = q;
  profile.kappa_hat = std::max(min_eig, 0.0);

  double nu = 0.0;
  for (Index j = 0; j < d; ++j) nu = std::max(nu, x.col(j).array().pow(4).mean());
  Rng rng(seed);
  Vector v(d);
  for (Index k = 0; k < n_dirs; ++k) {
    double norm = 0.0;
    do {
      for (Index j = 0; j < d; ++j) v[j] = rng.normal();
      norm = v.norm();
    } while (!(norm > 0.0));
    v /= norm;
    nu = std::max(nu, fourth_moment_along(x, v));
  }
  profile.nu_hat = nu;

  double nu_q = std::pow(y.array().abs().pow(q).mean(), 1.0 / q);
  for (Index j = 0; j < d; ++j)
    nu_q = std::max(nu_q, std::pow(x.col(j).array().abs().pow(q).mean(), 1.0 / q));
  profile.nu_q_hat = nu_q;
  return profile;
}

SmallBallParams small_ball_params(const MomentProfile& profile) {
  if (!(profile.kappa_hat > 0.0))
    throw DegenerateProblem("small_ball_params: zero directional second moment");
  if (!(profile.nu_hat > 0.0))
    throw std::invalid_argument("small_ball_params: nu_hat must be > 0");
  SmallBallParams p;
  p.delta = 0.5 * std::sqrt(profile.kappa_hat / 2.0);
  p.q_prob = profile.kappa_hat * profile.kappa_hat / (8.0 * profile.nu_hat);
  return p;
}

double empirical_small_ball(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& v,
                            double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("empirical_small_ball: threshold < 0");
  if (std::abs(v.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("empirical_small_ball: v must be a unit vector");
  const Vector proj = x * v;
  Index count = 0;
  for (Index i = 0; i < proj.size(); ++i)
    if (std::abs(proj[i]) >= threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(proj.size());
}

double gaussian_mean_width(const WidthSet& set, Index d, Index n_draws, std::uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("gaussian_mean_width: n_draws must be >= 1");
  if (d < 1) throw std::invalid_argument("gaussian_mean_width: d must be >= 1");
  if (set.kind == WidthSet::Kind::NuclearBall && set.m * set.n != d)
    throw std::invalid_argument("gaussian_mean_width: nuclear shape does not match d");

  Rng rng(seed);
  Vector g(d);
  double sum = 0.0;
  for (Index k = 0; k < n_draws; ++k) {
    for (Index j = 0; j < d; ++j) g[j] = rng.normal();
    switch (set.kind) {
      case WidthSet::Kind::L2Ball:
        sum += set.radius_l2 * g.norm();
        break;
      case WidthSet::Kind::L1Ball:
        sum += set.radius_psi * g.lpNorm<Eigen::Infinity>();
        break;
      case WidthSet::Kind::L1L2Intersection:
        sum += intersection_support(g, set.radius_psi, set.radius_l2);
        break;
      case WidthSet::Kind::NuclearBall: {
        const Matrix gm = as_matrix(Regularizer::nuclear(set.m, set.n), g);
        Eigen::JacobiSVD<Matrix> svd(gm);
        sum += set.radius_psi * svd.singularValues()(0);
        break;
      }
    }
  }
  return sum / static_cast<double>(n_draws);
}

double estimate_eta(const SampleSet& samples, const GroundTruth& truth,
                    const Eigen::Ref<const Matrix>& sigma) {
  const Vector& theta = truth.theta_star;
  if (samples.dim() != theta.size())
    throw std::invalid_argument("estimate_eta: theta* length does not match design");
  const double denom = theta.dot(sigma * theta);
  if (!(denom > 0.0)) throw DegenerateProblem("estimate_eta: theta*' Sigma theta* is zero");
  const double numer = samples.response.dot(samples.design * theta) /
                       static_cast<double>(samples.n_samples());
  return numer / denom;
}

double theoretical_rate(RateKind kind, Index s, Index n_samples, Index d, Index m, Index n) {
  if (s < 1 || n_samples < 1) throw std::invalid_argument("theoretical_rate: bad arguments");
  const double nn = static_cast<double>(n_samples);
  const double ss = static_cast<double>(s);
  switch (kind) {
    case RateKind::SparseL2: {
      if (d < 1) throw std::invalid_argument("theoretical_rate: d required");
      const double loged = 1.0 + std::log(static_cast<double>(d));
      return std::sqrt(ss * loged / nn);
    }
    case RateKind::SparseL1: {
      if (d < 1) throw std::invalid_argument("theoretical_rate: d required");
      const double loged = 1.0 + std::log(static_cast<double>(d));
      return ss * std::sqrt(loged / nn);
    }
    case RateKind::LowRankL2: {
      if (m < 1 || n < 1) throw std::invalid_argument("theoretical_rate: (m, n) required");
      return std::sqrt(ss * static_cast<double>(m + n) / nn);
    }
    case RateKind::LowRankNuclear: {
      if (m < 1 || n < 1) throw std::invalid_argument("theoretical_rate: (m, n) required");
      return ss * std::sqrt(static_cast<double>(m + n) / nn);
    }
  }
  throw std::logic_error("theoretical_rate: unreachable");
}

ErrorMetrics error_metrics(const Eigen::Ref<const Vector>& theta_hat, const GroundTruth& truth) {
  if (theta_hat.size() != truth.theta_star.size())
    throw std::invalid_argument("error_metrics: dimension mismatch");
  const Vector diff = theta_hat - truth.eta * truth.theta_star;
  ErrorMetrics metrics;
  metrics.l2 = diff.norm();
  const Regularizer reg = truth.matrix_shape
                              ? Regularizer::nuclear(truth.matrix_shape->first,
                                                     truth.matrix_shape->second)
                              : Regularizer::l1();
  metrics.psi = psi_value(reg, diff);
  const double hat_norm = theta_hat.norm();
  const double star_norm = truth.theta_star.norm();
  metrics.cosine = (hat_norm > 0.0 && star_norm > 0.0)
                       ? theta_hat.dot(truth.theta_star) / (hat_norm * star_norm)
                       : 0.0;
  return metrics;
}

}  // namespace trls

#include "trls/sampling.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trls/core.hpp"

namespace trls {

namespace {

constexpr std::uint64_t kDesignStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kEtaStream = 3;

void require_full_rank(const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
    throw std::invalid_argument("EllipticalSpec: sigma_factor is rank deficient");
}

double radial_variance_scale(const EllipticalSpec& spec) {
  // Multiplier c such that E[mu^2] = c * d for the configured law.
  if (spec.normalize_radial) return 1.0;
  switch (spec.radial) {
    case Radial::GaussianChi:
    case Radial::ConstantRadius:
      return 1.0;
    case Radial::Student:
      return spec.radial_param / (spec.radial_param - 2.0);
    case Radial::Pareto:
      return spec.radial_param / (spec.radial_param - 2.0);
  }
  throw std::logic_error("radial_variance_scale: unreachable");
}

double draw_radius(const EllipticalSpec& spec, Index d, Rng& rng) {
  const double dd = static_cast<double>(d);
  switch (spec.radial) {
    case Radial::GaussianChi:
      // mu^2 ~ chi^2_d; E[mu^2] = d already.
      return std::sqrt(rng.chi_square(dd));
    case Radial::Student: {
      const double df = spec.radial_param;
      const double num = rng.chi_square(dd);
      const double den = rng.chi_square(df);
      // normalized: mu^2 = (df-2) chi2_d / chi2_df, E[mu^2] = d.
      const double scale = spec.normalize_radial ? (df - 2.0) : df;
      return std::sqrt(scale * num / den);
    }
    case Radial::Pareto: {
      const double alpha = spec.radial_param;
      const double p = rng.pareto(alpha);
      const double scale =
          spec.normalize_radial ? std::sqrt(dd * (alpha - 2.0) / alpha) : std::sqrt(dd);
      return scale * p;
    }
    case Radial::ConstantRadius:
      return std::sqrt(dd);
  }
  throw std::logic_error("draw_radius: unreachable");
}

double draw_entry(const IidEntrySpec& spec, Rng& rng) {
  switch (spec.dist) {
    case EntryDist::Gaussian:
      return rng.normal();
    case EntryDist::StudentT:
      return rng.student_t(spec.param);
    case EntryDist::SymmetricPareto: {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return sign * rng.pareto(spec.param);
    }
  }
  throw std::logic_error("draw_entry: unreachable");
}

double entry_variance(const IidEntrySpec& spec) {
  switch (spec.dist) {
    case EntryDist::Gaussian:
      return 1.0;
    case EntryDist::StudentT:
      return spec.param / (spec.param - 2.0);
    case EntryDist::SymmetricPareto:
      return spec.param / (spec.param - 2.0);
  }
  throw std::logic_error("entry_variance: unreachable");
}

double draw_noise(const NoiseSpec& noise, Rng& rng) {
  switch (noise.kind) {
    case NoiseKind::None:
      return 0.0;
    case NoiseKind::Gaussian:
      return noise.param * rng.normal();
    case NoiseKind::Student:
      return noise.scale * rng.student_t(noise.param);
    case NoiseKind::Pareto: {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return noise.scale * sign * rng.pareto(noise.param);
    }
  }
  throw std::logic_error("draw_noise: unreachable");
}

// First coordinate of a uniform draw on S^{d-1}: U1 = s * sqrt(a / (a+b))
// with a ~ Gamma(1/2), b ~ Gamma((d-1)/2) and a random sign.
double sphere_coordinate(Index d, Rng& rng) {
  if (d == 1) return rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double a = rng.gamma(0.5, 1.0);
  const double b = rng.gamma(0.5 * static_cast<double>(d - 1), 1.0);
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sign * std::sqrt(a / (a + b));
}

// One scalar draw of <x, theta*> for a unit-index signal, without forming
// the full vector. index_sd = ||Sigma^{1/2} theta*||.
double draw_index_value(const DesignSpec& spec, const Vector& theta, double index_sd, Rng& rng) {
  if (const auto* ell = std::get_if<EllipticalSpec>(&spec)) {
    const double mu = draw_radius(*ell, ell->dim(), rng);
    // <mu B U, theta> = mu * ||B^T theta|| * U1 in distribution, and
    // ||B^T theta|| = index_sd / sqrt(radial scale correction); fold both
    // into index_sd which already reflects the population covariance.
    const double u1 = sphere_coordinate(ell->dim(), rng);
    const double m2 = radial_second_moment(*ell);
    // cov(x) = (E[mu^2]/d) B B^T, so <x,theta> has sd index_sd and equals
    // mu * u1 * ||B^T theta|| with ||B^T theta|| = index_sd * sqrt(d/E[mu^2]).
    const double bt_norm = index_sd * std::sqrt(static_cast<double>(ell->dim()) / m2);
    return mu * u1 * bt_norm;
  }
  const auto& iid = std::get<IidEntrySpec>(spec);
  double u = 0.0;
  for (Index j = 0; j < theta.size(); ++j) {
    if (theta[j] != 0.0) u += theta[j] * draw_entry(iid, rng);
  }
  return u;
}

}  // namespace

Index design_dim(const DesignSpec& spec) {
  if (const auto* ell = std::get_if<EllipticalSpec>(&spec)) return ell->dim();
  return std::get<IidEntrySpec>(spec).dim;
}

double radial_second_moment(const EllipticalSpec& spec) {
  return radial_variance_scale(spec) * static_cast<double>(spec.dim());
}

Matrix design_covariance(const DesignSpec& spec) {
  if (const auto* ell = std::get_if<EllipticalSpec>(&spec)) {
    // cov(mu B U) = (E[mu^2]/d) B B^T
    return radial_variance_scale(*ell) * (ell->sigma_factor * ell->sigma_factor.transpose());
  }
  const auto& iid = std::get<IidEntrySpec>(spec);
  return entry_variance(iid) * Matrix::Identity(iid.dim, iid.dim);
}

Matrix sample_elliptical(const EllipticalSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_elliptical: n must be >= 1");
  require_full_rank(spec.sigma_factor);
  if ((spec.radial == Radial::Student && !(spec.radial_param > 4.0)) ||
      (spec.radial == Radial::Pareto && !(spec.radial_param > 4.0)))
    throw std::invalid_argument("sample_elliptical: radial law needs parameter > 4");

  const Index d = spec.dim();
  Rng rng(seed);
  Matrix x(n, d);
  Vector g(d);
  for (Index i = 0; i < n; ++i) {
    double norm = 0.0;
    do {
      for (Index j = 0; j < d; ++j) g[j] = rng.normal();
      norm = g.norm();
    } while (!(norm > 0.0));
    const double mu = draw_radius(spec, d, rng);
    x.row(i) = (mu / norm) * (spec.sigma_factor * g).transpose();
  }
  return x;
}

Matrix sample_iid_entries(const IidEntrySpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_iid_entries: n must be >= 1");
  if (spec.dim < 1) throw std::invalid_argument("sample_iid_entries: dim must be >= 1");
  Rng rng(seed);
  Matrix x(n, spec.dim);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < spec.dim; ++j) x(i, j) = draw_entry(spec, rng);
  return x;
}

Matrix sample_design(const DesignSpec& spec, Index n, std::uint64_t seed) {
  if (const auto* ell = std::get_if<EllipticalSpec>(&spec)) return sample_elliptical(*ell, n, seed);
  return sample_iid_entries(std::get<IidEntrySpec>(spec), n, seed);
}

Vector make_sparse_signal(Index d, Index s, SignalMode mode, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("make_sparse_signal: s must be >= 1");
  if (s > d) throw std::invalid_argument("make_sparse_signal: s must be <= d");
  Vector theta = Vector::Zero(d);
  if (mode == SignalMode::UnitEntries) {
    const double mag = 1.0 / std::sqrt(static_cast<double>(s));
    for (Index j = 0; j < s; ++j) theta[j] = (j % 2 == 0) ? mag : -mag;
    return theta;
  }
  Rng rng(seed);
  std::vector<Index> idx(d);
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index j = 0; j < s; ++j) {
    std::uniform_int_distribution<Index> pick(j, d - 1);
    std::swap(idx[j], idx[pick(rng.engine())]);
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (Index j = 0; j < s; ++j) {
      theta[idx[j]] = rng.normal();
      norm2 += theta[idx[j]] * theta[idx[j]];
    }
  } while (!(norm2 > 0.0));
  theta /= std::sqrt(norm2);
  return theta;
}

Matrix make_low_rank_signal(Index m, Index n, Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > std::min(m, n))
    throw std::invalid_argument("make_low_rank_signal: rank out of range");
  Rng rng(seed);
  Matrix a;
  double norm = 0.0;
  do {
    Matrix left(m, rank), right(rank, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < rank; ++j) left(i, j) = rng.normal();
    for (Index i = 0; i < rank; ++i)
      for (Index j = 0; j < n; ++j) right(i, j) = rng.normal();
    a = left * right;
    norm = a.norm();
  } while (!(norm > 0.0));
  return a / norm;
}

namespace {

// Scaling constant E[f(u) u] / E[u^2] for the index variable u = <x, theta*>.
// Analytic for the cases with a closed form, Monte-Carlo otherwise.
double fill_eta(const DesignSpec& spec, const GroundTruth& truth, double index_var,
                std::uint64_t seed) {
  const LinkFunction& link = truth.link;
  if (link.kind == Link::Linear) return 1.0;

  const bool gaussian_index =
      (std::holds_alternative<EllipticalSpec>(spec) &&
       std::get<EllipticalSpec>(spec).radial == Radial::GaussianChi) ||
      (std::holds_alternative<IidEntrySpec>(spec) &&
       std::get<IidEntrySpec>(spec).dist == EntryDist::Gaussian);
  const double sd = std::sqrt(index_var);
  if (gaussian_index) {
    // u ~ N(0, index_var): E[sign(u) u] = sd sqrt(2/pi), E[u^4] = 3 var^2.
    if (link.kind == Link::Sign) return std::sqrt(2.0 / M_PI) * sd / index_var;
    if (link.kind == Link::Cubic) return 3.0 * index_var;
    if (link.kind == Link::Custom && (link.custom_tag == "square" || link.custom_tag == "abs"))
      throw DegenerateProblem("synthesize_dataset: even link has scaling constant 0");
  }

  const Index kDraws = 200000;
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (Index i = 0; i < kDraws; ++i) {
    const double u = draw_index_value(spec, truth.theta_star, sd, rng);
    const double m = apply_link(link, u) * u;
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / kDraws;
  const double var = std::max(0.0, sum_sq / kDraws - mean * mean);
  const double se = std::sqrt(var / kDraws);
  const double eta = mean / index_var;
  if (std::abs(mean) <= 6.0 * se)
    throw DegenerateProblem("synthesize_dataset: scaling constant indistinguishable from 0");
  return eta;
}

}  // namespace

std::pair<SampleSet, GroundTruth> synthesize_dataset(const DesignSpec& spec, GroundTruth truth,
                                                     Index n, std::uint64_t seed) {
  const Index d = design_dim(spec);
  if (truth.theta_star.size() != d)
    throw std::invalid_argument("synthesize_dataset: theta* length does not match design dim");
  if (truth.matrix_shape) {
    const auto [m, nn] = *truth.matrix_shape;
    if (m * nn != d)
      throw std::invalid_argument("synthesize_dataset: matrix shape does not match design dim");
  }

  const Matrix sigma = design_covariance(spec);
  double index_var = truth.theta_star.dot(sigma * truth.theta_star);
  if (!(index_var > 0.0)) throw std::invalid_argument("synthesize_dataset: theta* in null space");
  if (truth.single_index) {
    truth.theta_star /= std::sqrt(index_var);
    index_var = 1.0;
  }

  truth.eta = fill_eta(spec, truth, index_var, derive_seed(seed, kEtaStream));

  Matrix x = sample_design(spec, n, derive_seed(seed, kDesignStream));
  Rng noise_rng(derive_seed(seed, kNoiseStream));
  Vector y(n);
  const Vector index = x * truth.theta_star;
  for (Index i = 0; i < n; ++i)
    y[i] = apply_link(truth.link, index[i]) + draw_noise(truth.link.noise, noise_rng);

  return {SampleSet(std::move(x), std::move(y)), std::move(truth)};
}

}  // namespace trls

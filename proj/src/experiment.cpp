#include "trls/experiment.hpp"

#include <json.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "trls/core.hpp"
#include "trls/diagnostics.hpp"
#include "trls/solver.hpp"
#include "trls/truncation.hpp"

namespace trls {

namespace {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

constexpr std::uint64_t kSignalStream = 10;

struct Cell {
  Index n_samples = 0;
  Index dim = 0;  // m*n in low-rank mode
  Index m = 0, n = 0;
  Index sparsity = 0;
};

std::vector<Cell> grid_cells(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  if (spec.mode == ExperimentMode::SingleIndexLowRank) {
    for (Index n_samples : spec.n_grid)
      for (const auto& [m, n] : spec.shape_grid)
        for (Index s : spec.s_grid) cells.push_back({n_samples, m * n, m, n, s});
  } else {
    for (Index n_samples : spec.n_grid)
      for (Index d : spec.d_grid)
        for (Index s : spec.s_grid) cells.push_back({n_samples, d, 0, 0, s});
  }
  return cells;
}

double predicted_rate(const ExperimentSpec& spec, const Cell& cell) {
  if (spec.mode == ExperimentMode::SingleIndexLowRank)
    return theoretical_rate(RateKind::LowRankL2, cell.sparsity, cell.n_samples, 0, cell.m, cell.n);
  return theoretical_rate(RateKind::SparseL2, cell.sparsity, cell.n_samples, cell.dim);
}

MetricRow base_row(const ExperimentSpec& spec, const Cell& cell, int trial,
                   const std::string& estimator) {
  MetricRow row;
  row.mode = spec.mode;
  row.n_samples = cell.n_samples;
  row.dim = cell.dim;
  row.sparsity = cell.sparsity;
  row.trial = trial;
  row.estimator = estimator;
  row.pred_rate = predicted_rate(spec, cell);
  return row;
}

void score_fit(MetricRow& row, const FitReport& report, const GroundTruth& truth) {
  const ErrorMetrics metrics = error_metrics(report.result.theta_hat, truth);
  row.l2 = metrics.l2;
  row.psi_err = metrics.psi;
  row.cosine = metrics.cosine;
  row.iterations = report.result.iterations;
  row.converged = report.result.converged;
  row.kkt = report.result.kkt_residual;
  row.wall_ms = report.wall_time_ms;
}

void score_failure(MetricRow& row, const GroundTruth& truth) {
  const ErrorMetrics metrics = error_metrics(Vector::Zero(truth.theta_star.size()), truth);
  row.l2 = metrics.l2;
  row.psi_err = metrics.psi;
  row.cosine = metrics.cosine;
  row.iterations = 0;
  row.converged = false;
  row.kkt = std::numeric_limits<double>::quiet_NaN();
  row.wall_ms = 0.0;
}

FitReport oracle_ols(const SampleSet& raw, const GroundTruth& truth) {
  std::vector<Index> support;
  for (Index j = 0; j < truth.theta_star.size(); ++j)
    if (truth.theta_star[j] != 0.0) support.push_back(j);
  Matrix xs(raw.n_samples(), static_cast<Index>(support.size()));
  for (size_t k = 0; k < support.size(); ++k) xs.col(static_cast<Index>(k)) = raw.design.col(support[k]);
  const Vector beta = xs.colPivHouseholderQr().solve(raw.response);
  Vector theta = Vector::Zero(raw.dim());
  for (size_t k = 0; k < support.size(); ++k) theta[support[k]] = beta[static_cast<Index>(k)];

  FitReport report;
  report.result.theta_hat = std::move(theta);
  report.result.iterations = 1;
  report.result.converged = true;
  const Vector grad = (2.0 / static_cast<double>(raw.n_samples())) *
                      (xs.transpose() * (xs * beta - raw.response));
  report.result.kkt_residual = grad.size() ? grad.lpNorm<Eigen::Infinity>() : 0.0;
  report.result.objective_trace = {(xs * beta - raw.response).squaredNorm() /
                                   static_cast<double>(raw.n_samples())};
  return report;
}

// One (cell, trial) task: synthesize, run every enabled estimator, score.
std::vector<MetricRow> run_task(const ExperimentSpec& spec, const Cell& cell, int trial) {
  const std::uint64_t cell_key =
      static_cast<std::uint64_t>(cell.n_samples) * 0x100000000ULL +
      static_cast<std::uint64_t>(cell.dim) * 0x10000ULL + static_cast<std::uint64_t>(cell.sparsity);
  const std::uint64_t seed =
      derive_seed(spec.master_seed, cell_key, static_cast<std::uint64_t>(trial));

  GroundTruth truth;
  truth.link = spec.link;
  truth.sparsity = cell.sparsity;
  if (spec.mode == ExperimentMode::SingleIndexLowRank) {
    truth.theta_star =
        as_vector(make_low_rank_signal(cell.m, cell.n, cell.sparsity, derive_seed(seed, kSignalStream)));
    truth.matrix_shape = {{cell.m, cell.n}};
    truth.single_index = true;
  } else {
    truth.theta_star =
        make_sparse_signal(cell.dim, cell.sparsity, spec.signal, derive_seed(seed, kSignalStream));
    truth.single_index = spec.mode == ExperimentMode::SingleIndexSparse;
  }

  const DesignSpec design = spec.design.instantiate(cell.dim);

  std::vector<MetricRow> rows;
  const auto fail_all = [&] {
    std::vector<std::string> tags = {"thresholded"};
    if (spec.baselines.oracle_ols_on_support) tags.push_back("oracle_ols");
    if (spec.baselines.vanilla_lasso) tags.push_back("vanilla_lasso");
    std::sort(tags.begin(), tags.end());
    for (const auto& tag : tags) {
      MetricRow row = base_row(spec, cell, trial, tag);
      score_failure(row, truth);
      rows.push_back(row);
    }
    return rows;
  };

  SampleSet samples(Matrix::Zero(1, 1), Vector::Zero(1));
  try {
    auto [s, t] = synthesize_dataset(design, truth, cell.n_samples, seed);
    samples = std::move(s);
    truth = std::move(t);
  } catch (const DegenerateProblem&) {
    return fail_all();
  }

  double lambda_used = 0.0;
  {
    MetricRow row = base_row(spec, cell, trial, "thresholded");
    try {
      FitReport report;
      if (spec.mode == ExperimentMode::SparseGeneral) {
        report = fit_thresholded_lasso(samples, cell.sparsity, spec.lambda_scale);
      } else {
        const Regularizer reg = spec.mode == ExperimentMode::SingleIndexLowRank
                                    ? Regularizer::nuclear(cell.m, cell.n)
                                    : Regularizer::l1();
        report = fit_single_index(samples, spec.moment_order_q, reg, spec.lambda_scale,
                                  cell.sparsity);
      }
      lambda_used = report.lambda_used;
      score_fit(row, report, truth);
    } catch (const DegenerateProblem&) {
      score_failure(row, truth);
    } catch (const NumericalError&) {
      score_failure(row, truth);
    }
    rows.push_back(std::move(row));
  }

  if (spec.baselines.vanilla_lasso) {
    MetricRow row = base_row(spec, cell, trial, "vanilla_lasso");
    try {
      EstimatorConfig config;
      config.lambda = lambda_used;
      config.truncation = TruncationScheme::none();
      config.regularizer = spec.mode == ExperimentMode::SingleIndexLowRank
                               ? Regularizer::nuclear(cell.m, cell.n)
                               : Regularizer::l1();
      score_fit(row, fit(samples, config), truth);
    } catch (const DegenerateProblem&) {
      score_failure(row, truth);
    } catch (const NumericalError&) {
      score_failure(row, truth);
    }
    rows.push_back(std::move(row));
  }

  if (spec.baselines.oracle_ols_on_support) {
    MetricRow row = base_row(spec, cell, trial, "oracle_ols");
    try {
      score_fit(row, oracle_ols(samples, truth), truth);
    } catch (const std::exception&) {
      score_failure(row, truth);
    }
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(),
            [](const MetricRow& a, const MetricRow& b) { return a.estimator < b.estimator; });
  return rows;
}

double order_statistic(std::vector<double> values, double frac) {
  // Lower convention: index floor(frac * (k - 1)).
  std::sort(values.begin(), values.end());
  const size_t idx = static_cast<size_t>(frac * static_cast<double>(values.size() - 1));
  return values[idx];
}

}  // namespace

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::SparseGeneral:
      return "sparse_general";
    case ExperimentMode::SingleIndexSparse:
      return "single_index_sparse";
    case ExperimentMode::SingleIndexLowRank:
      return "single_index_low_rank";
  }
  throw std::logic_error("to_string(ExperimentMode): unreachable");
}

ExperimentMode experiment_mode_from_string(const std::string& name) {
  if (name == "sparse_general") return ExperimentMode::SparseGeneral;
  if (name == "single_index_sparse") return ExperimentMode::SingleIndexSparse;
  if (name == "single_index_low_rank") return ExperimentMode::SingleIndexLowRank;
  throw std::invalid_argument("unknown experiment mode '" + name + "'");
}

DesignSpec DesignFamily::instantiate(Index d) const {
  switch (kind) {
    case Kind::IidGaussian:
      return IidEntrySpec::gaussian(d);
    case Kind::IidStudent:
      return IidEntrySpec::student_t(d, param);
    case Kind::IidPareto:
      return IidEntrySpec::symmetric_pareto(d, param);
    case Kind::EllipticalGaussian:
      return EllipticalSpec::gaussian(Matrix::Identity(d, d));
    case Kind::EllipticalStudent:
      return EllipticalSpec::student(Matrix::Identity(d, d), param);
    case Kind::EllipticalPareto:
      return EllipticalSpec::pareto(Matrix::Identity(d, d), param);
    case Kind::EllipticalConstant:
      return EllipticalSpec::constant_radius(Matrix::Identity(d, d));
  }
  throw std::logic_error("DesignFamily::instantiate: unreachable");
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
  if (spec.n_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty N grid");
  if (spec.s_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty s grid");
  for (Index n : spec.n_grid)
    if (n < 1) throw std::invalid_argument("ExperimentSpec: N values must be positive");
  for (Index s : spec.s_grid)
    if (s < 1) throw std::invalid_argument("ExperimentSpec: s values must be positive");
  if (spec.mode == ExperimentMode::SingleIndexLowRank) {
    if (spec.shape_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty shape grid");
    for (const auto& [m, n] : spec.shape_grid) {
      if (m < 1 || n < 1) throw std::invalid_argument("ExperimentSpec: shapes must be positive");
      for (Index s : spec.s_grid)
        if (s > std::min(m, n))
          throw std::invalid_argument("ExperimentSpec: rank exceeds min(m, n)");
    }
    if (spec.baselines.oracle_ols_on_support)
      throw std::invalid_argument("ExperimentSpec: oracle_ols_on_support needs a sparse mode");
  } else {
    if (spec.d_grid.empty()) throw std::invalid_argument("ExperimentSpec: empty d grid");
    for (Index d : spec.d_grid) {
      if (d < 1) throw std::invalid_argument("ExperimentSpec: d values must be positive");
      for (Index s : spec.s_grid)
        if (s > d) throw std::invalid_argument("ExperimentSpec: s exceeds d");
    }
  }
  if (!(spec.lambda_scale > 0.0))
    throw std::invalid_argument("ExperimentSpec: lambda_scale must be > 0");
  if (spec.mode != ExperimentMode::SparseGeneral && !(spec.moment_order_q > 4.0))
    throw std::invalid_argument("ExperimentSpec: moment order q must be > 4");
}

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec, int workers) {
  validate(spec);
  const std::vector<Cell> cells = grid_cells(spec);

  struct Task {
    Cell cell;
    int trial;
  };
  std::vector<Task> tasks;
  for (const Cell& cell : cells)
    for (int k = 0; k < spec.trials; ++k) tasks.push_back({cell, k});

  std::vector<std::vector<MetricRow>> results(tasks.size());
  std::atomic<size_t> next{0};
  const auto worker_loop = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      results[i] = run_task(spec, tasks[i].cell, tasks[i].trial);
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (n_workers == 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker_loop);
    for (auto& t : pool) t.join();
  }

  std::vector<MetricRow> rows;
  for (auto& r : results)
    for (auto& row : r) rows.push_back(std::move(row));
  return rows;
}

std::vector<CellSummary> summarize(const std::vector<MetricRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summarize: empty row list");

  struct Key {
    std::string mode, estimator;
    Index n_samples, dim, sparsity;
    bool operator<(const Key& o) const {
      return std::tie(mode, estimator, n_samples, dim, sparsity) <
             std::tie(o.mode, o.estimator, o.n_samples, o.dim, o.sparsity);
    }
  };

  // Group in first-appearance order.
  std::vector<Key> order;
  std::map<Key, std::vector<const MetricRow*>> groups;
  for (const MetricRow& row : rows) {
    Key key{to_string(row.mode), row.estimator, row.n_samples, row.dim, row.sparsity};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }

  std::vector<CellSummary> cells;
  for (const Key& key : order) {
    const auto& members = groups[key];
    CellSummary cell;
    cell.mode = experiment_mode_from_string(key.mode);
    cell.estimator = key.estimator;
    cell.n_samples = key.n_samples;
    cell.dim = key.dim;
    cell.sparsity = key.sparsity;
    cell.rows = static_cast<int>(members.size());
    cell.pred_rate = members.front()->pred_rate;

    std::vector<double> l2, psi, cosine;
    for (const MetricRow* row : members) {
      if (!row->converged) continue;
      l2.push_back(row->l2);
      psi.push_back(row->psi_err);
      cosine.push_back(row->cosine);
    }
    cell.excluded = cell.rows - static_cast<int>(l2.size());
    if (!l2.empty()) {
      cell.median_l2 = order_statistic(l2, 0.5);
      cell.q25_l2 = order_statistic(l2, 0.25);
      cell.q75_l2 = order_statistic(l2, 0.75);
      cell.median_psi = order_statistic(psi, 0.5);
      cell.q25_psi = order_statistic(psi, 0.25);
      cell.q75_psi = order_statistic(psi, 0.75);
      cell.median_cosine = order_statistic(cosine, 0.5);
      cell.q25_cosine = order_statistic(cosine, 0.25);
      cell.q75_cosine = order_statistic(cosine, 0.75);
    }
    cells.push_back(std::move(cell));
  }

  // One multiplicative constant per estimator: least squares of median_l2 on
  // pred_rate across that estimator's cells.
  std::map<std::string, std::pair<double, double>> accum;  // tag -> (sum xy, sum xx)
  for (const CellSummary& cell : cells) {
    if (cell.rows == cell.excluded) continue;
    auto& [xy, xx] = accum[cell.estimator];
    xy += cell.median_l2 * cell.pred_rate;
    xx += cell.pred_rate * cell.pred_rate;
  }
  for (CellSummary& cell : cells) {
    const auto it = accum.find(cell.estimator);
    if (it != accum.end() && it->second.second > 0.0)
      cell.fitted_c = it->second.first / it->second.second;
  }
  return cells;
}

std::string rows_to_csv(const std::vector<MetricRow>& rows, bool with_timings) {
  std::string out =
      "mode,N,d,s,trial,estimator,l2,psi_err,cosine,iters,converged,kkt,wall_ms,pred_rate\n";
  for (const MetricRow& row : rows) {
    out += to_string(row.mode);
    out += ',' + std::to_string(row.n_samples) + ',' + std::to_string(row.dim) + ',' +
           std::to_string(row.sparsity) + ',' + std::to_string(row.trial) + ',' + row.estimator +
           ',' + format_g9(row.l2) + ',' + format_g9(row.psi_err) + ',' + format_g9(row.cosine) +
           ',' + std::to_string(row.iterations) + ',' + (row.converged ? "1" : "0") + ',' +
           format_g9(row.kkt) + ',' + format_g9(with_timings ? row.wall_ms : 0.0) + ',' +
           format_g9(row.pred_rate) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<MetricRow>& rows, const std::string& path, bool with_timings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << rows_to_csv(rows, with_timings);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::string summary_to_csv(const std::vector<CellSummary>& cells) {
  std::string out =
      "mode,N,d,s,estimator,rows,excluded,median_l2,q25_l2,q75_l2,median_psi,q25_psi,q75_psi,"
      "median_cosine,q25_cosine,q75_cosine,pred_rate,fitted_c\n";
  for (const CellSummary& cell : cells) {
    out += to_string(cell.mode);
    out += ',' + std::to_string(cell.n_samples) + ',' + std::to_string(cell.dim) + ',' +
           std::to_string(cell.sparsity) + ',' + cell.estimator + ',' +
           std::to_string(cell.rows) + ',' + std::to_string(cell.excluded) + ',' +
           format_g9(cell.median_l2) + ',' + format_g9(cell.q25_l2) + ',' +
           format_g9(cell.q75_l2) + ',' + format_g9(cell.median_psi) + ',' +
           format_g9(cell.q25_psi) + ',' + format_g9(cell.q75_psi) + ',' +
           format_g9(cell.median_cosine) + ',' + format_g9(cell.q25_cosine) + ',' +
           format_g9(cell.q75_cosine) + ',' + format_g9(cell.pred_rate) + ',' +
           format_g9(cell.fitted_c) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<CellSummary>& cells, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << summary_to_csv(cells);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<MetricRow> parse_rows_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_rows_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_rows_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "mode,N,d,s,trial,estimator,l2,psi_err,cosine,iters,converged,kkt,wall_ms,pred_rate")
    throw std::runtime_error("parse_rows_csv: unexpected header");

  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 14) throw std::runtime_error("parse_rows_csv: bad row '" + line + "'");
    MetricRow row;
    row.mode = experiment_mode_from_string(fields[0]);
    row.n_samples = std::stol(fields[1]);
    row.dim = std::stol(fields[2]);
    row.sparsity = std::stol(fields[3]);
    row.trial = std::stoi(fields[4]);
    row.estimator = fields[5];
    row.l2 = std::stod(fields[6]);
    row.psi_err = std::stod(fields[7]);
    row.cosine = std::stod(fields[8]);
    row.iterations = std::stoi(fields[9]);
    row.converged = fields[10] == "1";
    row.kkt = std::stod(fields[11]);
    row.wall_ms = std::stod(fields[12]);
    row.pred_rate = std::stod(fields[13]);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

NoiseSpec parse_noise(const nlohmann::json& j) {
  if (j.is_null()) return NoiseSpec::none();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return NoiseSpec::none();
  if (kind == "gaussian") return NoiseSpec::gaussian(j.at("sd").get<double>());
  if (kind == "student")
    return NoiseSpec::student(j.at("df").get<double>(), j.value("scale", 1.0));
  if (kind == "pareto")
    return NoiseSpec::pareto(j.at("alpha").get<double>(), j.value("scale", 1.0));
  throw std::invalid_argument("config: unknown noise kind '" + kind + "'");
}

LinkFunction parse_link(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const NoiseSpec noise = j.contains("noise") ? parse_noise(j.at("noise")) : NoiseSpec::none();
  if (kind == "linear") return LinkFunction::linear(noise);
  if (kind == "sign") return LinkFunction::sign(noise);
  if (kind == "cubic") return LinkFunction::cubic(noise);
  if (kind.rfind("custom:", 0) == 0) return LinkFunction::custom(kind.substr(7), noise);
  throw std::invalid_argument("config: unknown link kind '" + kind + "'");
}

DesignFamily parse_design(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  DesignFamily family;
  if (type == "gaussian_entries") {
    family.kind = DesignFamily::Kind::IidGaussian;
  } else if (type == "student_entries") {
    family.kind = DesignFamily::Kind::IidStudent;
    family.param = j.at("df").get<double>();
  } else if (type == "pareto_entries") {
    family.kind = DesignFamily::Kind::IidPareto;
    family.param = j.at("alpha").get<double>();
  } else if (type == "elliptical") {
    const std::string radial = j.at("radial").get<std::string>();
    if (radial == "gaussian") {
      family.kind = DesignFamily::Kind::EllipticalGaussian;
    } else if (radial == "student") {
      family.kind = DesignFamily::Kind::EllipticalStudent;
      family.param = j.at("df").get<double>();
    } else if (radial == "pareto") {
      family.kind = DesignFamily::Kind::EllipticalPareto;
      family.param = j.at("alpha").get<double>();
    } else if (radial == "constant") {
      family.kind = DesignFamily::Kind::EllipticalConstant;
    } else {
      throw std::invalid_argument("config: unknown radial '" + radial + "'");
    }
  } else {
    throw std::invalid_argument("config: unknown design type '" + type + "'");
  }
  return family;
}

std::vector<Index> parse_index_list(const nlohmann::json& j) {
  std::vector<Index> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<Index>());
  } else {
    out.push_back(j.get<Index>());
  }
  return out;
}

}  // namespace

ExperimentSpec parse_spec_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  try {
    ExperimentSpec spec;
    spec.mode = experiment_mode_from_string(j.at("mode").get<std::string>());
    const auto& grid = j.at("grid");
    spec.n_grid = parse_index_list(grid.at("N"));
    if (spec.mode == ExperimentMode::SingleIndexLowRank) {
      const auto ms = parse_index_list(grid.at("m"));
      const auto ns = parse_index_list(grid.at("n"));
      if (ms.size() != ns.size())
        throw std::invalid_argument("config: m and n lists must have equal length");
      for (size_t i = 0; i < ms.size(); ++i) spec.shape_grid.emplace_back(ms[i], ns[i]);
      spec.s_grid = parse_index_list(grid.at("rank"));
    } else {
      spec.d_grid = parse_index_list(grid.at("d"));
      spec.s_grid = parse_index_list(grid.at("s"));
    }
    spec.design = parse_design(j.at("design"));
    spec.link = parse_link(j.at("link"));
    if (j.contains("signal")) {
      const std::string signal = j.at("signal").get<std::string>();
      if (signal == "unit_entries")
        spec.signal = SignalMode::UnitEntries;
      else if (signal == "random")
        spec.signal = SignalMode::Random;
      else
        throw std::invalid_argument("config: unknown signal mode '" + signal + "'");
    }
    if (j.contains("solver")) {
      const auto& solver = j.at("solver");
      spec.lambda_scale = solver.value("lambda_scale", 1.0);
      spec.moment_order_q = solver.value("q", 6.0);
    }
    spec.trials = j.at("trials").get<int>();
    spec.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("baselines")) {
      const auto& baselines = j.at("baselines");
      spec.baselines.vanilla_lasso = baselines.value("vanilla_lasso", false);
      spec.baselines.oracle_ols_on_support = baselines.value("oracle_ols_on_support", false);
    }
    if (j.contains("output")) {
      const auto& output = j.at("output");
      spec.rows_file = output.value("rows", spec.rows_file);
      spec.summary_file = output.value("summary", spec.summary_file);
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

ExperimentSpec demo_spec(ExperimentMode mode) {
  ExperimentSpec spec;
  spec.mode = mode;
  spec.master_seed = 20260801;
  switch (mode) {
    case ExperimentMode::SparseGeneral:
      spec.n_grid = {1000, 2000, 4000};
      spec.d_grid = {200};
      spec.s_grid = {5};
      spec.design = {DesignFamily::Kind::IidStudent, 25.0};
      spec.link = LinkFunction::linear(NoiseSpec::student(6.0, 0.5));
      spec.lambda_scale = 1.0;
      spec.trials = 10;
      spec.baselines.vanilla_lasso = true;
      spec.rows_file = "demo_sparse_rows.csv";
      spec.summary_file = "demo_sparse_summary.csv";
      break;
    case ExperimentMode::SingleIndexSparse:
      spec.n_grid = {2000, 4000};
      spec.d_grid = {100};
      spec.s_grid = {5};
      spec.design = {DesignFamily::Kind::EllipticalGaussian, 0.0};
      spec.link = LinkFunction::sign();
      spec.lambda_scale = 1.0;
      spec.moment_order_q = 6.0;
      spec.trials = 10;
      spec.rows_file = "demo_single_index_rows.csv";
      spec.summary_file = "demo_single_index_summary.csv";
      break;
    case ExperimentMode::SingleIndexLowRank:
      spec.n_grid = {1500, 6000};
      spec.shape_grid = {{20, 20}};
      spec.s_grid = {2};
      spec.design = {DesignFamily::Kind::EllipticalGaussian, 0.0};
      spec.link = LinkFunction::linear();
      spec.lambda_scale = 1.0;
      spec.moment_order_q = 6.0;
      spec.trials = 5;
      spec.rows_file = "demo_low_rank_rows.csv";
      spec.summary_file = "demo_low_rank_summary.csv";
      break;
  }
  return spec;
}

}  // namespace trls

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trls/sampling.hpp"
#include "trls/types.hpp"

namespace trls {

enum class ExperimentMode { SparseGeneral, SingleIndexSparse, SingleIndexLowRank };

std::string to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& name);

/// Design family instantiated at each grid cell's dimension with Sigma = I.
struct DesignFamily {
  enum class Kind {
    IidGaussian,
    IidStudent,
    IidPareto,
    EllipticalGaussian,
    EllipticalStudent,
    EllipticalPareto,
    EllipticalConstant
  };
  Kind kind = Kind::IidGaussian;
  double param = 0.0;  // df or alpha where applicable

  DesignSpec instantiate(Index d) const;
};

struct Baselines {
  bool vanilla_lasso = false;
  bool oracle_ols_on_support = false;
};

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::SparseGeneral;
  std::vector<Index> n_grid;
  std::vector<Index> d_grid;                        // sparse modes
  std::vector<std::pair<Index, Index>> shape_grid;  // low-rank mode
  std::vector<Index> s_grid;                        // sparsity or rank
  DesignFamily design;
  LinkFunction link;
  SignalMode signal = SignalMode::Random;
  double lambda_scale = 1.0;
  double moment_order_q = 6.0;  // single-index truncation exponent
  int trials = 1;
  std::uint64_t master_seed = 1;
  Baselines baselines;
  std::string rows_file = "rows.csv";
  std::string summary_file = "summary.csv";
};

void validate(const ExperimentSpec& spec);

struct MetricRow {
  ExperimentMode mode = ExperimentMode::SparseGeneral;
  Index n_samples = 0;
  Index dim = 0;       // m*n in low-rank mode
  Index sparsity = 0;  // rank in low-rank mode
  int trial = 0;
  std::string estimator;
  double l2 = 0.0;
  double psi_err = 0.0;
  double cosine = 0.0;
  int iterations = 0;
  bool converged = false;
  double kkt = 0.0;
  double wall_ms = 0.0;
  double pred_rate = 0.0;
};

/// Run every (cell, trial) of the sweep; each enabled estimator contributes
/// one row per trial. Trials are pure functions of seeds derived from
/// (master_seed, cell, trial), so any worker count reproduces the serial
/// output. Solver failures are recorded per row with converged = false and
/// never abort the sweep.
std::vector<MetricRow> run_experiment(const ExperimentSpec& spec, int workers = 1);

struct CellSummary {
  ExperimentMode mode = ExperimentMode::SparseGeneral;
  Index n_samples = 0;
  Index dim = 0;
  Index sparsity = 0;
  std::string estimator;
  int rows = 0;
  int excluded = 0;  // non-converged rows, left out of the statistics
  double median_l2 = 0.0;
  double q25_l2 = 0.0;
  double q75_l2 = 0.0;
  double median_psi = 0.0;
  double q25_psi = 0.0;
  double q75_psi = 0.0;
  double median_cosine = 0.0;
  double q25_cosine = 0.0;
  double q75_cosine = 0.0;
  double pred_rate = 0.0;
  double fitted_c = 0.0;  // least-squares constant for median_l2 ~ c * pred_rate
};

/// Per-cell order statistics (lower-median convention) over converged rows,
/// plus one multiplicative constant per estimator fitted across cells.
std::vector<CellSummary> summarize(const std::vector<MetricRow>& rows);

/// Row CSV, header
///   mode,N,d,s,trial,estimator,l2,psi_err,cosine,iters,converged,kkt,wall_ms,pred_rate
/// 9-significant-digit floats, LF endings, stable order. wall_ms is written
/// as 0 unless `with_timings` -- measured times vary between runs and would
/// break byte-reproducibility of the output.
std::string rows_to_csv(const std::vector<MetricRow>& rows, bool with_timings = false);
void emit_csv(const std::vector<MetricRow>& rows, const std::string& path,
              bool with_timings = false);

std::string summary_to_csv(const std::vector<CellSummary>& cells);
void emit_csv(const std::vector<CellSummary>& cells, const std::string& path);

std::vector<MetricRow> parse_rows_csv(const std::string& path);

/// Spec from the JSON config format (top-level keys mode/grid/design/link/
/// solver/trials/master_seed/baselines/signal/output).
ExperimentSpec parse_spec_json(const std::string& text);

/// Built-in desk-scale sweep for each mode.
ExperimentSpec demo_spec(ExperimentMode mode);

}  // namespace trls

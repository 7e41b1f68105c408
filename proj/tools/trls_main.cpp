// Command-line front end: `run` executes a JSON experiment config, `summarize`
// aggregates a rows CSV, `demo` runs a built-in desk-scale sweep per mode.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "trls/experiment.hpp"

namespace {

int default_workers() {
  // Environment override is limited to the worker count by design.
  if (const char* env = std::getenv("TRLS_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_spec(const trls::ExperimentSpec& spec, const std::string& out_dir, int workers,
             bool timings) {
  std::filesystem::create_directories(out_dir);
  const auto rows = trls::run_experiment(spec, workers);
  const auto cells = trls::summarize(rows);
  const std::string rows_path = (std::filesystem::path(out_dir) / spec.rows_file).string();
  const std::string summary_path = (std::filesystem::path(out_dir) / spec.summary_file).string();
  trls::emit_csv(rows, rows_path, timings);
  trls::emit_csv(cells, summary_path);
  int excluded = 0;
  for (const auto& cell : cells) excluded += cell.excluded;
  std::cerr << "wrote " << rows.size() << " rows to " << rows_path << " (" << excluded
            << " non-converged rows excluded from " << summary_path << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated regularized least squares: recovery experiments on heavy-tailed data"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", csv_path, mode_name, summary_out;
  int workers = default_workers();
  std::uint64_t seed_override = 0;
  bool have_seed = false, timings = false;

  auto* run = app.add_subcommand("run", "Run an experiment config (JSON)");
  run->add_option("config", config_path, "Path to the config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--workers", workers, "Worker thread count");
  run->add_option("--seed", seed_override, "Master seed override")
      ->each([&](const std::string&) { have_seed = true; });
  run->add_flag("--timings", timings,
                "Record measured wall times in the rows CSV (breaks byte-reproducibility)");

  auto* summarize = app.add_subcommand("summarize", "Aggregate a rows CSV to per-cell statistics");
  summarize->add_option("csv", csv_path, "Rows CSV produced by run/demo")->required();
  summarize->add_option("--out", summary_out, "Write the summary here instead of stdout");

  auto* demo = app.add_subcommand("demo", "Run a built-in desk-scale sweep");
  demo->add_option("mode", mode_name,
                   "sparse_general | single_index_sparse | single_index_low_rank")
      ->required();
  demo->add_option("--out", out_dir, "Output directory");
  demo->add_option("--workers", workers, "Worker thread count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      trls::ExperimentSpec spec = trls::parse_spec_json(read_file(config_path));
      if (have_seed) spec.master_seed = seed_override;
      return run_spec(spec, out_dir, workers, timings);
    }
    if (summarize->parsed()) {
      const auto rows = trls::parse_rows_csv(csv_path);
      const std::string csv = trls::summary_to_csv(trls::summarize(rows));
      if (summary_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(summary_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + summary_out);
        out << csv;
      }
      return 0;
    }
    if (demo->parsed()) {
      const auto spec = trls::demo_spec(trls::experiment_mode_from_string(mode_name));
      return run_spec(spec, out_dir, workers, false);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdca/dataset.hpp"
#include "sdca/model.hpp"
#include "sdca/solver.hpp"

namespace sdca {

struct FileSource {
  std::string path;
  std::size_t d_override = 0;
};

using DataSource = std::variant<FileSource, SyntheticSpec>;

/// One experiment: a data source, a problem, and a matrix of
/// (variant x seed) solver runs.
struct RunConfig {
  DataSource data;
  Loss loss = Loss::quadratic;
  double gamma = 1.0;
  std::optional<double> lambda;  // nullopt -> 1/n
  std::vector<SolverVariant> variants;
  std::size_t max_epochs = 100;
  double gap_tol = 1e-10;
  std::size_t eval_every = 1;
  std::vector<std::uint64_t> seeds;
  std::string out_path;  // empty -> no file written

  void validate() const;
};

/// Loads (or generates) the dataset; smoothed-hinge labels are mapped onto
/// {-1,+1} here. Synthetic label mode follows the loss.
Dataset load_dataset(const RunConfig& config);

double resolve_lambda(const RunConfig& config, std::size_t n);

struct ExecutedRun {
  std::string variant;
  std::uint64_t seed = 0;
  RunResult result;
};

struct ExperimentResult {
  std::vector<ExecutedRun> runs;  // sorted by (variant, seed)
  double lambda_used = 0.0;
  bool lambda_defaulted = false;
  std::size_t n = 0;
  std::size_t d = 0;
};

/// Runs every (variant, seed) pair and, when out_path is set, writes one CSV
/// with header `variant,seed,epoch,iterations,elapsed_s,primal,dual,gap,theta`
/// (run metadata in leading `#` comment lines, rows sorted by
/// variant, seed, iterations). Re-running reproduces all non-time columns.
ExperimentResult run_experiment(const RunConfig& config);
void write_trace_csv(const ExperimentResult& result, const RunConfig& config,
                     std::ostream& out);

struct CompareRow {
  std::string variant;
  double median_epochs = 0.0;  // +inf when the median run never reached the gap
  double q25_epochs = 0.0;
  double q75_epochs = 0.0;
  double median_time_s = 0.0;
  double q25_time_s = 0.0;
  double q75_time_s = 0.0;
  std::size_t reached = 0;  // runs that reached gap <= threshold
  std::size_t runs = 0;
};

struct ComparisonTable {
  std::vector<CompareRow> rows;  // sorted by median epochs, then name
  double threshold = 0.0;
  std::size_t max_epochs = 0;

  std::string render_text() const;
  void write_csv(std::ostream& out) const;
};

/// Median and IQR (over seeds) of epochs-to-reach gap <= config.gap_tol and
/// of solver wall time, per variant. Requires >= 2 variants and >= 3 seeds.
/// Runs that never reach the threshold enter the statistics as +inf and are
/// rendered as "> max_epochs".
ComparisonTable compare_solvers(const RunConfig& config);

}  // namespace sdca

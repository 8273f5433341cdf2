#include "sdca/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_double(std::string& out, double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, r.ptr);
}

std::string dts(double x) {
  std::string s;
  append_double(s, x);
  return s;
}

// Midpoint/nearest-rank quantiles over a sorted vector that may contain +inf.
double median_sorted(const std::vector<double>& a) {
  const std::size_t k = a.size();
  const double lo = a[(k - 1) / 2], hi = a[k / 2];
  if (std::isinf(lo) || std::isinf(hi)) return kInf;
  return (lo + hi) / 2.0;
}

double quantile_sorted(const std::vector<double>& a, double q) {
  const auto idx = static_cast<std::size_t>(
      std::llround(q * static_cast<double>(a.size() - 1)));
  return a[idx];
}

}  // namespace

void RunConfig::validate() const {
  if (variants.empty())
    throw std::invalid_argument("config: at least one variant is required");
  if (seeds.empty())
    throw std::invalid_argument("config: at least one seed is required");
  for (const auto& v : variants) v.validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma must be > 0");
  if (lambda && !(*lambda > 0.0))
    throw std::invalid_argument("config: lambda must be > 0");
  if (!(gap_tol > 0.0)) throw std::invalid_argument("config: gap_tol must be > 0");
  if (eval_every == 0)
    throw std::invalid_argument("config: eval_every must be >= 1");
}

Dataset load_dataset(const RunConfig& config) {
  Dataset ds;
  if (const auto* file = std::get_if<FileSource>(&config.data)) {
    ds = load_libsvm_file(file->path, file->d_override);
  } else {
    SyntheticSpec spec = std::get<SyntheticSpec>(config.data);
    spec.label_mode = config.loss == Loss::smoothed_hinge ? LabelMode::binary
                                                          : LabelMode::regression;
    ds = generate_synthetic(spec);
  }
  if (config.loss == Loss::smoothed_hinge) ds.labels = binary_labels(ds.labels);
  return ds;
}

double resolve_lambda(const RunConfig& config, std::size_t n) {
  return config.lambda ? *config.lambda : 1.0 / static_cast<double>(n);
}

namespace {

std::vector<ExecutedRun> execute_runs(const RunConfig& config, const Dataset& ds,
                                      double lambda) {
  ProblemSpec spec{config.loss, config.gamma, lambda};
  SolverConfig solver_cfg;
  solver_cfg.max_epochs = config.max_epochs;
  solver_cfg.gap_tol = config.gap_tol;
  solver_cfg.eval_every_epochs = config.eval_every;

  std::vector<ExecutedRun> runs;
  runs.reserve(config.variants.size() * config.seeds.size());
  std::vector<std::string> executed;
  for (const auto& variant : config.variants) {
    const std::string name = variant.name();
    if (std::find(executed.begin(), executed.end(), name) != executed.end())
      continue;  // duplicate entries are deterministic copies; run once
    executed.push_back(name);
    for (std::uint64_t seed : config.seeds) {
      solver_cfg.seed = seed;
      runs.push_back({name, seed, run(ds, spec, variant, solver_cfg)});
    }
  }
  std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.variant, a.seed) < std::tie(b.variant, b.seed);
  });
  return runs;
}

}  // namespace

void write_trace_csv(const ExperimentResult& result, const RunConfig& config,
                     std::ostream& out) {
  std::string text;
  text += "# loss=";
  text += config.loss == Loss::quadratic ? "quadratic" : "smooth-hinge";
  text += " gamma=";
  append_double(text, config.gamma);
  text += " lambda=";
  append_double(text, result.lambda_used);
  if (result.lambda_defaulted) text += " (default 1/n)";
  text += " n=" + std::to_string(result.n) + " d=" + std::to_string(result.d);
  text += " tol=";
  append_double(text, config.gap_tol);
  text += " max_epochs=" + std::to_string(config.max_epochs);
  text += "\nvariant,seed,epoch,iterations,elapsed_s,primal,dual,gap,theta\n";
  for (const auto& run : result.runs)
    for (const auto& rec : run.result.trace) {
      text += run.variant;
      text += ',';
      text += std::to_string(run.seed);
      text += ',';
      append_double(text, rec.epoch);
      text += ',';
      text += std::to_string(rec.iterations);
      text += ',';
      append_double(text, rec.elapsed_s);
      text += ',';
      append_double(text, rec.primal);
      text += ',';
      append_double(text, rec.dual);
      text += ',';
      append_double(text, rec.gap);
      text += ',';
      if (rec.theta) append_double(text, *rec.theta);
      text += '\n';
    }
  out << text;
}

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  const Dataset ds = load_dataset(config);
  ExperimentResult result;
  result.lambda_used = resolve_lambda(config, ds.n());
  result.lambda_defaulted = !config.lambda.has_value();
  result.n = ds.n();
  result.d = ds.d();
  result.runs = execute_runs(config, ds, result.lambda_used);
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path);
    if (!out)
      throw std::runtime_error("cannot open output file: " + config.out_path);
    write_trace_csv(result, config, out);
  }
  return result;
}

std::string ComparisonTable::render_text() const {
  std::string never = "> " + std::to_string(max_epochs);
  const auto ep = [&](double x) { return std::isinf(x) ? never : dts(x); };
  std::string text = "epochs to gap <= " + dts(threshold) + " (median [q25, q75] over seeds)\n";
  for (const auto& r : rows) {
    text += "  " + r.variant + ": " + ep(r.median_epochs) + " [" +
            ep(r.q25_epochs) + ", " + ep(r.q75_epochs) + "] epochs, " +
            dts(r.median_time_s) + " [" + dts(r.q25_time_s) + ", " +
            dts(r.q75_time_s) + "] s, reached " + std::to_string(r.reached) +
            "/" + std::to_string(r.runs) + "\n";
  }
  return text;
}

void ComparisonTable::write_csv(std::ostream& out) const {
  std::string text =
      "variant,median_epochs,q25_epochs,q75_epochs,median_time_s,q25_time_s,"
      "q75_time_s,reached,runs\n";
  for (const auto& r : rows) {
    text += r.variant;
    text += ',';
    append_double(text, r.median_epochs);
    text += ',';
    append_double(text, r.q25_epochs);
    text += ',';
    append_double(text, r.q75_epochs);
    text += ',';
    append_double(text, r.median_time_s);
    text += ',';
    append_double(text, r.q25_time_s);
    text += ',';
    append_double(text, r.q75_time_s);
    text += ',';
    text += std::to_string(r.reached);
    text += ',';
    text += std::to_string(r.runs);
    text += '\n';
  }
  out << text;
}

ComparisonTable compare_solvers(const RunConfig& config) {
  config.validate();
  if (config.variants.size() < 2)
    throw std::invalid_argument("compare: at least two variants are required");
  if (config.seeds.size() < 3)
    throw std::invalid_argument("compare: at least three seeds are required");

  const Dataset ds = load_dataset(config);
  const double lambda = resolve_lambda(config, ds.n());
  const std::vector<ExecutedRun> runs = execute_runs(config, ds, lambda);

  ComparisonTable table;
  table.threshold = config.gap_tol;
  table.max_epochs = config.max_epochs;

  for (const auto& variant : config.variants) {
    // One row per configured entry; duplicate entries yield identical rows.
    const std::string name = variant.name();
    std::vector<double> epochs, times;
    std::size_t reached = 0;
    for (const auto& run : runs) {
      if (run.variant != name) continue;
      times.push_back(run.result.trace.back().elapsed_s);
      if (run.result.terminated_by == Termination::gap_tol) {
        epochs.push_back(run.result.trace.back().epoch);
        ++reached;
      } else {
        epochs.push_back(kInf);
      }
    }
    std::sort(epochs.begin(), epochs.end());
    std::sort(times.begin(), times.end());
    CompareRow row;
    row.variant = name;
    row.median_epochs = median_sorted(epochs);
    row.q25_epochs = quantile_sorted(epochs, 0.25);
    row.q75_epochs = quantile_sorted(epochs, 0.75);
    row.median_time_s = median_sorted(times);
    row.q25_time_s = quantile_sorted(times, 0.25);
    row.q75_time_s = quantile_sorted(times, 0.75);
    row.reached = reached;
    row.runs = epochs.size();
    table.rows.push_back(row);
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     if (a.median_epochs != b.median_epochs)
                       return a.median_epochs < b.median_epochs;
                     return a.variant < b.variant;
                   });
  return table;
}

}  // namespace sdca

// Benchmark CLI: runs SDCA variants over a LIBSVM file or a synthetic
// instance and writes duality-gap traces (run) or a per-variant comparison
// summary (compare) as CSV.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdca/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericalError = 3;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

double parse_num(const std::string& s, const std::string& what) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw CLI::ValidationError(what, "not a number: '" + s + "'");
  return x;
}

sdca::SyntheticSpec parse_synthetic(const std::string& arg) {
  const auto parts = split(arg, ',');
  if (parts.size() < 4 || parts.size() > 5)
    throw CLI::ValidationError("--synthetic",
                               "expected n,d,density,spread[,seed]");
  sdca::SyntheticSpec spec;
  spec.n = static_cast<std::size_t>(parse_num(parts[0], "--synthetic n"));
  spec.d = static_cast<std::size_t>(parse_num(parts[1], "--synthetic d"));
  spec.density = parse_num(parts[2], "--synthetic density");
  spec.norm_spread = parse_num(parts[3], "--synthetic spread");
  if (parts.size() == 5)
    spec.seed = static_cast<std::uint64_t>(parse_num(parts[4], "--synthetic seed"));
  return spec;
}

sdca::SolverVariant parse_variant(const std::string& arg) {
  using sdca::PlusOption;
  using sdca::SolverVariant;
  if (arg == "uniform") return SolverVariant::uniform();
  if (arg == "iprox") return SolverVariant::iprox();
  if (arg == "adasdca") return SolverVariant::adasdca();
  for (const auto& [prefix, option] :
       {std::pair{std::string("adasdca-plus-I"), PlusOption::adaptive_reset},
        std::pair{std::string("adasdca-plus-II"), PlusOption::importance_reset}}) {
    if (arg == prefix) return SolverVariant::adasdca_plus(option, 10.0);
    if (arg.rfind(prefix + ":m=", 0) == 0)
      return SolverVariant::adasdca_plus(
          option, parse_num(arg.substr(prefix.size() + 3), "--variant m"));
  }
  throw CLI::ValidationError(
      "--variant", "unknown variant '" + arg +
                       "' (expected uniform, iprox, adasdca, "
                       "adasdca-plus-I[:m=X], adasdca-plus-II[:m=X])");
}

struct CommonFlags {
  std::string data_path;
  std::size_t dim_override = 0;
  std::string synthetic;
  std::string loss = "quadratic";
  double gamma = 1.0;
  double lambda = 0.0;
  bool lambda_set = false;
  std::vector<std::string> variants;
  std::size_t epochs = 100;
  double tol = 1e-10;
  std::size_t eval_every = 1;
  std::vector<std::uint64_t> seeds;
  std::string out;
};

void add_common_flags(CLI::App& cmd, CommonFlags& f) {
  auto* data = cmd.add_option("--data", f.data_path, "LIBSVM dataset file");
  cmd.add_option("--dim", f.dim_override,
                 "feature-dimension override for --data (default: max index)");
  auto* synth = cmd.add_option(
      "--synthetic", f.synthetic,
      "synthetic instance as n,d,density,spread[,seed] (seed defaults to 1)");
  data->excludes(synth);
  synth->excludes(data);
  cmd.add_option("--loss", f.loss, "quadratic | smooth-hinge")
      ->check(CLI::IsMember({"quadratic", "smooth-hinge"}))
      ->capture_default_str();
  cmd.add_option("--gamma", f.gamma, "loss smoothness parameter")
      ->capture_default_str();
  cmd.add_option("--lambda", f.lambda,
                 "regularization parameter (default: 1/n)")
      ->each([&f](const std::string&) { f.lambda_set = true; });
  cmd.add_option("--variant", f.variants,
                 "solver variant (repeatable): uniform, iprox, adasdca, "
                 "adasdca-plus-I[:m=X], adasdca-plus-II[:m=X]")
      ->required();
  cmd.add_option("--epochs", f.epochs, "epoch budget")->capture_default_str();
  cmd.add_option("--tol", f.tol, "duality-gap tolerance")->capture_default_str();
  cmd.add_option("--eval-every", f.eval_every, "evaluation cadence in epochs")
      ->capture_default_str();
  cmd.add_option("--seed", f.seeds, "run seed (repeatable)");
  cmd.add_option("--out", f.out, "output CSV path");
}

sdca::RunConfig to_config(const CommonFlags& f) {
  sdca::RunConfig config;
  if (!f.data_path.empty())
    config.data = sdca::FileSource{f.data_path, f.dim_override};
  else if (!f.synthetic.empty())
    config.data = parse_synthetic(f.synthetic);
  else
    throw CLI::ValidationError("--data", "either --data or --synthetic is required");
  config.loss = f.loss == "quadratic" ? sdca::Loss::quadratic
                                      : sdca::Loss::smoothed_hinge;
  config.gamma = f.gamma;
  if (f.lambda_set) config.lambda = f.lambda;
  for (const auto& v : f.variants) config.variants.push_back(parse_variant(v));
  config.max_epochs = f.epochs;
  config.gap_tol = f.tol;
  config.eval_every = f.eval_every;
  config.seeds = f.seeds;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDCA / AdaSDCA benchmark runner"};
  app.require_subcommand(1);

  CommonFlags run_flags, cmp_flags;
  auto* run_cmd = app.add_subcommand(
      "run", "run solver variants and write a duality-gap trace CSV");
  add_common_flags(*run_cmd, run_flags);
  auto* cmp_cmd = app.add_subcommand(
      "compare",
      "summarize epochs-to-tolerance per variant (median and IQR over seeds)");
  add_common_flags(*cmp_cmd, cmp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (run_cmd->parsed()) {
      sdca::RunConfig config = to_config(run_flags);
      if (config.seeds.empty()) config.seeds = {1};
      config.out_path = run_flags.out.empty() ? "trace.csv" : run_flags.out;
      const auto result = sdca::run_experiment(config);
      std::size_t rows = 0;
      for (const auto& r : result.runs) rows += r.result.trace.size();
      std::cout << "wrote " << rows << " trace rows for " << result.runs.size()
                << " runs to " << config.out_path << "\n";
    } else {
      sdca::RunConfig config = to_config(cmp_flags);
      if (config.seeds.empty())
        for (std::uint64_t s = 1; s <= 10; ++s) config.seeds.push_back(s);
      config.out_path.clear();
      const auto table = sdca::compare_solvers(config);
      std::cout << table.render_text();
      const std::string out =
          cmp_flags.out.empty() ? "compare.csv" : cmp_flags.out;
      std::ofstream os(out);
      if (!os) throw std::runtime_error("cannot open output file: " + out);
      table.write_csv(os);
      std::cout << "wrote summary to " << out << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const sdca::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}

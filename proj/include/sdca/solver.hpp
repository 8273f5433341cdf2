#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sdca/dataset.hpp"
#include "sdca/model.hpp"
#include "sdca/theory.hpp"
#include "sdca/weight_tree.hpp"

namespace sdca {

/// Raised when a NaN shows up in an evaluation (primal, dual or gap).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VariantKind { uniform, iprox, adasdca, adasdca_plus };
enum class PlusOption { adaptive_reset, importance_reset };  // Options I and II

struct SolverVariant {
  VariantKind kind = VariantKind::uniform;
  PlusOption option = PlusOption::adaptive_reset;  // adasdca_plus only
  double m = 10.0;                                 // adasdca_plus only, > 1

  static SolverVariant uniform() { return {VariantKind::uniform, {}, 0.0}; }
  static SolverVariant iprox() { return {VariantKind::iprox, {}, 0.0}; }
  static SolverVariant adasdca() { return {VariantKind::adasdca, {}, 0.0}; }
  static SolverVariant adasdca_plus(PlusOption opt, double m) {
    return {VariantKind::adasdca_plus, opt, m};
  }

  void validate() const;
  std::string name() const;  // e.g. "uniform", "adasdca-plus-I:m=10"
};

struct SolverConfig {
  std::size_t max_epochs = 100;
  double gap_tol = 1e-10;  // machine-precision plateau proxy
  std::size_t eval_every_epochs = 1;
  std::uint64_t seed = 1;
  std::vector<double> alpha0;  // empty means zeros
};

struct SolverState {
  std::vector<double> alpha;      // n dual variables
  std::vector<double> alpha_bar;  // A alpha / (lambda n); equals w for L2
  std::uint64_t iteration = 0;
  std::mt19937_64 rng;

  /// Primal point w = grad g*(alpha_bar); the identity map for L2, so the
  /// two share storage.
  const std::vector<double>& w() const { return alpha_bar; }
};

struct TraceRecord {
  double epoch = 0.0;  // iterations / n
  std::uint64_t iterations = 0;
  double elapsed_s = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::optional<double> theta;  // latest theta(kappa, p), where computed
};

enum class Termination { gap_tol, max_epochs, optimal_residue };

struct RunResult {
  std::vector<TraceRecord> trace;
  SolverState final_state;
  Termination terminated_by = Termination::max_epochs;
  std::size_t epochs_completed = 0;
  /// Cumulative basic-operation counter at each completed epoch boundary
  /// (column entries touched, per-coordinate passes, tree node touches).
  /// Solver work only; evaluation passes are not counted.
  std::vector<std::uint64_t> epoch_work;
  /// min over all steps of (dual ascent) / (1 + |D|): exact single-coordinate
  /// maximization keeps this above about -1e-12.
  double min_step_dual_delta_rel = 0.0;
  /// Smallest theta(kappa, p) seen across probability constructions
  /// (AdaSDCA: every iteration; AdaSDCA+ Option I: epoch resets).
  std::optional<double> min_theta;
};

/// alpha_bar computed exactly from alpha0 (zeros when alpha0 is empty);
/// for the smoothed hinge, alpha0 must satisfy y_i alpha_i in [0,1].
SolverState init_state(const Dataset& ds, const ProblemSpec& spec,
                       std::span<const double> alpha0, std::uint64_t seed);

/// One exact coordinate ascent step on coordinate i: computes
/// delta = coordinate_step(...), applies the dual and average updates and
/// advances the iteration counter. Returns delta.
double sdca_step(SolverState& state, const Dataset& ds, const ProblemSpec& spec,
                 std::size_t i);

/// Recomputes alpha_bar (and hence w) exactly from alpha; drift control for
/// the incremental average update.
void refresh_alpha_bar(SolverState& state, const Dataset& ds,
                       const ProblemSpec& spec);

/// Runs one solver variant to gap_tol, max_epochs, or an empty residue
/// support (exact optimum). Evaluations (with a from-scratch alpha_bar
/// refresh) happen at epoch 0, every eval_every_epochs epochs and at
/// termination.
RunResult run(const Dataset& ds, const ProblemSpec& spec,
              const SolverVariant& variant, const SolverConfig& config);

}  // namespace sdca

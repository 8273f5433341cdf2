#include "sdca/solver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sdca {

namespace {

constexpr double kSupportRelTol = 1e-14;  // matches theory's support rule

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(next_uniform(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

void check_hinge_labels(const Dataset& ds, const ProblemSpec& spec) {
  if (spec.loss != Loss::smoothed_hinge) return;
  for (double y : ds.labels)
    if (y != 1.0 && y != -1.0)
      throw std::invalid_argument(
          "smoothed hinge requires labels in {-1,+1}; map them with "
          "binary_labels() first");
}

std::string format_m(double m) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), m);
  return std::string(buf, r.ptr);
}

}  // namespace

void SolverVariant::validate() const {
  if (kind == VariantKind::adasdca_plus && !(m > 1.0))
    throw std::invalid_argument("AdaSDCA+ requires m > 1");
}

std::string SolverVariant::name() const {
  switch (kind) {
    case VariantKind::uniform:
      return "uniform";
    case VariantKind::iprox:
      return "iprox";
    case VariantKind::adasdca:
      return "adasdca";
    case VariantKind::adasdca_plus:
      return std::string("adasdca-plus-") +
             (option == PlusOption::adaptive_reset ? "I" : "II") +
             ":m=" + format_m(m);
  }
  return "unknown";
}

SolverState init_state(const Dataset& ds, const ProblemSpec& spec,
                       std::span<const double> alpha0, std::uint64_t seed) {
  spec.validate();
  check_hinge_labels(ds, spec);
  SolverState st;
  st.rng.seed(seed);
  if (alpha0.empty()) {
    st.alpha.assign(ds.n(), 0.0);
  } else {
    if (alpha0.size() != ds.n())
      throw std::invalid_argument("init_state: alpha0 size mismatch");
    st.alpha.assign(alpha0.begin(), alpha0.end());
    if (spec.loss == Loss::smoothed_hinge)
      for (std::size_t i = 0; i < ds.n(); ++i) {
        const double z = ds.labels[i] * st.alpha[i];
        if (z < 0.0 || z > 1.0)
          throw std::invalid_argument("init_state: alpha0 is dual-infeasible");
      }
  }
  st.alpha_bar.assign(ds.d(), 0.0);
  refresh_alpha_bar(st, ds, spec);
  st.iteration = 0;
  return st;
}

void refresh_alpha_bar(SolverState& state, const Dataset& ds,
                       const ProblemSpec& spec) {
  std::fill(state.alpha_bar.begin(), state.alpha_bar.end(), 0.0);
  const double inv = 1.0 / (spec.lambda * static_cast<double>(ds.n()));
  for (std::size_t i = 0; i < ds.n(); ++i)
    if (state.alpha[i] != 0.0)
      add_scaled_column(ds.matrix, i, state.alpha[i] * inv, state.alpha_bar);
}

double sdca_step(SolverState& state, const Dataset& ds, const ProblemSpec& spec,
                 std::size_t i) {
  if (i >= ds.n()) throw std::out_of_range("sdca_step: coordinate index");
  const double a_i = column_dot(ds.matrix, i, state.alpha_bar);
  const double delta =
      coordinate_step(spec, ds.labels[i], state.alpha[i], a_i, ds.norms[i], ds.n());
  state.alpha[i] += delta;
  if (delta != 0.0)
    add_scaled_column(ds.matrix, i,
                      delta / (spec.lambda * static_cast<double>(ds.n())),
                      state.alpha_bar);
  ++state.iteration;
  return delta;
}

RunResult run(const Dataset& ds, const ProblemSpec& spec,
              const SolverVariant& variant, const SolverConfig& config) {
  spec.validate();
  variant.validate();
  check_hinge_labels(ds, spec);
  if (!(config.gap_tol > 0.0))
    throw std::invalid_argument("run: gap_tol must be > 0");
  if (config.eval_every_epochs == 0)
    throw std::invalid_argument("run: eval_every_epochs must be >= 1");

  const std::size_t n = ds.n();
  const double nlg = static_cast<double>(n) * spec.lambda * spec.gamma;
  const double lambda_n = spec.lambda * static_cast<double>(n);

  RunResult res;
  res.final_state = init_state(ds, spec, config.alpha0, config.seed);
  SolverState& st = res.final_state;

  // Per-variant sampling structures.
  std::vector<double> sqrt_vnlg;
  std::vector<double> weights;
  std::vector<double> kappa;
  std::optional<WeightTree> tree;
  if (variant.kind != VariantKind::uniform) tree.emplace(n);
  if (variant.kind == VariantKind::adasdca ||
      (variant.kind == VariantKind::adasdca_plus &&
       variant.option == PlusOption::adaptive_reset)) {
    sqrt_vnlg.resize(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_vnlg[i] = std::sqrt(ds.norms[i] + nlg);
    weights.resize(n);
  }
  if (variant.kind == VariantKind::iprox) {
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = ds.norms[i] + nlg;
    tree->assign(weights);
  }
  if (variant.kind == VariantKind::adasdca_plus &&
      variant.option == PlusOption::importance_reset) {
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = ds.norms[i] + nlg;
  }

  std::uint64_t work = 0;
  std::optional<double> last_theta;
  double running_dual = 0.0;
  double min_delta_rel = 0.0;
  bool have_running_dual = false;

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  const auto evaluate = [&](std::uint64_t iterations) {
    refresh_alpha_bar(st, ds, spec);
    const GapReport rep = evaluate_gap(ds, spec, st.alpha, st.alpha_bar, last_theta);
    if (std::isnan(rep.primal) || std::isnan(rep.dual) || std::isnan(rep.gap))
      throw numerical_error("NaN detected in solver state");
    TraceRecord rec;
    rec.epoch = static_cast<double>(iterations) / static_cast<double>(n);
    rec.iterations = iterations;
    rec.elapsed_s = elapsed();
    rec.primal = rep.primal;
    rec.dual = rep.dual;
    rec.gap = rep.gap;
    rec.theta = rep.theta_used;
    res.trace.push_back(rec);
    if (!have_running_dual) {
      running_dual = rep.dual;
      have_running_dual = true;
    }
    return rep.gap;
  };

  // Builds |kappa_i| sqrt(v_i + nlg) weights from the current state; returns
  // the total weight (zero means empty support: exact optimum).
  const auto build_adaptive_weights = [&]() -> double {
    const double max_abs = dual_residue_into(ds, spec, st.alpha, st.alpha_bar, kappa);
    const double tol = kSupportRelTol * std::max(1.0, max_abs);
    double total = 0.0, num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(kappa[i]);
      if (a > tol) {
        weights[i] = a * sqrt_vnlg[i];
        total += weights[i];
        num += kappa[i] * kappa[i];
      } else {
        weights[i] = 0.0;
      }
    }
    work += ds.matrix.nnz() + 2 * n;
    if (total > 0.0) {
      last_theta = nlg * num / (total * total);
      if (!res.min_theta || *last_theta < *res.min_theta)
        res.min_theta = *last_theta;
    }
    return total;
  };

  if (evaluate(0) <= config.gap_tol) {
    res.terminated_by = Termination::gap_tol;
    return res;
  }

  bool done = false;
  for (std::size_t epoch = 0; epoch < config.max_epochs && !done; ++epoch) {
    for (std::size_t it = 0; it < n; ++it) {
      std::size_t i = 0;
      switch (variant.kind) {
        case VariantKind::uniform:
          i = uniform_index(st.rng, n);
          work += 1;
          break;
        case VariantKind::iprox:
          i = tree->sample(next_uniform(st.rng));
          break;
        case VariantKind::adasdca: {
          if (build_adaptive_weights() == 0.0) {
            res.terminated_by = Termination::optimal_residue;
            done = true;
            break;
          }
          tree->assign(weights);
          work += n;
          i = tree->sample(next_uniform(st.rng));
          break;
        }
        case VariantKind::adasdca_plus: {
          if (st.iteration % n == 0) {  // epoch reset, including t = 0
            if (variant.option == PlusOption::adaptive_reset) {
              if (build_adaptive_weights() == 0.0) {
                res.terminated_by = Termination::optimal_residue;
                done = true;
                break;
              }
            } else {
              work += n;  // fixed importance weights
            }
            tree->assign(weights);
            work += n;
          }
          i = tree->sample(next_uniform(st.rng));
          break;
        }
      }
      if (done) break;

      const double y_i = ds.labels[i];
      const double alpha_old = st.alpha[i];
      const double a_i = column_dot(ds.matrix, i, st.alpha_bar);
      const double delta =
          coordinate_step(spec, y_i, alpha_old, a_i, ds.norms[i], n);
      st.alpha[i] = alpha_old + delta;
      if (delta != 0.0)
        add_scaled_column(ds.matrix, i, delta / lambda_n, st.alpha_bar);
      ++st.iteration;
      work += 2 * (ds.matrix.col_ptr[i + 1] - ds.matrix.col_ptr[i]);

      // Exact dual ascent of this step (g* quadratic makes the f change
      // -(delta/n) a_i - delta^2 v_i / (2 lambda n^2) exact).
      const double conj_change = conjugate_value(spec, y_i, -st.alpha[i]) -
                                 conjugate_value(spec, y_i, -alpha_old);
      const double dual_delta =
          (-delta * a_i - delta * delta * ds.norms[i] / (2.0 * lambda_n) -
           conj_change) /
          static_cast<double>(n);
      min_delta_rel = std::min(min_delta_rel,
                               dual_delta / (1.0 + std::abs(running_dual)));
      running_dual += dual_delta;

      if (variant.kind == VariantKind::adasdca_plus)
        tree->scale_weight(i, 1.0 / variant.m);
    }
    if (done) break;

    res.epochs_completed = epoch + 1;
    res.epoch_work.push_back(work + (tree ? tree->node_touches() : 0));
    if ((epoch + 1) % config.eval_every_epochs == 0 ||
        epoch + 1 == config.max_epochs) {
      if (evaluate(st.iteration) <= config.gap_tol) {
        res.terminated_by = Termination::gap_tol;
        res.min_step_dual_delta_rel = min_delta_rel;
        return res;
      }
    }
  }

  if (done) {
    // Optimal residue support found empty mid-epoch: record the final state.
    evaluate(st.iteration);
  } else {
    res.terminated_by = Termination::max_epochs;
    if (res.trace.empty() || res.trace.back().iterations != st.iteration)
      evaluate(st.iteration);
  }
  res.min_step_dual_delta_rel = min_delta_rel;
  return res;
}

}  // namespace sdca

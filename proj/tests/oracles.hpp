// Test-only oracles: numeric 1-D maximizers, dense linear-algebra references,
// random instance builders. Everything here is independent of the closed
// forms and incremental updates it is used to check.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "sdca/dataset.hpp"
#include "sdca/model.hpp"

namespace oracles {

// Ternary search for the maximizer of a concave function on [lo, hi].
// Tolerates flat pieces (compares values, not derivatives).
template <class F>
double argmax_ternary(F f, double lo, double hi, int iters = 300) {
  for (int k = 0; k < iters; ++k) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      lo = m1;
    else
      hi = m2;
  }
  return (lo + hi) / 2.0;
}

// The bracketed objective of the coordinate step:
//   J(delta) = -phi*(-(alpha+delta)) - a*delta - v/(2 lambda n) delta^2.
inline std::function<double(double)> step_objective(const sdca::ProblemSpec& spec,
                                                    double y, double alpha,
                                                    double a, double v,
                                                    std::size_t n) {
  const double lambda_n = spec.lambda * static_cast<double>(n);
  return [=](double delta) {
    return -sdca::conjugate_value(spec, y, -(alpha + delta)) - a * delta -
           v / (2.0 * lambda_n) * delta * delta;
  };
}

// Interval guaranteed to contain the maximizing delta.
inline std::pair<double, double> step_bracket(const sdca::ProblemSpec& spec,
                                              double y, double alpha, double a) {
  if (spec.loss == sdca::Loss::quadratic) {
    const double b = std::abs(y - a - spec.gamma * alpha) / spec.gamma + 1.0;
    return {-b, b};
  }
  // hinge: y*(alpha+delta) must stay in [0,1]
  if (y > 0.0) return {-alpha, 1.0 - alpha};
  return {-1.0 - alpha, -alpha};
}

inline double numeric_coordinate_step(const sdca::ProblemSpec& spec, double y,
                                      double alpha, double a, double v,
                                      std::size_t n) {
  auto f = step_objective(spec, y, alpha, a, v, n);
  auto [lo, hi] = step_bracket(spec, y, alpha, a);
  return argmax_ternary(f, lo, hi, 400);
}

// sup_x { u x - phi(x) } over a bracket; diverging sups are detected by the
// caller via expanding evaluation.
inline double numeric_conjugate(const sdca::ProblemSpec& spec, double y, double u,
                                double radius = 100.0) {
  auto f = [&](double x) { return u * x - sdca::loss_value(spec, y, x); };
  const double x0 = argmax_ternary(f, -radius, radius, 400);
  return f(x0);
}

// Evaluates u x - phi(x) on expanding brackets; returns the best value seen
// (greater than 1e6 signals an unbounded conjugate).
inline double expanding_sup(const sdca::ProblemSpec& spec, double y, double u) {
  auto f = [&](double x) { return u * x - sdca::loss_value(spec, y, x); };
  double best = f(0.0);
  for (double r = 10.0; r <= 1e8; r *= 10.0)
    best = std::max({best, f(r), f(-r)});
  return best;
}

inline std::vector<double> densify(const sdca::SparseColumnMatrix& m,
                                   std::size_t j) {
  std::vector<double> col(m.rows, 0.0);
  auto rows = m.column_rows(j);
  auto vals = m.column_values(j);
  for (std::size_t k = 0; k < rows.size(); ++k) col[rows[k]] = vals[k];
  return col;
}

inline double dense_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A alpha / (lambda n) computed densely, column by column.
inline std::vector<double> dense_scaled_average(const sdca::Dataset& ds,
                                                double lambda,
                                                const std::vector<double>& alpha) {
  std::vector<double> bar(ds.d(), 0.0);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto col = densify(ds.matrix, i);
    for (std::size_t r = 0; r < ds.d(); ++r)
      bar[r] += col[r] * alpha[i] / (lambda * static_cast<double>(ds.n()));
  }
  return bar;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine);
  }
};

// Random small instance for theory checks.
inline sdca::Dataset random_dataset(Rng& rng, std::size_t n, std::size_t d,
                                    sdca::LabelMode mode) {
  sdca::SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.density = rng.uniform(0.3, 1.0);
  spec.norm_spread = rng.uniform(1.0, 8.0);
  spec.label_mode = mode;
  spec.seed = rng.engine();
  return sdca::generate_synthetic(spec);
}

// Dual-feasible alpha: arbitrary for quadratic, y_i * [0,1] for hinge.
inline std::vector<double> random_feasible_alpha(Rng& rng, const sdca::Dataset& ds,
                                                 sdca::Loss loss) {
  std::vector<double> alpha(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i)
    alpha[i] = loss == sdca::Loss::quadratic ? rng.normal()
                                             : ds.labels[i] * rng.uniform();
  return alpha;
}

// Random point of the simplex with full support (coherent with any residue).
inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    x = std::max(x, 1e-12);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

inline double chi_square_statistic(const std::vector<std::uint64_t>& counts,
                                   const std::vector<double>& probs,
                                   std::uint64_t draws) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(draws);
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// chi-square upper critical values at p = 0.001.
inline constexpr double kChi2Crit001Dof2 = 13.8155;
inline constexpr double kChi2Crit001Dof15 = 37.6973;

}  // namespace oracles

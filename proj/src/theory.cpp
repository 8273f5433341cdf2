#include "sdca/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdca {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportRelTol = 1e-14;

std::vector<double> scaled_average(const Dataset& ds, const ProblemSpec& spec,
                                   std::span<const double> alpha) {
  std::vector<double> bar(ds.d(), 0.0);
  const double inv = 1.0 / (spec.lambda * static_cast<double>(ds.n()));
  for (std::size_t i = 0; i < ds.n(); ++i)
    if (alpha[i] != 0.0) add_scaled_column(ds.matrix, i, alpha[i] * inv, bar);
  return bar;
}
}  // namespace

double dual_residue_into(const Dataset& ds, const ProblemSpec& spec,
                         std::span<const double> alpha, std::span<const double> w,
                         std::vector<double>& kappa) {
  const std::size_t n = ds.n();
  kappa.resize(n);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = column_dot(ds.matrix, i, w);
    kappa[i] = alpha[i] + loss_derivative(spec, ds.labels[i], z);
    max_abs = std::max(max_abs, std::abs(kappa[i]));
  }
  return max_abs;
}

ResidueVector dual_residue(const Dataset& ds, const ProblemSpec& spec,
                           std::span<const double> alpha,
                           std::span<const double> w) {
  ResidueVector r;
  const double max_abs = dual_residue_into(ds, spec, alpha, w, r.kappa);
  r.tol_zero = kSupportRelTol * std::max(1.0, max_abs);
  for (std::size_t i = 0; i < r.kappa.size(); ++i)
    if (std::abs(r.kappa[i]) > r.tol_zero) r.support.push_back(i);
  return r;
}

double primal_value(const Dataset& ds, const ProblemSpec& spec,
                    std::span<const double> w) {
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i)
    loss_sum += loss_value(spec, ds.labels[i], column_dot(ds.matrix, i, w));
  return loss_sum / static_cast<double>(ds.n()) + spec.lambda * regularizer_value(w);
}

double dual_value(const Dataset& ds, const ProblemSpec& spec,
                  std::span<const double> alpha,
                  std::span<const double> alpha_bar) {
  double conj_sum = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const double term = conjugate_value(spec, ds.labels[i], -alpha[i]);
    if (term == kInf) return -kInf;
    conj_sum += term;
  }
  return -spec.lambda * regularizer_conjugate_value(alpha_bar) -
         conj_sum / static_cast<double>(ds.n());
}

GapReport evaluate_gap(const Dataset& ds, const ProblemSpec& spec,
                       std::span<const double> alpha,
                       std::span<const double> alpha_bar,
                       std::optional<double> theta_used) {
  const std::size_t n = ds.n();
  GapReport rep;
  rep.theta_used = theta_used;
  double loss_sum = 0.0, conj_sum = 0.0, res_sum = 0.0;
  bool dual_infinite = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = column_dot(ds.matrix, i, alpha_bar);
    loss_sum += loss_value(spec, ds.labels[i], z);
    const double k = std::abs(alpha[i] + loss_derivative(spec, ds.labels[i], z));
    res_sum += k;
    rep.residue_max = std::max(rep.residue_max, k);
    const double term = conjugate_value(spec, ds.labels[i], -alpha[i]);
    if (term == kInf)
      dual_infinite = true;
    else
      conj_sum += term;
  }
  const double reg = regularizer_value(alpha_bar);
  rep.primal = loss_sum / static_cast<double>(n) + spec.lambda * reg;
  rep.dual = dual_infinite
                 ? -kInf
                 : -spec.lambda * reg - conj_sum / static_cast<double>(n) + 0.0;
  rep.gap = rep.primal - rep.dual;
  rep.residue_mean = res_sum / static_cast<double>(n);
  return rep;
}

double theta(const ResidueVector& residue, std::span<const double> p,
             std::span<const double> v, double lambda, double gamma) {
  const std::size_t n = residue.kappa.size();
  if (residue.support.empty())
    throw std::runtime_error("theta: empty residue support (already optimal)");
  const double nlg = static_cast<double>(n) * lambda * gamma;
  double num = 0.0, den = 0.0;
  for (std::size_t i : residue.support) {
    if (!(p[i] > 0.0))
      throw std::invalid_argument(
          "theta: probability vector not coherent with the residue");
    const double k2 = residue.kappa[i] * residue.kappa[i];
    num += k2;
    den += k2 * (v[i] + nlg) / p[i];
  }
  return nlg * num / den;
}

std::vector<double> importance_probabilities(std::span<const double> v,
                                             double lambda, double gamma) {
  const std::size_t n = v.size();
  const double nlg = static_cast<double>(n) * lambda * gamma;
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += v[i] + nlg;
  for (std::size_t i = 0; i < n; ++i) p[i] = (v[i] + nlg) / total;
  return p;
}

std::vector<double> adaptive_probabilities(const ResidueVector& residue,
                                           std::span<const double> v,
                                           double lambda, double gamma) {
  const std::size_t n = residue.kappa.size();
  if (residue.support.empty())
    throw std::runtime_error(
        "adaptive_probabilities: empty residue support (already optimal)");
  const double nlg = static_cast<double>(n) * lambda * gamma;
  std::vector<double> p(n, 0.0);
  double total = 0.0;
  for (std::size_t i : residue.support) {
    p[i] = std::abs(residue.kappa[i]) * std::sqrt(v[i] + nlg);
    total += p[i];
  }
  for (std::size_t i : residue.support) p[i] /= total;
  return p;
}

double theta_star(std::span<const double> v, double lambda, double gamma) {
  const std::size_t n = v.size();
  const double nlg = static_cast<double>(n) * lambda * gamma;
  double den = 0.0;
  for (double vi : v) den += vi + nlg;
  return nlg / den;
}

AscentCheck expected_ascent_check(const Dataset& ds, const ProblemSpec& spec,
                                  std::span<const double> alpha,
                                  std::span<const double> p, double theta_val) {
  const std::size_t n = ds.n();
  if (n > 1000)
    throw std::invalid_argument("expected_ascent_check: n too large to enumerate");
  if (!(theta_val >= 0.0))
    throw std::invalid_argument("expected_ascent_check: theta must be >= 0");

  const std::vector<double> bar = scaled_average(ds, spec, alpha);
  const auto& w = bar;  // L2: w = grad g*(bar) = bar
  const ResidueVector residue = dual_residue(ds, spec, alpha, w);
  double min_support_p = kInf;
  for (std::size_t i : residue.support) {
    if (!(p[i] > 0.0))
      throw std::invalid_argument(
          "expected_ascent_check: p not coherent with the residue");
    min_support_p = std::min(min_support_p, p[i]);
  }
  if (spec.loss != Loss::quadratic && !residue.support.empty() &&
      theta_val > min_support_p)
    throw std::invalid_argument(
        "expected_ascent_check: theta exceeds min support probability for a "
        "non-quadratic loss");

  const double d_base = dual_value(ds, spec, alpha, bar);
  const double p_base = primal_value(ds, spec, w);

  std::vector<double> alpha_try(alpha.begin(), alpha.end());
  AscentCheck out;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    const double a_i = column_dot(ds.matrix, i, w);
    const double delta =
        coordinate_step(spec, ds.labels[i], alpha[i], a_i, ds.norms[i], n);
    alpha_try[i] = alpha[i] + delta;
    // D recomputed from scratch: independent of the incremental update path.
    std::vector<double> bar_try = scaled_average(ds, spec, alpha_try);
    out.lhs += p[i] * (dual_value(ds, spec, alpha_try, bar_try) - d_base);
    alpha_try[i] = alpha[i];
  }
  out.rhs = theta_val * (p_base - d_base);
  out.holds = out.lhs >= out.rhs - 1e-9 * std::max(1.0, std::abs(out.rhs));
  return out;
}

SmoothnessCheck smoothness_inequality_check(const Dataset& ds,
                                            const ProblemSpec& spec,
                                            std::span<const double> alpha,
                                            std::span<const double> h) {
  const std::size_t n = ds.n();
  const double lambda_n = spec.lambda * static_cast<double>(n);

  std::vector<double> alpha_h(n);
  for (std::size_t i = 0; i < n; ++i) alpha_h[i] = alpha[i] + h[i];
  const std::vector<double> bar = scaled_average(ds, spec, alpha);
  const std::vector<double> bar_h = scaled_average(ds, spec, alpha_h);

  SmoothnessCheck out;
  out.lhs = spec.lambda * regularizer_conjugate_value(bar_h);
  const double f_alpha = spec.lambda * regularizer_conjugate_value(bar);

  // grad_i f(alpha) = (1/n) A_i'w with w = grad g*(A alpha / (lambda n)).
  double grad_dot_h = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (h[i] != 0.0)
      grad_dot_h += h[i] * column_dot(ds.matrix, i, bar) / static_cast<double>(n);

  std::vector<double> Ah(ds.d(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (h[i] != 0.0) add_scaled_column(ds.matrix, i, h[i], Ah);
  double quad = 0.0;
  for (double x : Ah) quad += x * x;
  quad /= 2.0 * lambda_n * static_cast<double>(n);

  out.rhs = f_alpha + grad_dot_h + quad;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

}  // namespace sdca

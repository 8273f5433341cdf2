#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "sdca/dataset.hpp"
#include "sdca/model.hpp"

namespace sdca {

/// Per-coordinate dual residues kappa_i = alpha_i + phi_i'(A_i'w) together
/// with the index set of coordinates counted as nonzero. A coordinate is in
/// the support iff |kappa_i| > 1e-14 * max(1, max_j |kappa_j|).
struct ResidueVector {
  std::vector<double> kappa;
  std::vector<std::size_t> support;
  double tol_zero = 0.0;

  bool in_support_tol(double k) const { return std::abs(k) > tol_zero; }
};

ResidueVector dual_residue(const Dataset& ds, const ProblemSpec& spec,
                           std::span<const double> alpha,
                           std::span<const double> w);

/// Fills kappa only (no support set, no allocation); returns max |kappa_i|.
double dual_residue_into(const Dataset& ds, const ProblemSpec& spec,
                         std::span<const double> alpha, std::span<const double> w,
                         std::vector<double>& kappa);

/// P(w) = (1/n) sum phi_i(A_i'w) + lambda g(w). Cost O(nnz + d).
double primal_value(const Dataset& ds, const ProblemSpec& spec,
                    std::span<const double> w);

/// D(alpha) = -lambda g*(alpha_bar) - (1/n) sum phi_i*(-alpha_i), where the
/// caller supplies alpha_bar = A alpha / (lambda n). Returns -infinity if any
/// conjugate term is out of domain.
double dual_value(const Dataset& ds, const ProblemSpec& spec,
                  std::span<const double> alpha,
                  std::span<const double> alpha_bar);

/// One evaluation snapshot: primal, dual, gap, optional theta diagnostic and
/// a summary of the residue magnitudes (computed in the same data pass).
struct GapReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::optional<double> theta_used;
  double residue_max = 0.0;
  double residue_mean = 0.0;
};

GapReport evaluate_gap(const Dataset& ds, const ProblemSpec& spec,
                       std::span<const double> alpha,
                       std::span<const double> alpha_bar,
                       std::optional<double> theta_used = std::nullopt);

/// theta(kappa, p) = n lambda gamma sum_{i in supp} kappa_i^2
///                 / sum_{i in supp} kappa_i^2 (v_i + n lambda gamma) / p_i.
/// Requires a nonempty support ("already optimal" otherwise) and p coherent
/// with kappa (p_i > 0 wherever kappa_i is in the support).
double theta(const ResidueVector& residue, std::span<const double> p,
             std::span<const double> v, double lambda, double gamma);

/// Fixed importance sampling: p_i proportional to v_i + n lambda gamma.
std::vector<double> importance_probabilities(std::span<const double> v,
                                             double lambda, double gamma);

/// Adaptive probabilities maximizing theta(kappa, .) over the simplex:
/// p_i proportional to |kappa_i| sqrt(v_i + n lambda gamma); exactly zero
/// off the support (coherent by construction). Requires nonempty support.
std::vector<double> adaptive_probabilities(const ResidueVector& residue,
                                           std::span<const double> v,
                                           double lambda, double gamma);

/// theta* = n lambda gamma / sum_i (v_i + n lambda gamma), in (0, 1/n].
double theta_star(std::span<const double> v, double lambda, double gamma);

/// Exact enumeration of the expected one-step dual ascent:
///   lhs = sum_i p_i [D(alpha + Delta_i e_i) - D(alpha)]
///   rhs = theta_val * (P(w) - D(alpha))
/// with each Delta_i the exact coordinate maximizer and every D recomputed
/// from scratch. For non-quadratic losses theta_val must not exceed
/// min_{i in supp} p_i. Guarded to n <= 1000 (cost is O(n nnz)).
struct AscentCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

AscentCheck expected_ascent_check(const Dataset& ds, const ProblemSpec& spec,
                                  std::span<const double> alpha,
                                  std::span<const double> p, double theta_val);

/// Checks f(alpha+h) <= f(alpha) + <grad f(alpha), h> + h'A'Ah / (2 lambda n^2)
/// with f(alpha) = lambda g*(A alpha / (lambda n)). For the L2 regularizer the
/// two sides agree exactly (g* is quadratic).
struct SmoothnessCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

SmoothnessCheck smoothness_inequality_check(const Dataset& ds,
                                            const ProblemSpec& spec,
                                            std::span<const double> alpha,
                                            std::span<const double> h);

}  // namespace sdca

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdca {

enum class Loss { quadratic, smoothed_hinge };

/// Loss family plus problem parameters. Losses are (1/gamma)-smooth;
/// lambda is the L2 regularization weight in P(w) = (1/n) sum phi_i(A_i'w) + lambda*g(w).
struct ProblemSpec {
  Loss loss = Loss::quadratic;
  double gamma = 1.0;
  double lambda = 1.0;

  void validate() const;
};

/// phi_i(x) for label y.
/// quadratic: (x-y)^2 / (2 gamma)
/// smoothed hinge: 0 for yx >= 1; 1 - yx - gamma/2 for yx <= 1-gamma;
///                 (1-yx)^2 / (2 gamma) in between.
double loss_value(const ProblemSpec& spec, double y, double x);

/// phi_i'(x).
double loss_derivative(const ProblemSpec& spec, double y, double x);

/// Convex conjugate phi_i*(u). Returns +infinity outside the domain
/// (smoothed hinge requires y*u in [-1, 0]; boundaries are feasible).
double conjugate_value(const ProblemSpec& spec, double y, double u);

/// Exact single-coordinate dual maximizer:
///   delta = argmax_D { -phi*(-(alpha+D)) - a*D - v/(2 lambda n) D^2 },
/// where a = A_i'w. Closed forms, validated in tests against a numeric
/// 1-D maximizer. For the smoothed hinge the current alpha must satisfy
/// y*alpha in [0,1]; anything else means corrupted state and throws.
double coordinate_step(const ProblemSpec& spec, double y, double alpha, double a,
                       double v, std::size_t n);

// L2 regularizer g(w) = ||w||^2 / 2, g*(z) = ||z||^2 / 2, grad g*(z) = z.
double regularizer_value(std::span<const double> w);
double regularizer_conjugate_value(std::span<const double> z);
std::vector<double> regularizer_conjugate_gradient(std::span<const double> z);

/// Maps a two-class label vector onto {-1,+1} (smaller class value -> -1).
/// Labels already in {-1,+1} pass through. Throws if there are not exactly
/// one or two distinct values, or if mapping would be ambiguous.
std::vector<double> binary_labels(const std::vector<double>& labels);

}  // namespace sdca

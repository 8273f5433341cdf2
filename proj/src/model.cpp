#include "sdca/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace sdca {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ProblemSpec::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("ProblemSpec: gamma must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("ProblemSpec: lambda must be > 0");
}

double loss_value(const ProblemSpec& spec, double y, double x) {
  if (spec.loss == Loss::quadratic) {
    const double r = x - y;
    return r * r / (2.0 * spec.gamma);
  }
  const double z = y * x;
  if (z >= 1.0) return 0.0;
  if (z <= 1.0 - spec.gamma) return 1.0 - z - spec.gamma / 2.0;
  const double r = 1.0 - z;
  return r * r / (2.0 * spec.gamma);
}

double loss_derivative(const ProblemSpec& spec, double y, double x) {
  if (spec.loss == Loss::quadratic) return (x - y) / spec.gamma;
  const double z = y * x;
  if (z >= 1.0) return 0.0;
  if (z <= 1.0 - spec.gamma) return -y;
  return -y * (1.0 - z) / spec.gamma;
}

double conjugate_value(const ProblemSpec& spec, double y, double u) {
  if (spec.loss == Loss::quadratic) return spec.gamma * u * u / 2.0 + y * u;
  const double z = y * u;
  if (z < -1.0 || z > 0.0) return kInf;
  return y * u + spec.gamma * u * u / 2.0;
}

double coordinate_step(const ProblemSpec& spec, double y, double alpha, double a,
                       double v, std::size_t n) {
  const double lambda_n = spec.lambda * static_cast<double>(n);
  const double curvature = spec.gamma + v / lambda_n;
  if (spec.loss == Loss::quadratic)
    return (y - a - spec.gamma * alpha) / curvature;
  if (y * alpha < 0.0 || y * alpha > 1.0)
    throw std::domain_error("coordinate_step: dual-infeasible alpha for smoothed hinge");
  const double beta_unc = (y - a + v * alpha / lambda_n) / curvature;
  const double beta = y * std::clamp(y * beta_unc, 0.0, 1.0);
  return beta - alpha;
}

double regularizer_value(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += x * x;
  return s / 2.0;
}

double regularizer_conjugate_value(std::span<const double> z) {
  return regularizer_value(z);
}

std::vector<double> regularizer_conjugate_gradient(std::span<const double> z) {
  return {z.begin(), z.end()};
}

std::vector<double> binary_labels(const std::vector<double>& labels) {
  std::set<double> distinct(labels.begin(), labels.end());
  if (distinct.size() == 1) {
    const double v = *distinct.begin();
    if (v == 1.0 || v == -1.0) return labels;
    throw std::invalid_argument("binary_labels: single label class is not +-1");
  }
  if (distinct.size() != 2)
    throw std::invalid_argument("binary_labels: expected two label classes, got " +
                                std::to_string(distinct.size()));
  const double lo = *distinct.begin();
  const double hi = *std::next(distinct.begin());
  if (lo == -1.0 && hi == 1.0) return labels;
  std::vector<double> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = labels[i] == lo ? -1.0 : 1.0;
  return out;
}

}  // namespace sdca

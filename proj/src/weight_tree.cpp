#include "sdca/weight_tree.hpp"

#include <bit>
#include <stdexcept>

namespace sdca {

namespace {
// Rescale thresholds: trip well before denormal flush-to-zero can zero a
// still-supported leaf under repeated 1/m decay.
constexpr double kLeafFloor = 1e-300;
constexpr double kTotalFloorPerLeaf = 1e-250;
}  // namespace

WeightTree::WeightTree(std::size_t n) : n_(n) {
  if (n_ == 0) throw std::invalid_argument("WeightTree: n must be >= 1");
  cap_ = std::bit_ceil(n_);
  nodes_.assign(2 * cap_, 0.0);
}

WeightTree::WeightTree(std::span<const double> weights) : WeightTree(weights.size()) {
  assign(weights);
}

void WeightTree::assign(std::span<const double> weights) {
  if (weights.size() != n_)
    throw std::invalid_argument("WeightTree::assign: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(weights[i] >= 0.0))
      throw std::invalid_argument("WeightTree: weights must be nonnegative");
    nodes_[cap_ + i] = weights[i];
  }
  for (std::size_t i = n_; i < cap_; ++i) nodes_[cap_ + i] = 0.0;
  rebuild_internal();
}

void WeightTree::rebuild_internal() {
  for (std::size_t k = cap_ - 1; k >= 1; --k)
    nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
}

double WeightTree::weight(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("WeightTree::weight: index");
  return nodes_[cap_ + i];
}

void WeightTree::pull_up_from_leaf(std::size_t node) {
  ++touches_;
  while (node > 1) {
    node /= 2;
    nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
    ++touches_;
  }
}

void WeightTree::update_weight(std::size_t i, double w) {
  if (i >= n_) throw std::out_of_range("WeightTree::update_weight: index");
  if (!(w >= 0.0))
    throw std::invalid_argument("WeightTree::update_weight: negative weight");
  nodes_[cap_ + i] = w;
  pull_up_from_leaf(cap_ + i);
}

void WeightTree::scale_weight(std::size_t i, double factor) {
  if (i >= n_) throw std::out_of_range("WeightTree::scale_weight: index");
  if (!(factor > 0.0) || factor > 1.0)
    throw std::invalid_argument("WeightTree::scale_weight: factor must be in (0,1]");
  nodes_[cap_ + i] *= factor;
  pull_up_from_leaf(cap_ + i);
  maybe_rescale(nodes_[cap_ + i]);
}

void WeightTree::maybe_rescale(double touched_leaf) {
  const bool leaf_low = touched_leaf > 0.0 && touched_leaf < kLeafFloor;
  const bool total_low =
      total() > 0.0 && total() < kTotalFloorPerLeaf * static_cast<double>(n_);
  if (!leaf_low && !total_low) return;
  // Common factor restoring total to O(n); leaves the distribution invariant.
  const double factor = static_cast<double>(n_) / total();
  for (std::size_t i = 0; i < n_; ++i) nodes_[cap_ + i] *= factor;
  rebuild_internal();
}

std::size_t WeightTree::sample(double u) const {
  const double t = total();
  if (!(t > 0.0)) throw std::runtime_error("WeightTree::sample: total weight is zero");
  double x = u * t;
  std::size_t node = 1;
  ++touches_;
  while (node < cap_) {
    const double left = nodes_[2 * node];
    const double right = nodes_[2 * node + 1];
    // Zero-sum subtrees are skipped outright so rounding in x can never
    // land on a zero-weight leaf.
    if (right <= 0.0) {
      node = 2 * node;
    } else if (left <= 0.0 || x >= left) {
      x -= left;
      node = 2 * node + 1;
    } else {
      node = 2 * node;
    }
    ++touches_;
  }
  return node - cap_;
}

}  // namespace sdca

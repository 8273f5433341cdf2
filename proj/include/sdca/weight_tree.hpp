#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sdca {

/// Dynamic discrete distribution over [0, n): a complete binary tree of
/// partial sums over nonnegative leaf weights. Sampling, point updates and
/// multiplicative decay all touch at most ceil(log2 n) + 1 nodes. Weights
/// are stored unnormalized; probabilities are weight/total.
///
/// Single-writer; one tree per solver run.
class WeightTree {
 public:
  explicit WeightTree(std::span<const double> weights);
  explicit WeightTree(std::size_t n);  // all-zero leaves

  /// Replaces all leaf weights (same n); O(n).
  void assign(std::span<const double> weights);

  std::size_t size() const { return n_; }
  double total() const { return nodes_[1]; }
  double weight(std::size_t i) const;

  /// Sets leaf i to w >= 0 and fixes the ancestor sums.
  void update_weight(std::size_t i, double w);

  /// Multiplies leaf i by factor in (0, 1]. Triggers a global rescale when
  /// the touched leaf or the total would underflow; a common rescale leaves
  /// the sampling distribution unchanged.
  void scale_weight(std::size_t i, double factor);

  /// Maps u in [0,1) to the unique leaf i with
  /// u*total in [prefix(i), prefix(i+1)); right-open ties, zero-weight
  /// leaves are never returned. Requires total > 0.
  std::size_t sample(double u) const;

  /// Cumulative count of tree nodes visited by sample/update/scale,
  /// for cost instrumentation. assign/build are not counted.
  std::uint64_t node_touches() const { return touches_; }
  void reset_node_touches() { touches_ = 0; }

 private:
  void rebuild_internal();
  void pull_up_from_leaf(std::size_t node);
  void maybe_rescale(double touched_leaf);

  std::size_t n_ = 0;
  std::size_t cap_ = 1;               // smallest power of two >= n
  std::vector<double> nodes_;         // 1-based heap layout, leaves at [cap_, cap_+n)
  mutable std::uint64_t touches_ = 0;
};

}  // namespace sdca

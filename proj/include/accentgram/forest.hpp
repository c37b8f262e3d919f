#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "accentgram/linalg.hpp"

namespace accentgram::ml {

struct ForestConfig {
  int n_trees = 500;
  std::optional<int> max_features;  // default floor(sqrt(features used)), at least 1
  int min_samples_leaf = 1;
  std::optional<int> max_depth;     // unlimited when empty
  bool bootstrap = true;
  std::uint64_t seed = 42;
  int threads = 0;                  // 0 = hardware concurrency

  int resolved_max_features(std::size_t n_features_used) const;
};

/// 1 − Σ (n_k / n)²; zero for an empty node.
double gini(std::span<const std::size_t> class_counts);

struct TreeNode {
  int feature = -1;        // column in the input matrix; -1 for a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  int label = 0;           // majority class at this node
};

class DecisionTree {
 public:
  int predict(std::span<const double> row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
};

/// Bagged CART classifier with Gini splits and majority voting. Classes are
/// integers 0..n_classes-1; vote ties go to the lowest class index.
class RandomForest {
 public:
  /// `columns` are 0-based indices into `x` that the forest may split on.
  static RandomForest fit(const Matrix& x, std::span<const int> labels, int n_classes,
                          std::span<const std::size_t> columns, const ForestConfig& cfg);

  int predict(std::span<const double> row) const;
  std::vector<int> predict(const Matrix& x) const;

  std::size_t tree_count() const { return trees_.size(); }
  const std::vector<std::size_t>& columns() const { return columns_; }
  const DecisionTree& tree(std::size_t i) const { return trees_[i]; }

 private:
  std::vector<DecisionTree> trees_;
  std::vector<std::size_t> columns_;
  int n_classes_ = 0;
};

}  // namespace accentgram::ml

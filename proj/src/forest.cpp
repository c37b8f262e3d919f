#include "accentgram/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "accentgram/error.hpp"
#include "accentgram/rng.hpp"

namespace accentgram::ml {

int ForestConfig::resolved_max_features(std::size_t n_features_used) const {
  const int n = static_cast<int>(n_features_used);
  const int k = max_features.value_or(std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))))));
  if (k < 1 || k > n) throw std::invalid_argument("max_features must lie in [1, number of features used]");
  return k;
}

double gini(std::span<const std::size_t> class_counts) {
  const double n = static_cast<double>(std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}));
  if (n == 0) return 0.0;
  double s = 0.0;
  for (std::size_t c : class_counts) s += (static_cast<double>(c) / n) * (static_cast<double>(c) / n);
  return 1.0 - s;
}

int DecisionTree::predict(std::span<const double> row) const {
  int i = 0;
  while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& node = nodes_[static_cast<std::size_t>(i)];
    i = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(i)].label;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, int n_classes, std::span<const std::size_t> columns,
              const ForestConfig& cfg, Rng& rng)
      : x_(x), y_(y), n_classes_(n_classes), columns_(columns), cfg_(cfg), rng_(rng),
        max_features_(cfg.resolved_max_features(columns.size())) {}

  DecisionTree build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    struct Pending {
      int node;
      std::vector<std::size_t> samples;
      int depth;
    };
    std::vector<Pending> stack;
    tree.nodes_.push_back({});
    stack.push_back({0, std::move(samples), 0});
    // Depth-first, left child first, so RNG consumption order is fixed.
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      const auto counts = class_counts(job.samples);
      tree.nodes_[static_cast<std::size_t>(job.node)].label = majority(counts);

      const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
      const bool depth_capped = cfg_.max_depth && job.depth >= *cfg_.max_depth;
      if (pure || depth_capped || job.samples.size() < 2 * static_cast<std::size_t>(cfg_.min_samples_leaf)) continue;

      const auto split = best_split(job.samples);
      if (!split) continue;

      std::vector<std::size_t> left, right;
      for (std::size_t s : job.samples) (x_(s, split->feature) <= split->threshold ? left : right).push_back(s);

      const int left_id = static_cast<int>(tree.nodes_.size());
      tree.nodes_.push_back({});
      tree.nodes_.push_back({});
      auto& node = tree.nodes_[static_cast<std::size_t>(job.node)];
      node.feature = static_cast<int>(split->feature);
      node.threshold = split->threshold;
      node.left = left_id;
      node.right = left_id + 1;
      stack.push_back({left_id + 1, std::move(right), job.depth + 1});
      stack.push_back({left_id, std::move(left), job.depth + 1});
    }
    return tree;
  }

 private:
  struct Split {
    std::size_t feature;
    double threshold;
    double score;  // Σ_children Σ_k n_k² / n_child; higher is purer
  };

  std::vector<std::size_t> class_counts(const std::vector<std::size_t>& samples) const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
    for (std::size_t s : samples) ++counts[static_cast<std::size_t>(y_[s])];
    return counts;
  }

  static int majority(const std::vector<std::size_t>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& samples) {
    // Partial Fisher–Yates draw of max_features columns without replacement.
    std::vector<std::size_t> pool(columns_.begin(), columns_.end());
    for (int i = 0; i < max_features_; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) + rng_.below(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<std::size_t> candidates(pool.begin(), pool.begin() + max_features_);
    std::sort(candidates.begin(), candidates.end());

    const std::size_t k = static_cast<std::size_t>(n_classes_);
    const auto total = class_counts(samples);
    const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    std::optional<Split> best;
    std::vector<std::pair<double, int>> column(samples.size());
    std::vector<std::size_t> left(k), right(k);
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < samples.size(); ++i) column[i] = {x_(samples[i], f), y_[samples[i]]};
      std::sort(column.begin(), column.end());
      std::fill(left.begin(), left.end(), 0);
      right = total;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        ++left[static_cast<std::size_t>(column[i].second)];
        --right[static_cast<std::size_t>(column[i].second)];
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1, n_right = column.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double sl = 0.0, sr = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          sl += static_cast<double>(left[c]) * static_cast<double>(left[c]);
          sr += static_cast<double>(right[c]) * static_cast<double>(right[c]);
        }
        const double score = sl / static_cast<double>(n_left) + sr / static_cast<double>(n_right);
        // Strict improvement keeps the lower feature index and lower threshold on ties.
        if (!best || score > best->score) {
          best = Split{f, 0.5 * (column[i].first + column[i + 1].first), score};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  int n_classes_;
  std::span<const std::size_t> columns_;
  const ForestConfig& cfg_;
  Rng& rng_;
  int max_features_;
};

RandomForest RandomForest::fit(const Matrix& x, std::span<const int> labels, int n_classes,
                               std::span<const std::size_t> columns, const ForestConfig& cfg) {
  if (x.rows() == 0) throw InputError("cannot fit a forest on an empty training set");
  if (labels.size() != x.rows()) throw std::invalid_argument("label count does not match training rows");
  if (n_classes < 1) throw std::invalid_argument("need at least one class");
  if (cfg.n_trees < 1) throw std::invalid_argument("n_trees must be at least 1");
  if (cfg.min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be at least 1");
  if (columns.empty()) throw std::invalid_argument("feature set is empty");
  for (std::size_t c : columns)
    if (c >= x.cols()) throw std::invalid_argument("feature column out of range");
  for (int y : labels)
    if (y < 0 || y >= n_classes) throw std::invalid_argument("label out of range");
  cfg.resolved_max_features(columns.size());

  RandomForest forest;
  forest.columns_.assign(columns.begin(), columns.end());
  forest.n_classes_ = n_classes;
  forest.trees_.resize(static_cast<std::size_t>(cfg.n_trees));

  const std::size_t n = x.rows();
  auto grow = [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, t, 0x7472656573ULL));
    std::vector<std::size_t> samples(n);
    if (cfg.bootstrap) {
      for (auto& s : samples) s = rng.below(n);
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    TreeBuilder builder(x, labels, n_classes, forest.columns_, cfg, rng);
    forest.trees_[t] = builder.build(std::move(samples));
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(cfg.n_trees));
  if (workers == 1) {
    for (std::size_t t = 0; t < forest.trees_.size(); ++t) grow(t);
    return forest;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t; (t = next.fetch_add(1)) < forest.trees_.size();) {
        try {
          grow(t);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return forest;
}

int RandomForest::predict(std::span<const double> row) const {
  std::vector<std::size_t> votes(static_cast<std::size_t>(n_classes_), 0);
  for (const auto& tree : trees_) ++votes[static_cast<std::size_t>(tree.predict(row))];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<int> RandomForest::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
  return out;
}

}  // namespace accentgram::ml

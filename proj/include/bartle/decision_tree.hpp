// Decision-tree learner: information-gain splits (binary at midpoints for
// numeric features, one branch per value for nominal ones), growth limits
// on leaf size, gain and depth, and bottom-up pruning against a binomial
// upper confidence bound on leaf error.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bartle/dataset.hpp"

#include "json.hpp"

namespace bartle {

struct TrainParams {
  int min_leaf = 2;
  double min_gain = 0.1;
  int max_depth = 20;
  double confidence = 0.01;  // pruning confidence in (0, 0.5]
};

// Shannon entropy in bits; at least one count must be positive.
double entropy(std::span<const std::size_t> class_counts);

// entropy(parent) minus the size-weighted child entropies. Children must
// partition the parent element-wise.
double information_gain(std::span<const std::size_t> parent,
                        const std::vector<std::vector<std::size_t>>& children);

struct SplitDecision {
  std::size_t feature = 0;
  bool numeric = true;
  double threshold = 0;            // numeric: value <= threshold goes left
  std::vector<int> branch_codes;   // nominal: observed codes, ascending
  double gain = 0;
};

// Highest-gain candidate whose every child keeps >= min_leaf examples and
// whose gain reaches min_gain. Ties go to the lexicographically smallest
// feature name, then the smallest threshold.
std::optional<SplitDecision> best_split(const Dataset& data, const TrainParams& params);

struct TreeNode {
  std::vector<std::size_t> class_counts;
  int majority = 0;
  int feature = -1;  // -1 marks a leaf
  bool numeric_split = true;
  double threshold = 0;
  std::vector<int> branch_codes;
  std::vector<std::unique_ptr<TreeNode>> children;

  bool is_leaf() const { return feature < 0; }
  std::size_t total() const;
  double purity() const;
};

using TreePtr = std::unique_ptr<TreeNode>;

// class_count 0 derives the count from the labels present.
TreePtr grow_tree(const Dataset& data, const TrainParams& params, std::size_t class_count = 0);

// Bottom-up subtree replacement; never increases the node count.
void pessimistic_prune(TreeNode& root, double confidence);

// grow + prune.
TreePtr train_tree(const Dataset& data, const TrainParams& params, std::size_t class_count = 0);

// Total expected errors (observed + pessimistic surplus) for a leaf with
// `n` examples and `e` mistakes at the given confidence.
double pessimistic_error(double n, double e, double confidence);

struct Prediction {
  int label = 0;
  double confidence = 0;  // class share at the deciding node
};

// Routes the row to a leaf; an unseen nominal code falls back to the
// current node's majority. Throws when the row is narrower than a tested
// feature index.
Prediction predict(const TreeNode& root, const FeatureRow& row);

std::size_t node_count(const TreeNode& root);
std::size_t tree_depth(const TreeNode& root);  // edges on the longest path

// Indented text dump, one branch condition per line.
std::string format_tree(const TreeNode& root, const Dataset& data,
                        std::span<const std::string> class_names);

// Self-contained serialization: schema, dictionaries, class names, tree.
nlohmann::json tree_to_json(const TreeNode& root, const Dataset& data,
                            std::span<const std::string> class_names);

struct LoadedTree {
  TreePtr root;
  FeatureSchema schema;
  std::vector<std::vector<std::string>> dictionaries;
  std::vector<std::string> class_names;
};

LoadedTree tree_from_json(const nlohmann::json& j);

}  // namespace bartle

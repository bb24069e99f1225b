// Self-training: iteratively retrain a tree on the labeled pool and adopt
// high-confidence predictions from the unlabeled pool until nothing moves.
// Seed labels are never overwritten.
#pragma once

#include <vector>

#include "bartle/decision_tree.hpp"

namespace bartle {

struct SelfTrainParams {
  double confidence_threshold = 0.95;  // adoption cutoff, in (0, 1]
  int max_iterations = 20;
  TrainParams tree_params;
};

struct IterationStat {
  int iteration = 0;
  std::size_t adopted = 0;
  std::size_t remaining = 0;
};

struct SelfTrainResult {
  TreePtr model;  // trained on the final labeled set
  std::vector<int> labels;          // one per unlabeled example, input order
  std::vector<bool> low_confidence; // residuals never adopted, labeled by the final model
  int iterations = 0;
  std::size_t residual_unlabeled = 0;
  bool degenerate = false;  // labeled pool held a single class
  std::vector<IterationStat> progress;
};

// `labeled` must be non-empty and carry labels; `unlabeled` rows share the
// schema and dictionaries. Throws on an empty labeled pool.
SelfTrainResult self_train(const Dataset& labeled, const Dataset& unlabeled,
                           const SelfTrainParams& params, std::size_t class_count = 0);

}  // namespace bartle

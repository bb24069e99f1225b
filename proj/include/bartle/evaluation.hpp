// Stratified k-fold cross-validation, per-class precision/recall, pooled
// confusion matrix, and the attribute-set comparison used to measure how
// much a condensed attribute shrinks the tree.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bartle/decision_tree.hpp"

namespace bartle {

struct ClassMetrics {
  // Percentages; precision is absent when the class was never predicted,
  // recall when it never occurs.
  std::optional<double> precision;
  std::optional<double> recall;
};

struct EvaluationReport {
  std::vector<ClassMetrics> per_class;
  double accuracy_mean = 0;  // percent, mean over folds
  double accuracy_std = 0;   // population standard deviation over folds
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<double> fold_accuracies;
  std::size_t examples = 0;
};

// Stratified fold assignment, deterministic in (ids, labels, seed) and
// independent of row order: examples are keyed by their stable ids.
// Per-class fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_split(const Dataset& data, int k, std::uint64_t seed);

EvaluationReport cross_validate(const Dataset& data, int k, const TrainParams& params,
                                std::uint64_t seed, std::size_t class_count = 0);

struct AttributeSetResult {
  std::vector<std::string> features;
  std::size_t node_count = 0;  // full-fit tree on the projected features
  std::size_t depth = 0;
  double accuracy_mean = 0;
  double accuracy_std = 0;
};

struct ComparisonReport {
  AttributeSetResult first;
  AttributeSetResult second;
};

ComparisonReport compare_attribute_sets(const Dataset& data,
                                        std::span<const std::string> first_set,
                                        std::span<const std::string> second_set, int k,
                                        const TrainParams& params, std::uint64_t seed);

}  // namespace bartle

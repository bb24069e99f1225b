#include "bartle/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "bartle/util.hpp"

namespace bartle {

std::vector<std::vector<std::size_t>> kfold_split(const Dataset& data, int k, std::uint64_t seed) {
  const std::size_t n = data.rows.size();
  if (k < 2 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kfold_split: k outside [2, n]");
  if (data.labels.size() != n) throw std::invalid_argument("kfold_split: labels missing");

  // Sort indices by stable id so the assignment does not depend on row
  // order; fall back to row index when ids are absent.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (data.ids.size() == n) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (data.ids[a] != data.ids[b]) return data.ids[a] < data.ids[b];
      return a < b;
    });
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (const std::size_t i : order) by_class[data.labels[i]].push_back(i);

  // One dealing cursor carried across classes: per-class fold sizes differ
  // by at most one, and no fold stays empty when n >= k.
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t cursor = 0;
  for (auto& [label, members] : by_class) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(label + 1)));
    rng.shuffle(members);
    for (const std::size_t member : members)
      folds[cursor++ % static_cast<std::size_t>(k)].push_back(member);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

EvaluationReport cross_validate(const Dataset& data, int k, const TrainParams& params,
                                std::uint64_t seed, std::size_t class_count) {
  if (class_count == 0)
    for (const int label : data.labels)
      class_count = std::max(class_count, static_cast<std::size_t>(label) + 1);

  const auto folds = kfold_split(data, k, seed);

  EvaluationReport report;
  report.examples = data.rows.size();
  report.confusion.assign(class_count, std::vector<std::size_t>(class_count, 0));

  std::vector<bool> held_out(data.rows.size());
  for (const auto& fold : folds) {
    std::fill(held_out.begin(), held_out.end(), false);
    for (const std::size_t i : fold) held_out[i] = true;

    Dataset train;
    train.schema = data.schema;
    train.dictionaries = data.dictionaries;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      if (held_out[i]) continue;
      train.rows.push_back(data.rows[i]);
      train.labels.push_back(data.labels[i]);
    }
    const TreePtr tree = train_tree(train, params, class_count);

    std::size_t correct = 0;
    for (const std::size_t i : fold) {
      const int predicted = predict(*tree, data.rows[i]).label;
      const int actual = data.labels[i];
      ++report.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)];
      if (predicted == actual) ++correct;
    }
    report.fold_accuracies.push_back(100.0 * static_cast<double>(correct) /
                                     static_cast<double>(fold.size()));
  }

  double mean = 0;
  for (const double a : report.fold_accuracies) mean += a;
  mean /= static_cast<double>(report.fold_accuracies.size());
  double variance = 0;
  for (const double a : report.fold_accuracies) variance += (a - mean) * (a - mean);
  variance /= static_cast<double>(report.fold_accuracies.size());
  report.accuracy_mean = mean;
  report.accuracy_std = std::sqrt(variance);

  report.per_class.resize(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    std::size_t row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < class_count; ++j) {
      row_sum += report.confusion[c][j];
      col_sum += report.confusion[j][c];
    }
    const auto diag = static_cast<double>(report.confusion[c][c]);
    if (col_sum > 0) report.per_class[c].precision = 100.0 * diag / static_cast<double>(col_sum);
    if (row_sum > 0) report.per_class[c].recall = 100.0 * diag / static_cast<double>(row_sum);
  }
  return report;
}

ComparisonReport compare_attribute_sets(const Dataset& data,
                                        std::span<const std::string> first_set,
                                        std::span<const std::string> second_set, int k,
                                        const TrainParams& params, std::uint64_t seed) {
  if (first_set.empty() || second_set.empty())
    throw std::invalid_argument("compare_attribute_sets: empty feature set");

  const auto evaluate = [&](std::span<const std::string> feature_set) {
    const Dataset projected = project(data, feature_set);
    AttributeSetResult result;
    result.features.assign(feature_set.begin(), feature_set.end());
    const TreePtr tree = train_tree(projected, params);
    result.node_count = node_count(*tree);
    result.depth = tree_depth(*tree);
    const EvaluationReport report = cross_validate(projected, k, params, seed);
    result.accuracy_mean = report.accuracy_mean;
    result.accuracy_std = report.accuracy_std;
    return result;
  };

  ComparisonReport report;
  report.first = evaluate(first_set);
  report.second = evaluate(second_set);
  return report;
}

}  // namespace bartle

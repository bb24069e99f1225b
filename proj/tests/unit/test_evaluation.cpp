#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"

#include "bartle/evaluation.hpp"

using namespace bartle;

namespace {

Dataset labeled_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  Dataset d;
  std::vector<FeatureDef> defs;
  for (std::size_t f = 0; f < rows.at(0).size(); ++f)
    defs.push_back({"f" + std::to_string(f), FeatureKind::Numeric});
  d.schema = FeatureSchema(defs);
  d.dictionaries.resize(defs.size());
  d.rows = rows;
  d.labels = labels;
  for (std::size_t i = 0; i < rows.size(); ++i) d.ids.push_back("id" + std::to_string(i));
  return d;
}

Dataset class_mix_dataset(std::mt19937_64& rng, const std::vector<std::size_t>& class_sizes) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t c = 0; c < class_sizes.size(); ++c)
    for (std::size_t i = 0; i < class_sizes[c]; ++i) {
      rows.push_back({static_cast<double>(c) * 10 + static_cast<double>(rng() % 3),
                      static_cast<double>(rng() % 5)});
      labels.push_back(static_cast<int>(c));
    }
  return labeled_dataset(rows, labels);
}

}  // namespace

TEST_CASE("k folds are disjoint, exhaustive and near-equal") {
  std::mt19937_64 rng(1);
  const Dataset d = class_mix_dataset(rng, {10});
  const auto folds = kfold_split(d, 5, 17);
  REQUIRE(folds.size() == 5);
  std::set<std::size_t> seen;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 2);
    for (const std::size_t i : fold) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == 10);
}

TEST_CASE("folds are stratified per class") {
  std::mt19937_64 rng(2);
  const Dataset d = class_mix_dataset(rng, {50, 30, 20});
  const auto folds = kfold_split(d, 5, 3);
  for (const auto& fold : folds) {
    std::size_t per_class[3] = {0, 0, 0};
    for (const std::size_t i : fold) ++per_class[d.labels[i]];
    CHECK(per_class[0] == 10);
    CHECK(per_class[1] == 6);
    CHECK(per_class[2] == 4);
  }
}

TEST_CASE("many tiny classes still fill every fold") {
  std::mt19937_64 rng(8);
  const Dataset d = class_mix_dataset(rng, {2, 2, 2});
  const auto folds = kfold_split(d, 5, 4);
  for (const auto& fold : folds) CHECK_FALSE(fold.empty());
  // and cross-validation stays finite
  const EvaluationReport report = cross_validate(d, 5, {}, 4);
  CHECK(report.fold_accuracies.size() == 5);
  for (const double a : report.fold_accuracies) CHECK(a == a);  // not NaN
}

TEST_CASE("fold assignment is a deterministic function of the seed") {
  std::mt19937_64 rng(3);
  const Dataset d = class_mix_dataset(rng, {40, 40});
  CHECK(kfold_split(d, 5, 7) == kfold_split(d, 5, 7));
  CHECK(kfold_split(d, 5, 7) != kfold_split(d, 5, 8));
  CHECK_THROWS_AS(kfold_split(d, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS(kfold_split(d, 81, 7), std::invalid_argument);
}

TEST_CASE("fold assignment keys on ids, not row order") {
  std::mt19937_64 rng(4);
  const Dataset d = class_mix_dataset(rng, {30, 30});
  const EvaluationReport base = cross_validate(d, 5, {}, 11);

  // permute rows (ids travel with their rows)
  Dataset shuffled;
  shuffled.schema = d.schema;
  shuffled.dictionaries = d.dictionaries;
  std::vector<std::size_t> order(d.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (const std::size_t i : order) {
    shuffled.rows.push_back(d.rows[i]);
    shuffled.labels.push_back(d.labels[i]);
    shuffled.ids.push_back(d.ids[i]);
  }
  const EvaluationReport moved = cross_validate(shuffled, 5, {}, 11);
  CHECK(base.fold_accuracies == moved.fold_accuracies);
  CHECK(base.confusion == moved.confusion);
  CHECK(base.accuracy_mean == moved.accuracy_mean);
}

TEST_CASE("a label-determining attribute scores perfectly") {
  std::mt19937_64 rng(5);
  const Dataset d = class_mix_dataset(rng, {20, 20, 20});
  const EvaluationReport report = cross_validate(d, 5, {}, 2);
  CHECK(report.accuracy_mean == doctest::Approx(100.0));
  CHECK(report.accuracy_std == doctest::Approx(0.0));
  for (const auto& metrics : report.per_class) {
    CHECK(metrics.precision == doctest::Approx(100.0));
    CHECK(metrics.recall == doctest::Approx(100.0));
  }
  CHECK(report.examples == 60);
  std::size_t confusion_total = 0;
  for (const auto& row : report.confusion)
    for (const std::size_t v : row) confusion_total += v;
  CHECK(confusion_total == 60);
}

TEST_CASE("a class that is never predicted reports precision as absent") {
  // class 1 rows are identical to class 0 rows; majority tie-break always
  // predicts 0, so 1 never appears in the predictions
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 12; ++i) {
    rows.push_back({static_cast<double>(i % 3)});
    labels.push_back(0);
    rows.push_back({static_cast<double>(i % 3)});
    labels.push_back(1);
  }
  const Dataset d = labeled_dataset(rows, labels);
  const EvaluationReport report = cross_validate(d, 4, {}, 1);
  CHECK_FALSE(report.per_class[1].precision.has_value());
  CHECK(report.per_class[1].recall == doctest::Approx(0.0));
  CHECK(report.per_class[0].precision.has_value());

  // a class id with no examples at all has no recall either
  const EvaluationReport padded = cross_validate(d, 4, {}, 1, 3);
  CHECK_FALSE(padded.per_class[2].precision.has_value());
  CHECK_FALSE(padded.per_class[2].recall.has_value());
}

TEST_CASE("pooled confusion accuracy is consistent with fold accuracies") {
  std::mt19937_64 rng(6);
  // noisy data so accuracy is not trivially 100
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 97; ++i) {
    const int c = static_cast<int>(rng() % 2);
    rows.push_back({static_cast<double>(c) + static_cast<double>(rng() % 4)});
    labels.push_back(c);
  }
  const Dataset d = labeled_dataset(rows, labels);
  const EvaluationReport report = cross_validate(d, 5, {}, 9);

  std::size_t diagonal = 0, total = 0;
  for (std::size_t r = 0; r < report.confusion.size(); ++r)
    for (std::size_t c = 0; c < report.confusion[r].size(); ++c) {
      total += report.confusion[r][c];
      if (r == c) diagonal += report.confusion[r][c];
    }
  CHECK(total == d.rows.size());
  const double pooled = 100.0 * static_cast<double>(diagonal) / static_cast<double>(total);

  // weighted fold mean equals pooled accuracy exactly
  const auto folds = kfold_split(d, 5, 9);
  double weighted = 0;
  for (std::size_t f = 0; f < folds.size(); ++f)
    weighted += report.fold_accuracies[f] * static_cast<double>(folds[f].size());
  weighted /= static_cast<double>(total);
  CHECK(weighted == doctest::Approx(pooled).epsilon(1e-9));
  // plain mean sits within the fold-size rounding of the pooled value
  CHECK(report.accuracy_mean == doctest::Approx(pooled).epsilon(0.05));
}

TEST_CASE("compare_attribute_sets contrasts feature subsets") {
  std::mt19937_64 rng(7);
  // f0 alone determines the label; f1 and f2 also determine it, but only
  // jointly, so the fallback tree needs more structure
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 120; ++i) {
    const int c = static_cast<int>(rng() % 2);
    const int region = static_cast<int>(rng() % 3);
    double f1, f2 = static_cast<double>(rng() % 2);
    if (region == 0) f1 = c;
    else if (region == 1) f1 = 2 + c;
    else {
      f1 = 4;
      f2 = c;
    }
    rows.push_back({static_cast<double>(c), f1, f2});
    labels.push_back(c);
  }
  const Dataset d = labeled_dataset(rows, labels);

  const std::vector<std::string> determining = {"f0"};
  const std::vector<std::string> indirect = {"f1", "f2"};
  const ComparisonReport r = compare_attribute_sets(d, determining, indirect, 5, {}, 3);
  CHECK(r.first.node_count < r.second.node_count);
  CHECK(r.first.accuracy_mean == doctest::Approx(100.0));
  CHECK(r.second.accuracy_mean == doctest::Approx(100.0));

  const ComparisonReport same = compare_attribute_sets(d, determining, determining, 5, {}, 3);
  CHECK(same.first.node_count == same.second.node_count);
  CHECK(same.first.accuracy_mean == same.second.accuracy_mean);
  CHECK(same.first.depth == same.second.depth);

  const std::vector<std::string> unknown = {"nope"};
  CHECK_THROWS_AS(compare_attribute_sets(d, determining, unknown, 5, {}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_attribute_sets(d, {}, determining, 5, {}, 3), std::invalid_argument);
}

// Acceptance suite. Each criterion runs as one test case and prints a
// single PASS/FAIL line with its runtime, so `ctest -V -R acceptance`
// reads as a checklist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bartle/dataset.hpp"
#include "bartle/decision_tree.hpp"
#include "bartle/evaluation.hpp"
#include "bartle/pipeline.hpp"
#include "bartle/profile.hpp"
#include "bartle/seed_labeler.hpp"
#include "bartle/self_training.hpp"
#include "bartle/session.hpp"
#include "bartle/synth.hpp"
#include "bartle/util.hpp"
#include "bartle/zone_catalog.hpp"

#include "../test_helpers.hpp"

using namespace bartle;
namespace bt = bartle::testing;
namespace fs = std::filesystem;

namespace {

class Criterion {
 public:
  Criterion(int number, const char* title) : number_(number), title_(title) {}

  void fail(const std::string& why) {
    ok_ = false;
    if (!why_.empty()) why_ += "; ";
    why_ += why;
  }

  bool finish(double elapsed_seconds) {
    std::printf("[criterion %d] %s — %s (%.2f s)%s%s\n", number_, ok_ ? "PASS" : "FAIL", title_,
                elapsed_seconds, why_.empty() ? "" : ": ", why_.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int number_;
  const char* title_;
  bool ok_ = true;
  std::string why_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const ZoneCatalog& shipped_catalog() {
  static ZoneCatalog catalog = [] {
    std::ifstream in(BARTLE_DATA_DIR "/zones.csv");
    if (!in) throw std::runtime_error("missing shipped zone catalog");
    return std::move(load_zone_catalog(in).catalog);
  }();
  return catalog;
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t numeric_features,
                       std::size_t nominal_features, std::size_t classes, std::size_t span) {
  Dataset d;
  std::vector<FeatureDef> defs;
  for (std::size_t f = 0; f < numeric_features; ++f)
    defs.push_back({"n" + std::to_string(f), FeatureKind::Numeric});
  for (std::size_t f = 0; f < nominal_features; ++f)
    defs.push_back({"c" + std::to_string(f), FeatureKind::Nominal});
  d.schema = FeatureSchema(defs);
  d.dictionaries.resize(defs.size());
  for (std::size_t f = numeric_features; f < defs.size(); ++f)
    d.dictionaries[f] = {"a", "b", "c", "d"};
  for (std::size_t i = 0; i < n; ++i) {
    FeatureRow row;
    for (std::size_t f = 0; f < numeric_features; ++f)
      row.push_back(static_cast<double>(rng() % span));
    for (std::size_t f = 0; f < nominal_features; ++f)
      row.push_back(static_cast<double>(rng() % 4));
    d.rows.push_back(row);
    d.labels.push_back(static_cast<int>(rng() % classes));
  }
  return d;
}

}  // namespace

TEST_CASE("criterion 1: entropy and gain match a direct Shannon oracle") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(1, "entropy/gain oracle, 1000 random vectors and partitions, < 1 s");
  std::mt19937_64 rng(101);

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t classes = 2 + rng() % 5;
    std::vector<std::size_t> parent(classes, 0);
    std::size_t total = 0;
    for (std::size_t c = 0; c < classes; ++c) total += parent[c] = rng() % 30;
    if (total == 0) { parent[0] = 1; total = 1; }

    if (std::abs(entropy(parent) - bt::oracle_entropy(parent)) > 1e-9)
      criterion.fail("entropy mismatch");

    const std::size_t k = 2 + rng() % 4;
    std::vector<std::vector<std::size_t>> children(k, std::vector<std::size_t>(classes, 0));
    for (std::size_t c = 0; c < classes; ++c)
      for (std::size_t v = 0; v < parent[c]; ++v) ++children[rng() % k][c];

    const double gain = information_gain(parent, children);
    if (std::abs(gain - std::max(0.0, bt::oracle_gain(parent, children))) > 1e-9)
      criterion.fail("gain mismatch");
    if (gain < 0 || gain > entropy(parent) + 1e-12) criterion.fail("gain out of bounds");
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 1.0) criterion.fail("runtime over 1 s");
  CHECK(criterion.finish(elapsed));
}

TEST_CASE("criterion 2: best_split equals exhaustive enumeration") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(2, "split search vs brute force on 200 tiny datasets, < 5 s");
  std::mt19937_64 rng(202);

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const Dataset d = random_dataset(rng, n, 2, 1, 2 + rng() % 2, 4);
    TrainParams params;
    params.min_leaf = 1 + static_cast<int>(rng() % 2);
    params.min_gain = 0.05 * static_cast<double>(rng() % 4);

    const auto actual = best_split(d, params);
    const auto expected = bt::brute_force_best_split(d, params);
    if (actual.has_value() != expected.has_value()) {
      criterion.fail("presence mismatch at trial " + std::to_string(trial));
      continue;
    }
    if (!actual) continue;
    if (actual->feature != expected->feature || actual->numeric != expected->numeric ||
        (actual->numeric && actual->threshold != expected->threshold) ||
        (!actual->numeric && actual->branch_codes != expected->branch_codes))
      criterion.fail("split mismatch at trial " + std::to_string(trial));
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 5.0) criterion.fail("runtime over 5 s");
  CHECK(criterion.finish(elapsed));
}

TEST_CASE("criterion 3: structural limits hold on 10,000 fuzzed datasets") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(3, "tree constraints on 10,000 fuzzed datasets, < 60 s");
  std::mt19937_64 rng(303);
  const TrainParams params;  // min_leaf 2, min_gain 0.1, max_depth 20, confidence 0.01

  // checks every internal node: child support and split gain
  const std::function<bool(const TreeNode&, const Dataset&, std::vector<std::size_t>&)> walk =
      [&](const TreeNode& node, const Dataset& d, std::vector<std::size_t>& idx) -> bool {
    if (node.is_leaf()) return true;
    std::vector<std::size_t> parent_counts(node.class_counts.size(), 0);
    for (const std::size_t i : idx) ++parent_counts[static_cast<std::size_t>(d.labels[i])];
    std::vector<std::vector<std::size_t>> child_counts;
    std::vector<std::vector<std::size_t>> child_idx(node.children.size());
    for (std::size_t b = 0; b < node.children.size(); ++b) {
      for (const std::size_t i : idx) {
        const double v = d.rows[i][static_cast<std::size_t>(node.feature)];
        const bool here = node.numeric_split
                              ? (b == 0 ? v <= node.threshold : v > node.threshold)
                              : static_cast<int>(v) == node.branch_codes[b];
        if (here) child_idx[b].push_back(i);
      }
      if (child_idx[b].size() < 2) return false;  // min_leaf violated
      std::vector<std::size_t> counts(node.class_counts.size(), 0);
      for (const std::size_t i : child_idx[b]) ++counts[static_cast<std::size_t>(d.labels[i])];
      child_counts.push_back(std::move(counts));
    }
    if (information_gain(parent_counts, child_counts) < params.min_gain - 1e-9) return false;
    for (std::size_t b = 0; b < node.children.size(); ++b)
      if (!walk(*node.children[b], d, child_idx[b])) return false;
    return true;
  };

  for (int trial = 0; trial < 10000; ++trial) {
    const Dataset d =
        random_dataset(rng, 4 + rng() % 56, 1 + rng() % 3, rng() % 2, 2 + rng() % 3, 3 + rng() % 6);
    const TreePtr grown = grow_tree(d, params);
    if (tree_depth(*grown) > 20) { criterion.fail("depth over 20"); break; }
    std::vector<std::size_t> idx(d.rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (!walk(*grown, d, idx)) { criterion.fail("split constraint violated"); break; }

    const std::size_t before = node_count(*grown);
    pessimistic_prune(*grown, params.confidence);
    if (node_count(*grown) > before) { criterion.fail("pruning grew the tree"); break; }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) criterion.fail("runtime over 60 s");
  CHECK(criterion.finish(elapsed));
}

TEST_CASE("criterion 4: rule labeler agrees with an independent coding") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(4, "seed rules vs independent predicates on 10,000 fuzzed profiles");
  std::mt19937_64 rng(404);

  const std::vector<double> level_pool = {1, 29, 30, 31, 59, 60, 61, 80};
  const std::vector<double> share_pool = {0, 10, 29, 30, 31, 50, 69, 70, 71, 100};
  const std::vector<double> zone_pool = {0, 5, 9, 10, 11, 24, 25, 29, 30, 31, 60};
  const std::vector<double> time_pool = {0, 100, 1799, 1800, 1801, 4000};
  const std::vector<double> speed_pool = {0, 5, 14, 15, 16, 24, 25, 26, 43.9};

  std::size_t disagreements = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    PlayerProfile p;
    p.player_id = "F" + std::to_string(trial);
    p.final_level = static_cast<int>(level_pool[rng() % level_pool.size()]);
    p.initial_level = 1;
    p.evolution = p.final_level - 1;
    p.playtime_hours = time_pool[rng() % time_pool.size()];
    p.zones_visited = static_cast<std::size_t>(zone_pool[rng() % zone_pool.size()]);
    p.level_speed = speed_pool[rng() % speed_pool.size()];
    // shares drawn independently per tier; the rules only read sums
    for (auto& share : p.tier_share) share = share_pool[rng() % share_pool.size()];
    const auto actual = seed_label(p);
    const auto expected = bt::oracle_seed_label(p);
    if (actual != expected) ++disagreements;
  }
  if (disagreements > 0)
    criterion.fail(std::to_string(disagreements) + " disagreements out of 10000");
  CHECK(criterion.finish(seconds_since(start)));
}

TEST_CASE("criterion 5: end-to-end synthetic population, 10,000 players") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(5, "10k-player run: coverage in [0.25,0.35], accuracy >= 95, E/S recall >= 90, < 60 s");

  const PopulationSpec spec = paper_like_spec(10000, 0.7, 42);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  auto profiles = build_profiles(population.records, shipped_catalog(), spec.interval_minutes);
  const int days = window_days(spec.window_start, spec.window_end);
  const auto [players, gms] = partition_gms(std::move(profiles), days);

  const SeedLabeling seeds = seed_dataset(players);
  if (seeds.coverage() < 0.25 || seeds.coverage() > 0.35)
    criterion.fail("seed coverage " + format_fixed2(seeds.coverage() * 100) + "%");

  const Dataset all = make_dataset(players, seeds.assignments, default_feature_defs());
  const auto [labeled, unlabeled] = split_by_label(all);
  const SelfTrainResult st = self_train(labeled, unlabeled, {}, kBehaviorCount);

  std::map<std::string, Behavior> final_labels = seeds.assignments;
  for (std::size_t i = 0; i < unlabeled.ids.size(); ++i)
    final_labels.emplace(unlabeled.ids[i], static_cast<Behavior>(st.labels[i]));

  const Dataset eval_data = make_dataset(players, final_labels, default_feature_defs());
  const EvaluationReport report = cross_validate(eval_data, 5, {}, 42, kBehaviorCount);

  if (report.accuracy_mean < 95.0)
    criterion.fail("accuracy " + format_fixed2(report.accuracy_mean));
  const auto recall_of = [&](Behavior b) {
    const auto& metrics = report.per_class[static_cast<std::size_t>(b)];
    return metrics.recall ? *metrics.recall : 0.0;
  };
  if (recall_of(Behavior::Explorer) < 90.0)
    criterion.fail("explorer recall " + format_fixed2(recall_of(Behavior::Explorer)));
  if (recall_of(Behavior::Socializer) < 90.0)
    criterion.fail("socializer recall " + format_fixed2(recall_of(Behavior::Socializer)));

  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) criterion.fail("runtime over 60 s");
  CHECK(criterion.finish(elapsed));
}

TEST_CASE("criterion 6: gm detection is exact on constructed populations") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(6, "GM detection precision and recall = 100%");

  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    PopulationSpec spec = paper_like_spec(2000, 0.5, seed);
    spec.counts.gm = 25;
    const SyntheticPopulation population = generate_population(spec, shipped_catalog());
    auto profiles = build_profiles(population.records, shipped_catalog(), spec.interval_minutes);
    const int days = window_days(spec.window_start, spec.window_end);
    const auto [players, gms] = partition_gms(std::move(profiles), days);

    std::set<std::string> truth;
    for (const auto& [id, archetype] : population.truth.archetypes)
      if (archetype == Archetype::Gm) truth.insert(id);
    std::set<std::string> detected;
    for (const auto& gm : gms) detected.insert(gm.player_id);
    if (detected != truth) {
      criterion.fail("seed " + std::to_string(seed) + ": detected " +
                     std::to_string(detected.size()) + " of " + std::to_string(truth.size()));
    }
  }
  CHECK(criterion.finish(seconds_since(start)));
}

TEST_CASE("criterion 7: the condensed attribute shrinks the tree") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(7, "level_speed condensation over 20 seeds: smaller-or-equal trees in >= 80%, accuracy within 1 point");

  std::vector<std::string> with_speed, without_speed;
  for (const auto& def : default_feature_defs(true)) with_speed.push_back(def.name);
  for (const auto& def : default_feature_defs(false)) without_speed.push_back(def.name);

  int smaller_or_equal = 0;
  double accuracy_delta_sum = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PopulationSpec spec = paper_like_spec(1500, 0.7, seed * 31 + 7);
    const SyntheticPopulation population = generate_population(spec, shipped_catalog());
    auto profiles = build_profiles(population.records, shipped_catalog(), spec.interval_minutes);
    const int days = window_days(spec.window_start, spec.window_end);
    const auto [players, gms] = partition_gms(std::move(profiles), days);

    const SeedLabeling seeds = seed_dataset(players);
    const Dataset all = make_dataset(players, seeds.assignments, default_feature_defs());
    const auto [labeled, unlabeled] = split_by_label(all);
    const SelfTrainResult st = self_train(labeled, unlabeled, {}, kBehaviorCount);
    std::map<std::string, Behavior> final_labels = seeds.assignments;
    for (std::size_t i = 0; i < unlabeled.ids.size(); ++i)
      final_labels.emplace(unlabeled.ids[i], static_cast<Behavior>(st.labels[i]));

    const Dataset eval_data = make_dataset(players, final_labels, default_feature_defs());
    const ComparisonReport r =
        compare_attribute_sets(eval_data, with_speed, without_speed, 5, {}, seed);
    if (r.first.node_count <= r.second.node_count) ++smaller_or_equal;
    accuracy_delta_sum += r.first.accuracy_mean - r.second.accuracy_mean;
  }
  if (smaller_or_equal < 16)
    criterion.fail("smaller-or-equal in only " + std::to_string(smaller_or_equal) + "/20 seeds");
  if (accuracy_delta_sum / 20.0 < -1.0)
    criterion.fail("average accuracy drop " + format_fixed2(-accuracy_delta_sum / 20.0) + " points");
  CHECK(criterion.finish(seconds_since(start)));
}

TEST_CASE("criterion 8: the full pipeline is byte-identical across runs") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(8, "identical config and seed give byte-identical output directories");

  const fs::path dir = fs::temp_directory_path() / "bartle_acceptance" / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const PopulationSpec spec = paper_like_spec(1500, 0.6, 1337);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  {
    std::ofstream log(dir / "log.csv", std::ios::binary);
    write_session_log(log, population.records);
  }

  PipelineConfig config;
  config.log_path = (dir / "log.csv").string();
  config.zones_path = BARTLE_DATA_DIR "/zones.csv";
  config.interval_minutes = spec.interval_minutes;
  config.rng_seed = 4242;

  // identical out_dir contents require identical config; run into two
  // directories once with each of two configs differing only in out path,
  // then a literal re-run into a cleaned first path
  config.out_dir = (dir / "out_a").string();
  run_pipeline(config);
  const auto snapshot = [&](const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream content;
      content << in.rdbuf();
      files[fs::relative(entry.path(), root).string()] = content.str();
    }
    return files;
  };
  const auto first = snapshot(config.out_dir);

  fs::remove_all(config.out_dir);
  run_pipeline(config);
  const auto second = snapshot(config.out_dir);

  if (first != second) criterion.fail("re-run changed at least one output file");
  if (first.empty()) criterion.fail("no outputs were produced");
  CHECK(criterion.finish(seconds_since(start)));
}

TEST_CASE("criterion 9: reference table cells render exactly") {
  const auto start = std::chrono::steady_clock::now();
  Criterion criterion(9, "table formatting: \"97.62 / 98.97\" and \"99.55 ± 0.09\"");

  if (format_metric_cell({97.62, 98.97}) != "97.62 / 98.97") criterion.fail("precision/recall cell");
  if (format_accuracy_cell(99.55, 0.09) != "99.55 ± 0.09") criterion.fail("accuracy cell");

  EvaluationReport reference;
  reference.per_class = {{97.62, 98.97}, {100.0, 99.66}, {99.58, 99.03}, {99.81, 100.0}};
  reference.accuracy_mean = 99.55;
  reference.accuracy_std = 0.09;
  const std::vector<WindowReport> reports = {{"2006", reference}};
  const std::string table = emit_table1(reports);
  if (table.find("97.62 / 98.97") == std::string::npos) criterion.fail("cell missing from table");
  if (table.find("99.55 ± 0.09") == std::string::npos)
    criterion.fail("accuracy missing from table");
  if (table.find("100 / 99.66") == std::string::npos) criterion.fail("whole-hundred cell");
  CHECK(criterion.finish(seconds_since(start)));
}

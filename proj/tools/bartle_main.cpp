// bartle: player-behavior pipeline over session-snapshot logs.
//
// Subcommands mirror the pipeline stages so each can be inspected on its
// own: synth, ingest, zones, featurize, label, train, evaluate,
// compare-attrs, and run (the full pipeline).
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

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

namespace {

using namespace bartle;
using nlohmann::json;

ZoneCatalog load_catalog_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("[zones] cannot open " + path);
  auto loaded = load_zone_catalog(in);
  if (loaded.catalog.size() == 0) throw std::runtime_error("[zones] catalog is empty: " + path);
  return std::move(loaded.catalog);
}

std::vector<SessionRecord> load_log(const std::string& path, const std::string& column_map_path,
                                    IngestStats* stats_out = nullptr) {
  ColumnMap columns;
  if (!column_map_path.empty()) {
    std::ifstream in(column_map_path);
    if (!in) throw std::runtime_error("[ingest] cannot open column map " + column_map_path);
    columns = ColumnMap::parse(in);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("[ingest] cannot open " + path);
  auto parsed = parse_session_log(in, columns);
  if (stats_out) *stats_out = parsed.stats;
  return std::move(parsed.records);
}

std::vector<PlayerProfile> load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("[featurize] cannot open " + path);
  return read_profiles_csv(in);
}

std::map<std::string, Behavior> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("[label] cannot open " + path);
  std::map<std::string, Behavior> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (first && std::string_view(trimmed).starts_with("player_id")) { first = false; continue; }
    first = false;
    const auto fields = split(trimmed, ',');
    if (fields.size() < 2) throw std::runtime_error("[label] bad labels row: " + line);
    if (const auto b = parse_behavior(trim(fields[1]))) labels.emplace(trim(fields[0]), *b);
  }
  return labels;
}

json ingest_stats_json(const IngestStats& stats) {
  json j;
  j["rows_read"] = stats.rows_read;
  j["rows_accepted"] = stats.rows_accepted;
  j["rows_rejected"] = stats.rows_rejected;
  json reasons = json::object();
  for (const auto& [reason, n] : stats.reject_reasons) reasons[std::string(to_string(reason))] = n;
  j["reject_reasons"] = reasons;
  auto& rejected = j["rejected_lines"] = json::array();
  for (std::size_t i = 0; i < stats.rejected_lines.size() && i < 100; ++i)
    rejected.push_back({{"line", stats.rejected_lines[i].line_number},
                        {"reason", std::string(to_string(stats.rejected_lines[i].reason))}});
  if (stats.rejected_lines.size() > 100) j["rejected_lines_truncated"] = true;
  j["distinct_players"] = stats.distinct_players;
  if (stats.first_timestamp) j["first_timestamp"] = format_timestamp(*stats.first_timestamp);
  if (stats.last_timestamp) j["last_timestamp"] = format_timestamp(*stats.last_timestamp);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Player-behavior pipeline for MMO session logs"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic session log with ground truth");
  std::string synth_out = "synthetic.csv", synth_truth = "ground_truth.csv";
  std::string synth_zones = "data/zones.csv";
  std::size_t synth_players = 2000;
  double synth_margin = 0.7;
  std::uint64_t synth_seed = 42;
  int synth_interval = 600;
  int synth_years = 1;
  synth->add_option("--out", synth_out, "Output session log");
  synth->add_option("--truth", synth_truth, "Ground-truth sidecar CSV");
  synth->add_option("--zones", synth_zones, "Zone catalog");
  synth->add_option("--players", synth_players, "Population size");
  synth->add_option("--margin", synth_margin, "Near-threshold fraction per behavior class");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--interval", synth_interval, "Snapshot interval in minutes");
  synth->add_option("--years", synth_years, "Window length in calendar years from 2006");

  auto* ingest = app.add_subcommand("ingest", "Parse and validate a session log");
  std::string ingest_log, ingest_columns;
  ingest->add_option("--log", ingest_log, "Session log")->required();
  ingest->add_option("--column-map", ingest_columns, "Column map config");

  auto* zones = app.add_subcommand("zones", "Zone catalog utilities");
  zones->require_subcommand(1);
  auto* zones_validate = zones->add_subcommand("validate", "Check a zone catalog file");
  std::string zones_file = "data/zones.csv";
  zones_validate->add_option("--file", zones_file, "Catalog CSV/TSV");

  auto* featurize = app.add_subcommand("featurize", "Build per-player profiles");
  std::string feat_log, feat_zones = "data/zones.csv", feat_columns, feat_out = "profiles.csv";
  int feat_interval = 10;
  featurize->add_option("--log", feat_log, "Session log")->required();
  featurize->add_option("--zones", feat_zones, "Zone catalog");
  featurize->add_option("--column-map", feat_columns, "Column map config");
  featurize->add_option("--out", feat_out, "Output profiles CSV");
  featurize->add_option("--interval", feat_interval, "Snapshot interval in minutes");

  auto* label = app.add_subcommand("label", "Seed-label profiles with the behavior rules");
  std::string label_profiles, label_thresholds, label_out = "seed_labels.csv";
  label->add_option("--profiles", label_profiles, "Profiles CSV")->required();
  label->add_option("--thresholds", label_thresholds, "Threshold config");
  label->add_option("--out", label_out, "Output labels CSV");

  auto* train = app.add_subcommand("train", "Train a decision tree on labeled profiles");
  std::string train_profiles, train_labels, train_out = "tree.json", train_txt;
  TrainParams train_params;
  train->add_option("--profiles", train_profiles, "Profiles CSV")->required();
  train->add_option("--labels", train_labels, "Labels CSV")->required();
  train->add_option("--out", train_out, "Output tree JSON");
  train->add_option("--dump", train_txt, "Optional text dump path");
  train->add_option("--min-leaf", train_params.min_leaf, "Minimal leaf size");
  train->add_option("--min-gain", train_params.min_gain, "Minimal gain");
  train->add_option("--max-depth", train_params.max_depth, "Maximal depth");
  train->add_option("--confidence", train_params.confidence, "Pruning confidence");

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate labeled profiles");
  std::string eval_profiles, eval_labels;
  int eval_folds = 5;
  std::uint64_t eval_seed = 1;
  TrainParams eval_params;
  evaluate->add_option("--profiles", eval_profiles, "Profiles CSV")->required();
  evaluate->add_option("--labels", eval_labels, "Labels CSV")->required();
  evaluate->add_option("--folds", eval_folds, "Fold count");
  evaluate->add_option("--seed", eval_seed, "Fold assignment seed");
  evaluate->add_option("--min-leaf", eval_params.min_leaf, "Minimal leaf size");
  evaluate->add_option("--min-gain", eval_params.min_gain, "Minimal gain");
  evaluate->add_option("--max-depth", eval_params.max_depth, "Maximal depth");
  evaluate->add_option("--confidence", eval_params.confidence, "Pruning confidence");

  auto* compare = app.add_subcommand("compare-attrs",
                                     "Compare tree size and accuracy with/without an attribute");
  std::string cmp_profiles, cmp_labels, cmp_feature = std::string(kFeatureLevelSpeed);
  int cmp_folds = 5;
  std::uint64_t cmp_seed = 1;
  compare->add_option("--profiles", cmp_profiles, "Profiles CSV")->required();
  compare->add_option("--labels", cmp_labels, "Labels CSV")->required();
  compare->add_option("--feature", cmp_feature, "Attribute to toggle");
  compare->add_option("--folds", cmp_folds, "Fold count");
  compare->add_option("--seed", cmp_seed, "Fold assignment seed");

  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  std::string run_config;
  std::string run_out;
  std::uint64_t run_seed = 0;
  int run_year = 0;
  int run_folds = 0;
  run->add_option("--config", run_config, "Pipeline config file")->required();
  run->add_option("--out", run_out, "Override output directory");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Override RNG seed");
  auto* run_year_opt = run->add_option("--year", run_year, "Restrict to one calendar year");
  auto* run_folds_opt = run->add_option("--folds", run_folds, "Override fold count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const ZoneCatalog catalog = load_catalog_or_die(synth_zones);
      PopulationSpec spec = paper_like_spec(synth_players, synth_margin, synth_seed);
      spec.interval_minutes = synth_interval;
      spec.window_start = make_timestamp(2006, 1, 1);
      spec.window_end = make_timestamp(2005 + synth_years, 12, 31, 23, 50);
      const auto population = generate_population(spec, catalog);
      {
        std::ofstream out(synth_out, std::ios::binary);
        if (!out) throw std::runtime_error("[synth] cannot write " + synth_out);
        write_session_log(out, population.records);
      }
      {
        std::ofstream out(synth_truth, std::ios::binary);
        if (!out) throw std::runtime_error("[synth] cannot write " + synth_truth);
        write_ground_truth_csv(out, population.truth);
      }
      std::cout << "players=" << population.truth.archetypes.size()
                << " records=" << population.records.size() << "\n";
    } else if (*ingest) {
      IngestStats stats;
      load_log(ingest_log, ingest_columns, &stats);
      std::cout << ingest_stats_json(stats).dump(2) << "\n";
      if (stats.rows_accepted == 0) return 1;
    } else if (*zones_validate) {
      std::ifstream in(zones_file);
      if (!in) throw std::runtime_error("[zones] cannot open " + zones_file);
      const auto loaded = load_zone_catalog(in);
      json j;
      j["entries"] = loaded.catalog.size();
      j["rows_read"] = loaded.stats.rows_read;
      j["duplicates"] = loaded.stats.duplicates;
      j["rejected"] = loaded.stats.rejected;
      json reasons = json::object();
      for (const auto& [reason, n] : loaded.stats.reject_reasons) reasons[reason] = n;
      j["reject_reasons"] = reasons;
      std::cout << j.dump(2) << "\n";
      if (loaded.stats.rejected > 0) return 1;
    } else if (*featurize) {
      const ZoneCatalog catalog = load_catalog_or_die(feat_zones);
      const auto records = load_log(feat_log, feat_columns);
      const auto profiles = build_profiles(records, catalog, feat_interval);
      std::ofstream out(feat_out, std::ios::binary);
      if (!out) throw std::runtime_error("[featurize] cannot write " + feat_out);
      write_profiles_csv(out, profiles);
      std::cout << "profiles=" << profiles.size() << " unknown_zone_hits=" << catalog.unknown_hits()
                << "\n";
    } else if (*label) {
      const auto profiles = load_profiles(label_profiles);
      SeedThresholds thresholds;
      if (!label_thresholds.empty()) {
        std::ifstream in(label_thresholds);
        if (!in) throw std::runtime_error("[label] cannot open " + label_thresholds);
        thresholds = SeedThresholds::parse(in);
      }
      const SeedLabeling labeling = seed_dataset(profiles, thresholds);
      std::ofstream out(label_out, std::ios::binary);
      if (!out) throw std::runtime_error("[label] cannot write " + label_out);
      out << "player_id,label\n";
      for (const auto& p : profiles) {
        const auto it = labeling.assignments.find(p.player_id);
        out << p.player_id << ','
            << (it == labeling.assignments.end() ? "UNLABELED" : to_string(it->second)) << '\n';
      }
      std::cout << "labeled=" << labeling.labeled() << " total=" << labeling.total
                << " coverage=" << format_fixed2(100 * labeling.coverage())
                << "% conflicts=" << labeling.conflicts << "\n";
    } else if (*train) {
      const auto profiles = load_profiles(train_profiles);
      const auto labels = load_labels(train_labels);
      const Dataset all = make_dataset(profiles, labels, default_feature_defs());
      const Dataset labeled = split_by_label(all).first;
      if (labeled.rows.empty()) throw std::runtime_error("[train] no labeled profiles");
      const TreePtr tree = train_tree(labeled, train_params, kBehaviorCount);
      std::vector<std::string> class_names;
      for (const Behavior b : kAllBehaviors) class_names.emplace_back(to_string(b));
      std::ofstream out(train_out, std::ios::binary);
      if (!out) throw std::runtime_error("[train] cannot write " + train_out);
      out << tree_to_json(*tree, labeled, class_names).dump(2) << "\n";
      if (!train_txt.empty()) {
        std::ofstream txt(train_txt, std::ios::binary);
        txt << format_tree(*tree, labeled, class_names);
      }
      std::cout << "nodes=" << node_count(*tree) << " depth=" << tree_depth(*tree)
                << " examples=" << labeled.rows.size() << "\n";
    } else if (*evaluate) {
      const auto profiles = load_profiles(eval_profiles);
      const auto labels = load_labels(eval_labels);
      const Dataset all = make_dataset(profiles, labels, default_feature_defs());
      const Dataset labeled = split_by_label(all).first;
      if (labeled.rows.empty()) throw std::runtime_error("[evaluate] no labeled profiles");
      const EvaluationReport report =
          cross_validate(labeled, eval_folds, eval_params, eval_seed, kBehaviorCount);
      const WindowReport wr{"all", report};
      std::cout << emit_table1({&wr, 1}) << "\nconfusion (rows=true, cols=predicted):\n";
      for (std::size_t r = 0; r < report.confusion.size(); ++r) {
        std::cout << to_string(kAllBehaviors[r]) << ":";
        for (const std::size_t c : report.confusion[r]) std::cout << ' ' << c;
        std::cout << "\n";
      }
    } else if (*compare) {
      const auto profiles = load_profiles(cmp_profiles);
      const auto labels = load_labels(cmp_labels);
      const Dataset all = make_dataset(profiles, labels, default_feature_defs());
      const Dataset labeled = split_by_label(all).first;
      if (labeled.rows.empty()) throw std::runtime_error("[compare-attrs] no labeled profiles");
      std::vector<std::string> with_set, without_set;
      for (const auto& def : labeled.schema.defs()) {
        with_set.push_back(def.name);
        if (def.name != cmp_feature) without_set.push_back(def.name);
      }
      if (with_set.size() == without_set.size())
        throw std::runtime_error("[compare-attrs] unknown feature: " + cmp_feature);
      const ComparisonReport report =
          compare_attribute_sets(labeled, with_set, without_set, cmp_folds, TrainParams{}, cmp_seed);
      json j;
      j["with"] = {{"feature_count", report.first.features.size()},
                   {"nodes", report.first.node_count},
                   {"depth", report.first.depth},
                   {"accuracy_mean", report.first.accuracy_mean},
                   {"accuracy_std", report.first.accuracy_std}};
      j["without"] = {{"feature_count", report.second.features.size()},
                      {"nodes", report.second.node_count},
                      {"depth", report.second.depth},
                      {"accuracy_mean", report.second.accuracy_mean},
                      {"accuracy_std", report.second.accuracy_std}};
      j["toggled_feature"] = cmp_feature;
      std::cout << j.dump(2) << "\n";
    } else if (*run) {
      std::ifstream in(run_config);
      if (!in) throw std::runtime_error("[config] cannot open " + run_config);
      PipelineConfig config = PipelineConfig::parse(in);
      if (!run_out.empty()) config.out_dir = run_out;
      if (run_seed_opt->count()) config.rng_seed = run_seed;
      if (run_year_opt->count()) config.year = run_year;
      if (run_folds_opt->count()) config.folds = run_folds;
      const PipelineResult result = run_pipeline(config);
      std::cout << "windows=" << result.windows.size()
                << " players=" << result.ingest.distinct_players << "\n";
      if (!result.table1.empty()) std::cout << result.table1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

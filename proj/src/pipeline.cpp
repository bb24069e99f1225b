#include "bartle/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bartle/dataset.hpp"
#include "bartle/util.hpp"

#include "json.hpp"

namespace bartle {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const std::string& what) {
  throw std::runtime_error("[" + stage + "] " + what);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw std::invalid_argument("config: bad number for '" + key + "'");
  return out;
}

long to_long(const std::string& key, const std::string& value) {
  long out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw std::invalid_argument("config: bad integer for '" + key + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "'");
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig c;
  std::optional<Timestamp> window_start, window_end;
  for (const auto& [key, value] : read_key_values(in)) {
    if (key == "log") c.log_path = value;
    else if (key == "zones") c.zones_path = value;
    else if (key == "column_map") c.column_map_path = value;
    else if (key == "thresholds") c.thresholds_path = value;
    else if (key == "out") c.out_dir = value;
    else if (key == "mode") {
      if (value == "per-year") c.per_year = true;
      else if (value == "single") c.per_year = false;
      else throw std::invalid_argument("config: mode must be single or per-year");
    } else if (key == "year") c.year = static_cast<int>(to_long(key, value));
    else if (key == "window_start" || key == "window_end") {
      const auto ts = parse_timestamp(value, c.parse_options.timestamp_format);
      if (!ts) throw std::invalid_argument("config: bad timestamp for '" + key + "'");
      (key == "window_start" ? window_start : window_end) = *ts;
    } else if (key == "interval_minutes") c.interval_minutes = static_cast<int>(to_long(key, value));
    else if (key == "folds") c.folds = static_cast<int>(to_long(key, value));
    else if (key == "seed") c.rng_seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "min_leaf") c.tree_params.min_leaf = static_cast<int>(to_long(key, value));
    else if (key == "min_gain") c.tree_params.min_gain = to_double(key, value);
    else if (key == "max_depth") c.tree_params.max_depth = static_cast<int>(to_long(key, value));
    else if (key == "confidence") c.tree_params.confidence = to_double(key, value);
    else if (key == "selftrain_confidence") c.selftrain_confidence = to_double(key, value);
    else if (key == "selftrain_max_iterations")
      c.selftrain_max_iterations = static_cast<int>(to_long(key, value));
    else if (key == "evaluate_labels") {
      if (value == "seed") c.evaluate_seed_labels = true;
      else if (value == "propagated") c.evaluate_seed_labels = false;
      else throw std::invalid_argument("config: evaluate_labels must be seed or propagated");
    } else if (key == "include_level_speed") c.include_level_speed = to_bool(key, value);
    else if (key == "delimiter") {
      if (value.size() != 1) throw std::invalid_argument("config: delimiter must be one character");
      c.parse_options.delimiter = value[0];
    } else if (key == "has_header") c.parse_options.has_header = to_bool(key, value);
    else if (key == "timestamp_format") c.parse_options.timestamp_format = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (window_start || window_end) {
    if (!window_start || !window_end)
      throw std::invalid_argument("config: window_start and window_end must both be set");
    c.window = std::make_pair(*window_start, *window_end);
  }
  return c;
}

// The output directory is deliberately left out: it does not affect what
// is computed, so runs into different destinations share a hash.
std::string PipelineConfig::canonical_text() const {
  std::ostringstream out;
  out << "log=" << log_path << "\nzones=" << zones_path << "\ncolumn_map=" << column_map_path
      << "\nthresholds=" << thresholds_path
      << "\nmode=" << (per_year ? "per-year" : "single");
  if (year) out << "\nyear=" << *year;
  if (window)
    out << "\nwindow_start=" << format_timestamp(window->first)
        << "\nwindow_end=" << format_timestamp(window->second);
  out << "\ninterval_minutes=" << interval_minutes << "\nfolds=" << folds << "\nseed=" << rng_seed
      << "\nmin_leaf=" << tree_params.min_leaf << "\nmin_gain=" << format_double(tree_params.min_gain)
      << "\nmax_depth=" << tree_params.max_depth
      << "\nconfidence=" << format_double(tree_params.confidence)
      << "\nselftrain_confidence=" << format_double(selftrain_confidence)
      << "\nselftrain_max_iterations=" << selftrain_max_iterations
      << "\nevaluate_labels=" << (evaluate_seed_labels ? "seed" : "propagated")
      << "\ninclude_level_speed=" << (include_level_speed ? "true" : "false")
      << "\ndelimiter=" << parse_options.delimiter
      << "\nhas_header=" << (parse_options.has_header ? "true" : "false")
      << "\ntimestamp_format=" << parse_options.timestamp_format << "\n";
  return out.str();
}

std::pair<std::vector<PlayerProfile>, std::vector<PlayerProfile>> partition_gms(
    std::vector<PlayerProfile> profiles, int days) {
  std::vector<PlayerProfile> players, gms;
  for (auto& p : profiles) (detect_gm(p, days) ? gms : players).push_back(std::move(p));
  return {std::move(players), std::move(gms)};
}

std::string format_metric_cell(const ClassMetrics& metrics) {
  const auto one = [](const std::optional<double>& v) -> std::string {
    if (!v) return "–";  // en dash for a class that never occurs
    const std::string s = format_fixed2(*v);
    return s == "100.00" ? "100" : s;
  };
  return one(metrics.precision) + " / " + one(metrics.recall);
}

std::string format_accuracy_cell(double mean, double stddev) {
  return format_fixed2(mean) + " ± " + format_fixed2(stddev);
}

std::string emit_table1(std::span<const WindowReport> reports) {
  if (reports.empty()) throw std::invalid_argument("emit_table1: no reports");

  std::vector<std::string> row_labels;
  for (const Behavior b : kAllBehaviors) row_labels.push_back(std::string(to_string(b)) + "s");
  row_labels.emplace_back("Accuracy");

  // cells[row][column]
  std::vector<std::vector<std::string>> cells(row_labels.size());
  for (const auto& wr : reports) {
    for (std::size_t b = 0; b < kBehaviorCount; ++b) {
      const ClassMetrics metrics =
          b < wr.report.per_class.size() ? wr.report.per_class[b] : ClassMetrics{};
      cells[b].push_back(format_metric_cell(metrics));
    }
    cells[kBehaviorCount].push_back(
        format_accuracy_cell(wr.report.accuracy_mean, wr.report.accuracy_std));
  }

  const auto display_width = [](const std::string& s) {
    // the table uses two multi-byte glyphs (en dash, plus-minus)
    std::size_t w = 0;
    for (const char ch : s)
      if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++w;
    return w;
  };

  std::size_t label_width = 0;
  for (const auto& label : row_labels) label_width = std::max(label_width, label.size());
  std::vector<std::size_t> col_width(reports.size());
  for (std::size_t c = 0; c < reports.size(); ++c) {
    col_width[c] = display_width(reports[c].name);
    for (const auto& row : cells) col_width[c] = std::max(col_width[c], display_width(row[c]));
  }

  std::ostringstream out;
  const auto pad = [&](const std::string& s, std::size_t width) {
    out << s << std::string(width - display_width(s) + 2, ' ');
  };
  pad("", label_width);
  for (std::size_t c = 0; c < reports.size(); ++c) pad(reports[c].name, col_width[c]);
  out << '\n';
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    pad(row_labels[r], label_width);
    for (std::size_t c = 0; c < reports.size(); ++c) pad(cells[r][c], col_width[c]);
    out << '\n';
  }
  return out.str();
}

namespace {

struct Stamp {
  std::uint64_t config_hash = 0;
  std::uint64_t rng_seed = 0;
};

std::ofstream open_output(const fs::path& path, const Stamp& stamp, bool stamp_line = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (stamp_line) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(stamp.config_hash));
    out << "# config_hash=" << buf << " rng_seed=" << stamp.rng_seed << "\n";
  }
  return out;
}

struct WindowSpec {
  std::string name;
  Timestamp start, end;
};

std::string behavior_of(const std::map<std::string, Behavior>& labels, const std::string& id) {
  const auto it = labels.find(id);
  return it == labels.end() ? "UNLABELED" : std::string(to_string(it->second));
}

void write_scatter(const fs::path& path, const Stamp& stamp,
                   std::span<const PlayerProfile> players, std::span<const PlayerProfile> gms,
                   const std::map<std::string, Behavior>& labels, const char* column,
                   double (*value)(const PlayerProfile&)) {
  auto out = open_output(path, stamp);
  out << "player_id,behavior," << column << '\n';
  for (const auto& p : players)
    out << p.player_id << ',' << behavior_of(labels, p.player_id) << ',' << format_double(value(p))
        << '\n';
  for (const auto& p : gms) out << p.player_id << ",GM," << format_double(value(p)) << '\n';
}

json report_to_json(const EvaluationReport& report) {
  json j;
  j["accuracy_mean"] = report.accuracy_mean;
  j["accuracy_std"] = report.accuracy_std;
  j["fold_accuracies"] = report.fold_accuracies;
  j["confusion"] = report.confusion;
  j["examples"] = report.examples;
  auto& per_class = j["per_class"] = json::object();
  for (std::size_t b = 0; b < report.per_class.size() && b < kBehaviorCount; ++b) {
    json m;
    const auto& metrics = report.per_class[b];
    m["precision"] = metrics.precision ? json(*metrics.precision) : json(nullptr);
    m["recall"] = metrics.recall ? json(*metrics.recall) : json(nullptr);
    per_class[std::string(to_string(kAllBehaviors[b]))] = m;
  }
  return j;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  result.config_hash = fnv1a64(config.canonical_text());
  const Stamp stamp{result.config_hash, config.rng_seed};

  if (config.out_dir.empty()) stage_fail("config", "output directory not set");
  fs::create_directories(config.out_dir);
  const fs::path out_root = config.out_dir;
  fs::remove(out_root / "INCOMPLETE");

  try {
    // --- zones ---------------------------------------------------------
    ZoneCatalog catalog;
    {
      std::ifstream in(config.zones_path);
      if (!in) stage_fail("zones", "cannot open zone catalog: " + config.zones_path);
      catalog = load_zone_catalog(in).catalog;
      if (catalog.size() == 0) stage_fail("zones", "zone catalog is empty");
    }

    // --- config inputs --------------------------------------------------
    ColumnMap columns;
    if (!config.column_map_path.empty()) {
      std::ifstream in(config.column_map_path);
      if (!in) stage_fail("config", "cannot open column map: " + config.column_map_path);
      columns = ColumnMap::parse(in);
    }
    SeedThresholds thresholds;
    if (!config.thresholds_path.empty()) {
      std::ifstream in(config.thresholds_path);
      if (!in) stage_fail("config", "cannot open thresholds: " + config.thresholds_path);
      thresholds = SeedThresholds::parse(in);
    }

    // --- ingest ----------------------------------------------------------
    ParseResult parsed;
    try {
      std::ifstream in(config.log_path, std::ios::binary);
      if (!in) stage_fail("ingest", "cannot open session log: " + config.log_path);
      parsed = parse_session_log(in, columns, config.parse_options);
    } catch (const std::exception& e) {
      stage_fail("ingest", e.what());
    }
    result.ingest = parsed.stats;
    if (parsed.records.empty()) stage_fail("ingest", "no accepted records");

    // --- windows ---------------------------------------------------------
    std::vector<WindowSpec> windows;
    const Timestamp data_min = *parsed.stats.first_timestamp;
    const Timestamp data_max = *parsed.stats.last_timestamp;
    if (config.per_year) {
      std::set<int> years;
      for (const auto& r : parsed.records) years.insert(year_of(r.timestamp));
      for (const int y : years) {
        const auto [start, end] = calendar_year_window(y);
        windows.push_back({std::to_string(y), start, end});
      }
      const int first_year = *years.begin();
      const int last_year = *years.rbegin();
      if (years.size() > 1)
        windows.push_back(
            {std::to_string(first_year) + "-" + std::to_string(last_year), data_min, data_max});
    } else if (config.year) {
      const auto [start, end] = calendar_year_window(*config.year);
      windows.push_back({std::to_string(*config.year), start, end});
    } else if (config.window) {
      windows.push_back({"window", config.window->first, config.window->second});
    } else {
      windows.push_back({"all", data_min, data_max});
    }

    std::vector<WindowReport> table_reports;
    const auto feature_defs = default_feature_defs(config.include_level_speed);

    for (const auto& ws : windows) {
      WindowSummary summary;
      summary.name = ws.name;
      summary.start = ws.start;
      summary.end = ws.end;
      const fs::path window_dir = out_root / ws.name;
      fs::create_directories(window_dir);

      // --- profiles ------------------------------------------------------
      std::vector<PlayerProfile> players, gms;
      std::map<std::string, Behavior> seed_labels;
      try {
        const auto filtered = filter_window(parsed.records, ws.start, ws.end);
        auto profiles = build_profiles(filtered, catalog, config.interval_minutes);
        const int days = window_days(ws.start, ws.end);
        std::tie(players, gms) = partition_gms(std::move(profiles), days);
      } catch (const std::exception& e) {
        stage_fail("profiles", ws.name + ": " + e.what());
      }
      summary.players = players.size();
      summary.gms = gms.size();

      // --- seed labels ----------------------------------------------------
      SeedLabeling seeding;
      try {
        seeding = seed_dataset(players, thresholds);
        seed_labels = seeding.assignments;
      } catch (const std::exception& e) {
        stage_fail("label", ws.name + ": " + e.what());
      }
      summary.seed_coverage = seeding.coverage();
      summary.seed_conflicts = seeding.conflicts;

      // --- self-training ----------------------------------------------------
      Dataset all_data = make_dataset(players, seed_labels, feature_defs);
      std::map<std::string, Behavior> final_labels = seed_labels;
      std::set<std::string> low_confidence_ids;
      std::vector<IterationStat> selftrain_progress;
      TreePtr model;
      if (!seed_labels.empty()) {
        try {
          const auto [labeled, unlabeled] = split_by_label(all_data);
          SelfTrainParams st_params;
          st_params.confidence_threshold = config.selftrain_confidence;
          st_params.max_iterations = config.selftrain_max_iterations;
          st_params.tree_params = config.tree_params;
          auto st = self_train(labeled, unlabeled, st_params, kBehaviorCount);
          for (std::size_t i = 0; i < unlabeled.rows.size(); ++i) {
            final_labels.emplace(unlabeled.ids[i], static_cast<Behavior>(st.labels[i]));
            if (st.low_confidence[i]) low_confidence_ids.insert(unlabeled.ids[i]);
          }
          summary.selftrain_iterations = st.iterations;
          summary.residual_unlabeled = st.residual_unlabeled;
          summary.tree_nodes = node_count(*st.model);
          summary.tree_depth = tree_depth(*st.model);
          selftrain_progress = st.progress;
          model = std::move(st.model);
        } catch (const std::exception& e) {
          stage_fail("self-train", ws.name + ": " + e.what());
        }
      }

      // --- evaluation ----------------------------------------------------
      if (model) {
        try {
          Dataset eval_data;
          if (config.evaluate_seed_labels) {
            Dataset seed_data = make_dataset(players, seed_labels, feature_defs);
            eval_data = split_by_label(seed_data).first;
          } else {
            eval_data = make_dataset(players, final_labels, feature_defs);
          }
          summary.report =
              cross_validate(eval_data, config.folds, config.tree_params, config.rng_seed,
                             kBehaviorCount);
          summary.evaluated = true;
        } catch (const std::exception& e) {
          stage_fail("evaluate", ws.name + ": " + e.what());
        }
      }

      // --- window artifacts ------------------------------------------------
      try {
        {
          auto out = open_output(window_dir / "profiles.csv", stamp);
          std::vector<PlayerProfile> everyone = players;
          everyone.insert(everyone.end(), gms.begin(), gms.end());
          std::sort(everyone.begin(), everyone.end(),
                    [](const auto& a, const auto& b) { return a.player_id < b.player_id; });
          write_profiles_csv(out, everyone);
        }
        {
          auto out = open_output(window_dir / "seed_labels.csv", stamp);
          out << "player_id,label\n";
          for (const auto& p : players) {
            const auto it = seed_labels.find(p.player_id);
            out << p.player_id << ','
                << (it == seed_labels.end() ? "UNLABELED" : to_string(it->second)) << '\n';
          }
        }
        {
          auto out = open_output(window_dir / "final_labels.csv", stamp);
          out << "player_id,label,source\n";
          for (const auto& p : players) {
            const auto it = final_labels.find(p.player_id);
            std::string source;
            if (it == final_labels.end()) source = "none";
            else if (seed_labels.count(p.player_id)) source = "seed";
            else if (low_confidence_ids.count(p.player_id)) source = "residual";
            else source = "propagated";
            out << p.player_id << ','
                << (it == final_labels.end() ? "UNLABELED" : to_string(it->second)) << ',' << source
                << '\n';
          }
        }
        {
          auto out = open_output(window_dir / "selftrain_progress.csv", stamp);
          out << "iteration,adopted,remaining\n";
          for (const auto& stat : selftrain_progress)
            out << stat.iteration << ',' << stat.adopted << ',' << stat.remaining << '\n';
        }
        {
          auto out = open_output(window_dir / "gms.csv", stamp);
          out << "player_id,final_level,evolution,playtime_hours,hours_per_day\n";
          const int days = window_days(ws.start, ws.end);
          for (const auto& p : gms)
            out << p.player_id << ',' << p.final_level << ',' << p.evolution << ','
                << format_double(p.playtime_hours) << ','
                << format_double(p.playtime_hours / days) << '\n';
        }
        write_scatter(window_dir / "scatter_final_level.csv", stamp, players, gms, final_labels,
                      "final_level",
                      [](const PlayerProfile& p) { return static_cast<double>(p.final_level); });
        write_scatter(window_dir / "scatter_evolution.csv", stamp, players, gms, final_labels,
                      "evolution",
                      [](const PlayerProfile& p) { return static_cast<double>(p.evolution); });
        write_scatter(window_dir / "scatter_zones_visited.csv", stamp, players, gms, final_labels,
                      "zones_visited",
                      [](const PlayerProfile& p) { return static_cast<double>(p.zones_visited); });
        {
          auto out = open_output(window_dir / "distribution.csv", stamp);
          out << "kind,key,count\n";
          std::map<std::string, std::size_t> races, classes, behaviors;
          for (const auto& p : players) {
            ++races[p.race];
            ++classes[p.player_class];
            ++behaviors[behavior_of(final_labels, p.player_id)];
          }
          for (const auto& p : gms) {
            ++races[p.race];
            ++classes[p.player_class];
            ++behaviors["GM"];
          }
          for (const auto& [k, n] : races) out << "race," << k << ',' << n << '\n';
          for (const auto& [k, n] : classes) out << "class," << k << ',' << n << '\n';
          for (const auto& [k, n] : behaviors) out << "behavior," << k << ',' << n << '\n';
        }
        if (model) {
          Dataset full = make_dataset(players, final_labels, feature_defs);
          std::vector<std::string> class_names;
          for (const Behavior b : kAllBehaviors) class_names.emplace_back(to_string(b));
          {
            auto out = open_output(window_dir / "tree.txt", stamp);
            out << format_tree(*model, full, class_names);
          }
          {
            auto out = open_output(window_dir / "tree.json", stamp, false);
            json j = tree_to_json(*model, full, class_names);
            j["config_hash"] = stamp.config_hash;
            j["rng_seed"] = stamp.rng_seed;
            out << j.dump(2) << '\n';
          }
        }
        if (summary.evaluated) {
          {
            auto out = open_output(window_dir / "confusion.csv", stamp);
            out << "true\\predicted";
            for (const Behavior b : kAllBehaviors) out << ',' << to_string(b);
            out << '\n';
            for (std::size_t r = 0; r < kBehaviorCount; ++r) {
              out << to_string(kAllBehaviors[r]);
              for (std::size_t c = 0; c < kBehaviorCount; ++c)
                out << ',' << summary.report.confusion[r][c];
              out << '\n';
            }
          }
          {
            auto out = open_output(window_dir / "report.json", stamp, false);
            json j = report_to_json(summary.report);
            j["window"] = ws.name;
            j["players"] = summary.players;
            j["gms"] = summary.gms;
            j["seed_coverage"] = summary.seed_coverage;
            j["seed_conflicts"] = summary.seed_conflicts;
            j["selftrain_iterations"] = summary.selftrain_iterations;
            j["residual_unlabeled"] = summary.residual_unlabeled;
            j["tree_nodes"] = summary.tree_nodes;
            j["tree_depth"] = summary.tree_depth;
            j["config_hash"] = stamp.config_hash;
            j["rng_seed"] = stamp.rng_seed;
            out << j.dump(2) << '\n';
          }
          table_reports.push_back({ws.name, summary.report});
        }
      } catch (const std::exception& e) {
        stage_fail("report", ws.name + ": " + e.what());
      }

      result.windows.push_back(std::move(summary));
    }

    // --- top-level artifacts ---------------------------------------------
    try {
      if (!table_reports.empty()) {
        result.table1 = emit_table1(table_reports);
        auto out = open_output(out_root / "table1.txt", stamp);
        out << result.table1;
      }
      {
        auto out = open_output(out_root / "manifest.json", stamp, false);
        json j;
        j["config"] = config.canonical_text();
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(result.config_hash));
        j["config_hash"] = buf;
        j["rng_seed"] = config.rng_seed;
        json ingest;
        ingest["rows_read"] = result.ingest.rows_read;
        ingest["rows_accepted"] = result.ingest.rows_accepted;
        ingest["rows_rejected"] = result.ingest.rows_rejected;
        json reasons = json::object();
        for (const auto& [reason, n] : result.ingest.reject_reasons)
          reasons[std::string(to_string(reason))] = n;
        ingest["reject_reasons"] = reasons;
        auto& rejected = ingest["rejected_lines"] = json::array();
        for (std::size_t i = 0; i < result.ingest.rejected_lines.size() && i < 100; ++i)
          rejected.push_back({{"line", result.ingest.rejected_lines[i].line_number},
                              {"reason", std::string(to_string(result.ingest.rejected_lines[i].reason))}});
        if (result.ingest.rejected_lines.size() > 100) ingest["rejected_lines_truncated"] = true;
        ingest["distinct_players"] = result.ingest.distinct_players;
        if (result.ingest.first_timestamp)
          ingest["first_timestamp"] = format_timestamp(*result.ingest.first_timestamp);
        if (result.ingest.last_timestamp)
          ingest["last_timestamp"] = format_timestamp(*result.ingest.last_timestamp);
        j["ingest"] = ingest;
        auto& windows_json = j["windows"] = json::array();
        for (const auto& w : result.windows) {
          json wj;
          wj["name"] = w.name;
          wj["start"] = format_timestamp(w.start);
          wj["end"] = format_timestamp(w.end);
          wj["players"] = w.players;
          wj["gms"] = w.gms;
          wj["seed_coverage"] = w.seed_coverage;
          wj["seed_conflicts"] = w.seed_conflicts;
          wj["selftrain_iterations"] = w.selftrain_iterations;
          wj["residual_unlabeled"] = w.residual_unlabeled;
          wj["evaluated"] = w.evaluated;
          if (w.evaluated) {
            wj["accuracy_mean"] = w.report.accuracy_mean;
            wj["accuracy_std"] = w.report.accuracy_std;
          }
          wj["tree_nodes"] = w.tree_nodes;
          wj["tree_depth"] = w.tree_depth;
          windows_json.push_back(wj);
        }
        j["windows"] = windows_json;
        out << j.dump(2) << '\n';
      }
    } catch (const std::exception& e) {
      stage_fail("report", e.what());
    }
  } catch (const std::exception& e) {
    std::ofstream marker(out_root / "INCOMPLETE");
    marker << e.what() << '\n';
    throw;
  }
  return result;
}

}  // namespace bartle

// End-to-end orchestration: ingest -> window -> profiles -> seed labels ->
// self-training -> cross-validation -> report files. Runs are fully
// reproducible: identical config and seed give byte-identical outputs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bartle/evaluation.hpp"
#include "bartle/profile.hpp"
#include "bartle/seed_labeler.hpp"
#include "bartle/self_training.hpp"
#include "bartle/session.hpp"

namespace bartle {

struct PipelineConfig {
  std::string log_path;
  std::string zones_path;
  std::string column_map_path;   // optional; identity map when empty
  std::string thresholds_path;   // optional; rule defaults when empty
  std::string out_dir;

  bool per_year = false;              // one run per calendar year plus a combined run
  std::optional<int> year;            // restrict a single run to one calendar year
  std::optional<std::pair<Timestamp, Timestamp>> window;

  int interval_minutes = 10;
  int folds = 5;
  std::uint64_t rng_seed = 1;
  TrainParams tree_params;
  double selftrain_confidence = 0.95;
  int selftrain_max_iterations = 20;
  bool evaluate_seed_labels = false;  // default: evaluate the propagated labels
  bool include_level_speed = true;
  ParseOptions parse_options;

  static PipelineConfig parse(std::istream& in);
  // Canonical text form used for the config hash and the manifest echo.
  std::string canonical_text() const;
};

// Profiles split into (players, gms) by the GM signature.
std::pair<std::vector<PlayerProfile>, std::vector<PlayerProfile>> partition_gms(
    std::vector<PlayerProfile> profiles, int window_days);

struct WindowSummary {
  std::string name;
  Timestamp start{}, end{};
  std::size_t players = 0;  // non-GM
  std::size_t gms = 0;
  double seed_coverage = 0;
  std::size_t seed_conflicts = 0;
  int selftrain_iterations = 0;
  std::size_t residual_unlabeled = 0;
  bool evaluated = false;
  EvaluationReport report;
  std::size_t tree_nodes = 0;
  std::size_t tree_depth = 0;
};

struct PipelineResult {
  IngestStats ingest;
  std::vector<WindowSummary> windows;
  std::string table1;
  std::uint64_t config_hash = 0;
};

// Throws std::runtime_error with a stage-tagged message on fatal errors;
// an INCOMPLETE marker is left in the output directory in that case.
PipelineResult run_pipeline(const PipelineConfig& config);

struct WindowReport {
  std::string name;
  EvaluationReport report;
};

// Text table: one column per window, behavior rows as "precision / recall"
// cells and a final accuracy row as "mean ± std".
std::string emit_table1(std::span<const WindowReport> reports);

// "97.62 / 98.97", with whole-hundred values printed as "100" and a
// never-predicted class as an en dash.
std::string format_metric_cell(const ClassMetrics& metrics);
std::string format_accuracy_cell(double mean, double stddev);

}  // namespace bartle

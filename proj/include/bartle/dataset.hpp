// Tabular feature vectors for the learner. Numeric features hold their
// value directly; nominal features are interned to small integer codes
// with a per-feature token dictionary. Code -1 marks a token that was
// never interned (unseen at prediction time).
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bartle/profile.hpp"
#include "bartle/seed_labeler.hpp"

namespace bartle {

enum class FeatureKind { Numeric, Nominal };

struct FeatureDef {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureDef> defs);

  std::size_t size() const { return defs_.size(); }
  const FeatureDef& at(std::size_t i) const { return defs_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::vector<FeatureDef>& defs() const { return defs_; }

 private:
  std::vector<FeatureDef> defs_;
};

using FeatureRow = std::vector<double>;  // nominal codes stored as exact small integers

struct Dataset {
  FeatureSchema schema;
  std::vector<FeatureRow> rows;
  std::vector<int> labels;         // class ids; empty for unlabeled pools
  std::vector<std::string> ids;    // stable per-example ids (player ids)
  std::vector<std::vector<std::string>> dictionaries;  // per feature; empty for numeric

  std::size_t size() const { return rows.size(); }

  // Interns `token` into the feature's dictionary, growing it if new.
  int intern(std::size_t feature, std::string_view token);
  // Lookup without growing; -1 when the token was never interned.
  int code_of(std::size_t feature, std::string_view token) const;
  std::string_view token_of(std::size_t feature, int code) const;
};

inline constexpr std::string_view kFeatureClass = "class";
inline constexpr std::string_view kFeatureRace = "race";
inline constexpr std::string_view kFeatureInitialLevel = "initial_level";
inline constexpr std::string_view kFeatureFinalLevel = "final_level";
inline constexpr std::string_view kFeatureEvolution = "evolution";
inline constexpr std::string_view kFeatureZonesVisited = "zones_visited";
inline constexpr std::string_view kFeaturePlaytime = "playtime_hours";
inline constexpr std::string_view kFeatureLevelSpeed = "level_speed";

// Default learner feature set, in schema order.
std::vector<FeatureDef> default_feature_defs(bool include_level_speed = true);

// Encodes one row per profile; labels from `labels` where present
// (players without a label get -1 in Dataset::labels).
Dataset make_dataset(std::span<const PlayerProfile> profiles,
                     const std::map<std::string, Behavior>& labels,
                     std::span<const FeatureDef> features);

// Keeps only the named features (dictionary and rows re-projected).
Dataset project(const Dataset& data, std::span<const std::string> feature_names);

// Splits into (labeled, unlabeled) by label presence.
std::pair<Dataset, Dataset> split_by_label(const Dataset& data);

}  // namespace bartle

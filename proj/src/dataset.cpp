#include "bartle/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace bartle {

FeatureSchema::FeatureSchema(std::vector<FeatureDef> defs) : defs_(std::move(defs)) {
  for (std::size_t i = 0; i < defs_.size(); ++i)
    for (std::size_t j = i + 1; j < defs_.size(); ++j)
      if (defs_[i].name == defs_[j].name)
        throw std::invalid_argument("schema: duplicate feature '" + defs_[i].name + "'");
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < defs_.size(); ++i)
    if (defs_[i].name == name) return i;
  return std::nullopt;
}

int Dataset::intern(std::size_t feature, std::string_view token) {
  auto& dict = dictionaries.at(feature);
  for (std::size_t i = 0; i < dict.size(); ++i)
    if (dict[i] == token) return static_cast<int>(i);
  dict.emplace_back(token);
  return static_cast<int>(dict.size() - 1);
}

int Dataset::code_of(std::size_t feature, std::string_view token) const {
  const auto& dict = dictionaries.at(feature);
  for (std::size_t i = 0; i < dict.size(); ++i)
    if (dict[i] == token) return static_cast<int>(i);
  return -1;
}

std::string_view Dataset::token_of(std::size_t feature, int code) const {
  const auto& dict = dictionaries.at(feature);
  if (code < 0 || static_cast<std::size_t>(code) >= dict.size()) return "?";
  return dict[static_cast<std::size_t>(code)];
}

std::vector<FeatureDef> default_feature_defs(bool include_level_speed) {
  std::vector<FeatureDef> defs = {
      {std::string(kFeatureClass), FeatureKind::Nominal},
      {std::string(kFeatureRace), FeatureKind::Nominal},
      {std::string(kFeatureInitialLevel), FeatureKind::Numeric},
      {std::string(kFeatureFinalLevel), FeatureKind::Numeric},
      {std::string(kFeatureEvolution), FeatureKind::Numeric},
      {std::string(kFeatureZonesVisited), FeatureKind::Numeric},
      {std::string(kFeaturePlaytime), FeatureKind::Numeric},
  };
  if (include_level_speed) defs.push_back({std::string(kFeatureLevelSpeed), FeatureKind::Numeric});
  return defs;
}

Dataset make_dataset(std::span<const PlayerProfile> profiles,
                     const std::map<std::string, Behavior>& labels,
                     std::span<const FeatureDef> features) {
  Dataset data;
  data.schema = FeatureSchema(std::vector<FeatureDef>(features.begin(), features.end()));
  data.dictionaries.resize(features.size());
  data.rows.reserve(profiles.size());
  data.labels.reserve(profiles.size());
  data.ids.reserve(profiles.size());

  for (const auto& p : profiles) {
    FeatureRow row;
    row.reserve(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      const auto& def = features[f];
      double value = 0;
      if (def.name == kFeatureClass) value = data.intern(f, p.player_class);
      else if (def.name == kFeatureRace) value = data.intern(f, p.race);
      else if (def.name == kFeatureInitialLevel) value = p.initial_level;
      else if (def.name == kFeatureFinalLevel) value = p.final_level;
      else if (def.name == kFeatureEvolution) value = p.evolution;
      else if (def.name == kFeatureZonesVisited) value = static_cast<double>(p.zones_visited);
      else if (def.name == kFeaturePlaytime) value = p.playtime_hours;
      else if (def.name == kFeatureLevelSpeed) value = p.level_speed;
      else throw std::invalid_argument("make_dataset: unknown feature '" + def.name + "'");
      row.push_back(value);
    }
    data.rows.push_back(std::move(row));
    data.ids.push_back(p.player_id);
    const auto it = labels.find(p.player_id);
    data.labels.push_back(it == labels.end() ? -1 : static_cast<int>(it->second));
  }
  return data;
}

Dataset project(const Dataset& data, std::span<const std::string> feature_names) {
  if (feature_names.empty()) throw std::invalid_argument("project: empty feature set");
  std::vector<std::size_t> keep;
  std::vector<FeatureDef> defs;
  for (const auto& name : feature_names) {
    const auto idx = data.schema.index_of(name);
    if (!idx) throw std::invalid_argument("project: unknown feature '" + name + "'");
    keep.push_back(*idx);
    defs.push_back(data.schema.at(*idx));
  }
  Dataset out;
  out.schema = FeatureSchema(std::move(defs));
  out.labels = data.labels;
  out.ids = data.ids;
  out.dictionaries.reserve(keep.size());
  for (const std::size_t idx : keep) out.dictionaries.push_back(data.dictionaries[idx]);
  out.rows.reserve(data.rows.size());
  for (const auto& row : data.rows) {
    FeatureRow projected;
    projected.reserve(keep.size());
    for (const std::size_t idx : keep) projected.push_back(row[idx]);
    out.rows.push_back(std::move(projected));
  }
  return out;
}

std::pair<Dataset, Dataset> split_by_label(const Dataset& data) {
  Dataset labeled, unlabeled;
  labeled.schema = unlabeled.schema = data.schema;
  labeled.dictionaries = unlabeled.dictionaries = data.dictionaries;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    Dataset& target = data.labels.at(i) >= 0 ? labeled : unlabeled;
    target.rows.push_back(data.rows[i]);
    target.ids.push_back(data.ids[i]);
    if (data.labels[i] >= 0) target.labels.push_back(data.labels[i]);
  }
  return {std::move(labeled), std::move(unlabeled)};
}

}  // namespace bartle

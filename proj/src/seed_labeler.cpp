#include "bartle/seed_labeler.hpp"

#include <charconv>
#include <stdexcept>

#include "bartle/util.hpp"

namespace bartle {

std::string_view to_string(Behavior behavior) {
  switch (behavior) {
    case Behavior::Killer: return "Killer";
    case Behavior::Socializer: return "Socializer";
    case Behavior::Achiever: return "Achiever";
    case Behavior::Explorer: return "Explorer";
  }
  return "unknown";
}

std::optional<Behavior> parse_behavior(std::string_view token) {
  for (const Behavior b : kAllBehaviors)
    if (token == to_string(b)) return b;
  return std::nullopt;
}

SeedThresholds SeedThresholds::parse(std::istream& in) {
  SeedThresholds t;
  for (const auto& [key, value] : read_key_values(in)) {
    double parsed = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
      throw std::invalid_argument("thresholds: bad number for '" + key + "'");
    if (key == "killer_min_final_level") t.killer_min_final_level = parsed;
    else if (key == "killer_min_map_share") t.killer_min_map_share = parsed;
    else if (key == "killer_max_zones") t.killer_max_zones = parsed;
    else if (key == "killer_max_level_speed") t.killer_max_level_speed = parsed;
    else if (key == "socializer_max_final_level") t.socializer_max_final_level = parsed;
    else if (key == "socializer_min_map_share") t.socializer_min_map_share = parsed;
    else if (key == "socializer_max_level_speed") t.socializer_max_level_speed = parsed;
    else if (key == "achiever_min_playtime") t.achiever_min_playtime = parsed;
    else if (key == "achiever_max_zones") t.achiever_max_zones = parsed;
    else if (key == "achiever_min_level_speed") t.achiever_min_level_speed = parsed;
    else if (key == "explorer_min_playtime") t.explorer_min_playtime = parsed;
    else if (key == "explorer_min_zones") t.explorer_min_zones = parsed;
    else if (key == "explorer_max_level_speed") t.explorer_max_level_speed = parsed;
    else throw std::invalid_argument("thresholds: unknown key '" + key + "'");
  }
  return t;
}

RuleMatches evaluate_rules(const PlayerProfile& p, const SeedThresholds& t) {
  const double zones = static_cast<double>(p.zones_visited);
  RuleMatches m;
  m.killer = p.final_level >= t.killer_min_final_level &&
             (p.tier_share_of(ZoneTier::High) + p.tier_share_of(ZoneTier::Medium) +
              p.tier_share_of(ZoneTier::Neutral)) > t.killer_min_map_share &&
             zones < t.killer_max_zones && p.level_speed <= t.killer_max_level_speed;
  m.socializer = p.final_level <= t.socializer_max_final_level &&
                 (p.tier_share_of(ZoneTier::Novice) + p.tier_share_of(ZoneTier::Neutral)) >
                     t.socializer_min_map_share &&
                 p.level_speed < t.socializer_max_level_speed;
  m.achiever = p.playtime_hours >= t.achiever_min_playtime && zones < t.achiever_max_zones &&
               p.level_speed >= t.achiever_min_level_speed;
  m.explorer = p.playtime_hours >= t.explorer_min_playtime && zones >= t.explorer_min_zones &&
               p.level_speed < t.explorer_max_level_speed;
  return m;
}

std::optional<Behavior> seed_label(const PlayerProfile& profile, const SeedThresholds& thresholds) {
  const RuleMatches m = evaluate_rules(profile, thresholds);
  if (m.count() != 1) return std::nullopt;
  if (m.killer) return Behavior::Killer;
  if (m.socializer) return Behavior::Socializer;
  if (m.achiever) return Behavior::Achiever;
  return Behavior::Explorer;
}

SeedLabeling seed_dataset(std::span<const PlayerProfile> profiles,
                          const SeedThresholds& thresholds) {
  SeedLabeling labeling;
  labeling.total = profiles.size();
  for (const auto& profile : profiles) {
    const RuleMatches m = evaluate_rules(profile, thresholds);
    if (m.count() >= 2) {
      ++labeling.conflicts;
      continue;
    }
    if (const auto label = seed_label(profile, thresholds))
      labeling.assignments.emplace(profile.player_id, *label);
  }
  return labeling;
}

}  // namespace bartle

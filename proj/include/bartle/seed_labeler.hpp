// Rule-based seed labeling. Four predicates over a player profile assign
// the Bartle behaviors; a profile matching zero or several rules stays
// unlabeled.
#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bartle/profile.hpp"

namespace bartle {

enum class Behavior { Killer = 0, Socializer = 1, Achiever = 2, Explorer = 3 };

inline constexpr std::size_t kBehaviorCount = 4;
inline constexpr std::array<Behavior, kBehaviorCount> kAllBehaviors = {
    Behavior::Killer, Behavior::Socializer, Behavior::Achiever, Behavior::Explorer};

std::string_view to_string(Behavior behavior);
std::optional<Behavior> parse_behavior(std::string_view token);

// Rule thresholds, defaults as tuned for the original corpus. Loadable
// from a key = value file so they can be re-tuned per corpus.
struct SeedThresholds {
  double killer_min_final_level = 60;   // final_level >=
  double killer_min_map_share = 70;     // high + medium + neutral share >
  double killer_max_zones = 10;         // zones_visited <
  double killer_max_level_speed = 25;   // level_speed <=

  double socializer_max_final_level = 30;  // final_level <=
  double socializer_min_map_share = 30;    // novice + neutral share >
  double socializer_max_level_speed = 15;  // level_speed <

  double achiever_min_playtime = 1800;   // playtime_hours >=
  double achiever_max_zones = 25;        // zones_visited <
  double achiever_min_level_speed = 25;  // level_speed >=

  double explorer_min_playtime = 1800;   // playtime_hours >=
  double explorer_min_zones = 30;        // zones_visited >=
  double explorer_max_level_speed = 25;  // level_speed <

  static SeedThresholds parse(std::istream& in);
};

struct RuleMatches {
  bool killer = false;
  bool socializer = false;
  bool achiever = false;
  bool explorer = false;

  int count() const { return int(killer) + int(socializer) + int(achiever) + int(explorer); }
};

RuleMatches evaluate_rules(const PlayerProfile& profile, const SeedThresholds& thresholds = {});

// Exactly one matching rule yields that label; zero or several yield none.
std::optional<Behavior> seed_label(const PlayerProfile& profile,
                                   const SeedThresholds& thresholds = {});

struct SeedLabeling {
  std::map<std::string, Behavior> assignments;  // labeled players only
  std::size_t total = 0;
  std::size_t conflicts = 0;  // profiles matching two or more rules

  std::size_t labeled() const { return assignments.size(); }
  double coverage() const { return total == 0 ? 0.0 : static_cast<double>(labeled()) / total; }
};

SeedLabeling seed_dataset(std::span<const PlayerProfile> profiles,
                          const SeedThresholds& thresholds = {});

}  // namespace bartle

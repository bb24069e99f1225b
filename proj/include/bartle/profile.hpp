// Per-player feature profiles aggregated from session snapshots: playtime,
// level trajectory, distinct zones, zone tier/category shares, and guild
// membership counts.
#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bartle/session.hpp"
#include "bartle/zone_catalog.hpp"

namespace bartle {

struct PlayerProfile {
  std::string player_id;
  std::string race;          // from the latest snapshot
  std::string player_class;  // from the latest snapshot
  std::optional<std::string> last_guild;
  std::size_t guild_count = 0;  // distinct non-empty guilds over the window

  std::size_t snapshots = 0;
  double playtime_hours = 0;
  int initial_level = kMinLevel;
  int final_level = kMinLevel;
  int evolution = 0;  // clamped to >= 0; see level_regression
  double level_speed = 0;  // levels per 1000 play-hours
  std::size_t zones_visited = 0;

  // Percentage of snapshots per tier / category; each sums to 100 when
  // snapshots > 0. Indexed by ZoneTier / ZoneCategory.
  std::array<double, kZoneTierCount> tier_share{};
  std::array<double, kZoneCategoryCount> category_share{};

  // Set when the raw level sequence decreased (corrupt data); evolution
  // was clamped to 0 in that case.
  bool level_regression = false;

  double tier_share_of(ZoneTier tier) const { return tier_share[static_cast<std::size_t>(tier)]; }
  double category_share_of(ZoneCategory c) const {
    return category_share[static_cast<std::size_t>(c)];
  }
};

// 0 when playtime is 0, otherwise evolution / playtime_hours * 1000.
double level_speed(int evolution, double playtime_hours);

// One profile per distinct player, sorted by player_id. Earliest snapshot
// fixes the initial level, the latest fixes final level, race, class and
// guild; ties on equal timestamps go to input order.
std::vector<PlayerProfile> build_profiles(std::span<const SessionRecord> records,
                                          const ZoneCatalog& catalog, int interval_minutes = 10);

// GM signature: no evolution, stuck at level 1, at least 8 hours of
// presence per day of the analysis window.
bool detect_gm(const PlayerProfile& profile, int window_days);

inline constexpr double kGmHoursPerDay = 8.0;

void write_profiles_csv(std::ostream& out, std::span<const PlayerProfile> profiles);
std::vector<PlayerProfile> read_profiles_csv(std::istream& in);

}  // namespace bartle

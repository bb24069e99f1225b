#include "bartle/profile.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "bartle/util.hpp"

namespace bartle {

double level_speed(int evolution, double playtime_hours) {
  if (evolution < 0 || playtime_hours < 0)
    throw std::invalid_argument("level_speed: negative input");
  if (playtime_hours == 0) return 0;
  return static_cast<double>(evolution) / playtime_hours * 1000.0;
}

std::vector<PlayerProfile> build_profiles(std::span<const SessionRecord> records,
                                          const ZoneCatalog& catalog, int interval_minutes) {
  if (interval_minutes <= 0) throw std::invalid_argument("build_profiles: interval must be positive");

  std::map<std::string, std::vector<std::size_t>> players;
  for (std::size_t i = 0; i < records.size(); ++i) players[records[i].player_id].push_back(i);

  std::vector<PlayerProfile> profiles;
  profiles.reserve(players.size());
  for (auto& [player_id, indices] : players) {
    // Stable sort by timestamp: equal timestamps keep input order, so the
    // earliest snapshot is the first seen and the latest is the last seen.
    std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return records[a].timestamp < records[b].timestamp;
    });

    const SessionRecord& earliest = records[indices.front()];
    const SessionRecord& latest = records[indices.back()];

    PlayerProfile p;
    p.player_id = player_id;
    p.race = latest.race;
    p.player_class = latest.player_class;
    p.last_guild = latest.guild;
    p.snapshots = indices.size();
    p.playtime_hours = static_cast<double>(indices.size()) * interval_minutes / 60.0;
    p.initial_level = earliest.level;
    p.final_level = latest.level;
    const int raw_evolution = latest.level - earliest.level;
    p.evolution = std::max(0, raw_evolution);

    std::set<std::string_view> zones;
    std::set<std::string_view> guilds;
    std::array<std::size_t, kZoneTierCount> tier_counts{};
    std::array<std::size_t, kZoneCategoryCount> category_counts{};
    int previous_level = earliest.level;
    bool regressed = false;
    for (const std::size_t idx : indices) {
      const SessionRecord& r = records[idx];
      zones.insert(r.zone);
      if (r.guild) guilds.insert(*r.guild);
      const ZoneInfo info = catalog.classify(r.zone);
      ++tier_counts[static_cast<std::size_t>(info.tier)];
      ++category_counts[static_cast<std::size_t>(info.category)];
      if (r.level < previous_level) regressed = true;
      previous_level = r.level;
    }
    p.level_regression = regressed;
    p.level_speed = level_speed(p.evolution, p.playtime_hours);
    p.zones_visited = zones.size();
    p.guild_count = guilds.size();
    const double n = static_cast<double>(indices.size());
    for (std::size_t t = 0; t < kZoneTierCount; ++t)
      p.tier_share[t] = static_cast<double>(tier_counts[t]) / n * 100.0;
    for (std::size_t c = 0; c < kZoneCategoryCount; ++c)
      p.category_share[c] = static_cast<double>(category_counts[c]) / n * 100.0;
    profiles.push_back(std::move(p));
  }
  return profiles;  // std::map iteration is already sorted by player_id
}

bool detect_gm(const PlayerProfile& profile, int window_days) {
  if (window_days <= 0) throw std::invalid_argument("detect_gm: window_days must be positive");
  return profile.evolution == 0 && profile.final_level == 1 &&
         profile.playtime_hours / window_days >= kGmHoursPerDay;
}

namespace {

constexpr std::string_view kProfileHeader =
    "player_id,race,class,last_guild,guild_count,snapshots,playtime_hours,initial_level,"
    "final_level,evolution,level_speed,zones_visited,"
    "share_tier_neutral,share_tier_novice,share_tier_low,share_tier_medium,share_tier_high,"
    "share_cat_city,share_cat_pvp,share_cat_field,level_regression";

double parse_double_field(std::string_view field) {
  const auto t = trim(field);
  double value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw std::invalid_argument("profiles csv: bad numeric field '" + std::string(t) + "'");
  return value;
}

long parse_int_field(std::string_view field) {
  const auto t = trim(field);
  long value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw std::invalid_argument("profiles csv: bad integer field '" + std::string(t) + "'");
  return value;
}

}  // namespace

void write_profiles_csv(std::ostream& out, std::span<const PlayerProfile> profiles) {
  out << kProfileHeader << '\n';
  for (const auto& p : profiles) {
    out << p.player_id << ',' << p.race << ',' << p.player_class << ','
        << (p.last_guild ? *p.last_guild : "-") << ',' << p.guild_count << ',' << p.snapshots << ','
        << format_double(p.playtime_hours) << ',' << p.initial_level << ',' << p.final_level << ','
        << p.evolution << ',' << format_double(p.level_speed) << ',' << p.zones_visited;
    for (const double share : p.tier_share) out << ',' << format_double(share);
    for (const double share : p.category_share) out << ',' << format_double(share);
    out << ',' << (p.level_regression ? 1 : 0) << '\n';
  }
}

std::vector<PlayerProfile> read_profiles_csv(std::istream& in) {
  std::vector<PlayerProfile> profiles;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (first) {
      first = false;
      if (std::string_view(line).starts_with("player_id")) continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 21) throw std::invalid_argument("profiles csv: wrong column count");
    PlayerProfile p;
    p.player_id = std::string(trim(f[0]));
    p.race = std::string(trim(f[1]));
    p.player_class = std::string(trim(f[2]));
    if (const auto g = trim(f[3]); !g.empty() && g != "-") p.last_guild = std::string(g);
    p.guild_count = static_cast<std::size_t>(parse_int_field(f[4]));
    p.snapshots = static_cast<std::size_t>(parse_int_field(f[5]));
    p.playtime_hours = parse_double_field(f[6]);
    p.initial_level = static_cast<int>(parse_int_field(f[7]));
    p.final_level = static_cast<int>(parse_int_field(f[8]));
    p.evolution = static_cast<int>(parse_int_field(f[9]));
    p.level_speed = parse_double_field(f[10]);
    p.zones_visited = static_cast<std::size_t>(parse_int_field(f[11]));
    for (std::size_t t = 0; t < kZoneTierCount; ++t) p.tier_share[t] = parse_double_field(f[12 + t]);
    for (std::size_t c = 0; c < kZoneCategoryCount; ++c)
      p.category_share[c] = parse_double_field(f[17 + c]);
    p.level_regression = parse_int_field(f[20]) != 0;
    profiles.push_back(std::move(p));
  }
  return profiles;
}

}  // namespace bartle

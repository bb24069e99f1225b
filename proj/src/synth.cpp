#include "bartle/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "bartle/profile.hpp"
#include "bartle/util.hpp"

namespace bartle {

std::string_view to_string(Archetype archetype) {
  switch (archetype) {
    case Archetype::Killer: return "Killer";
    case Archetype::Socializer: return "Socializer";
    case Archetype::Achiever: return "Achiever";
    case Archetype::Explorer: return "Explorer";
    case Archetype::Gm: return "GM";
    case Archetype::Noise: return "Noise";
  }
  return "unknown";
}

namespace {

struct ZonePool {
  const std::vector<std::string>* zones = nullptr;
  double weight = 0;
};

struct Pools {
  std::vector<std::string> city, pvp, field_novice, field_low, field_medium, field_high;
};

Pools collect_pools(const ZoneCatalog& catalog) {
  Pools p;
  for (const auto& [name, info] : catalog.entries()) {
    if (info.category == ZoneCategory::City) p.city.push_back(name);
    else if (info.category == ZoneCategory::Pvp) p.pvp.push_back(name);
    else switch (info.tier) {
      case ZoneTier::Novice: p.field_novice.push_back(name); break;
      case ZoneTier::Low: p.field_low.push_back(name); break;
      case ZoneTier::Medium: p.field_medium.push_back(name); break;
      case ZoneTier::High: p.field_high.push_back(name); break;
      case ZoneTier::Neutral: p.city.push_back(name); break;  // neutral hubs count with cities
    }
  }
  return p;
}

// m distinct zones drawn from weighted pools, also distinct from `used`.
std::vector<std::string> pick_distinct_zones(Rng& rng, const std::vector<ZonePool>& pools,
                                             std::size_t m, std::set<std::string>& used) {
  std::vector<std::string> picked;
  std::vector<double> weights;
  weights.reserve(pools.size());
  for (const auto& pool : pools) weights.push_back(pool.zones->empty() ? 0.0 : pool.weight);
  double total_weight = 0;
  for (const double w : weights) total_weight += w;

  std::size_t attempts = 0;
  const std::size_t max_attempts = 20 * m + 20;
  while (picked.size() < m && attempts < max_attempts && total_weight > 0) {
    ++attempts;
    const auto& pool = *pools[rng.weighted_index(weights)].zones;
    const auto& name = pool[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    if (used.insert(name).second) picked.push_back(name);
  }
  if (picked.size() < m) {
    // deterministic sweep over everything that is left
    for (const auto& pool : pools) {
      for (const auto& name : *pool.zones) {
        if (picked.size() == m) break;
        if (used.insert(name).second) picked.push_back(name);
      }
    }
  }
  if (picked.size() < m)
    throw std::invalid_argument("generate_population: zone catalog too small for requested zone count");
  return picked;
}

// k positive integers summing to total (total >= k).
std::vector<int> spread(Rng& rng, int total, int k) {
  std::vector<int> parts(static_cast<std::size_t>(k), 1);
  for (int r = 0; r < total - k; ++r)
    ++parts[static_cast<std::size_t>(rng.uniform_int(0, k - 1))];
  return parts;
}

struct ZoneGroup {
  int count = 0;  // snapshots to allocate
  int zones = 0;  // distinct zones wanted
  std::vector<ZonePool> pools;
};

struct PlayerSketch {
  int snapshots = 0;
  int initial_level = 1;
  int final_level = 1;
  std::vector<std::pair<std::string, int>> allocation;  // zone -> snapshot count
  int guild_count = 0;
};

void allocate_zones(Rng& rng, std::vector<ZoneGroup>& groups, PlayerSketch& sketch) {
  std::set<std::string> used;
  for (auto& group : groups) {
    if (group.count <= 0) continue;
    const int zones = std::clamp(group.zones, 1, group.count);
    const auto names = pick_distinct_zones(rng, group.pools, static_cast<std::size_t>(zones), used);
    const auto counts = spread(rng, group.count, zones);
    for (int z = 0; z < zones; ++z)
      sketch.allocation.emplace_back(names[static_cast<std::size_t>(z)], counts[static_cast<std::size_t>(z)]);
  }
}

int sample_int(Rng& rng, IntRange r) { return static_cast<int>(rng.uniform_int(r.lo, r.hi)); }

// Snapshot count for a playtime target; `at_least` keeps rule-side lower
// bounds exact, otherwise the count is floored so upper bounds hold.
int snapshots_for_hours(double hours, int interval_minutes, bool at_least) {
  const double raw = hours * 60.0 / interval_minutes;
  const int n = at_least ? static_cast<int>(std::ceil(raw)) : static_cast<int>(std::floor(raw));
  return std::max(1, n);
}

int evolution_for(double speed_target, int snapshots, int interval_minutes, int rounding) {
  const double exact = speed_target * snapshots * interval_minutes / 60000.0;
  double v;
  if (rounding < 0) v = std::floor(exact);
  else if (rounding > 0) v = std::ceil(exact);
  else v = std::llround(exact);
  return std::clamp(static_cast<int>(v), 0, kMaxLevel - 1);
}

enum class Variant { Core, MarginA, MarginB };

PlayerSketch sketch_killer(Rng& rng, const PopulationSpec& spec, const Pools& pools,
                           Variant variant) {
  const bool veteran = rng.chance(spec.killer_veteran_fraction);
  const ArchetypeParams& params = veteran ? spec.killer_veteran : spec.killer;
  PlayerSketch s;
  s.snapshots = snapshots_for_hours(rng.uniform(params.playtime_hours.lo, params.playtime_hours.hi),
                                    spec.interval_minutes, true);
  const double speed = rng.uniform(params.speed.lo, params.speed.hi);
  int evolution = evolution_for(speed, s.snapshots, spec.interval_minutes, 0);
  s.final_level = variant == Variant::MarginB ? sample_int(rng, {55, 59})
                                              : sample_int(rng, params.final_level);
  evolution = std::min(evolution, s.final_level - 1);
  s.initial_level = s.final_level - evolution;
  s.guild_count = sample_int(rng, params.guilds);

  const int m = sample_int(rng, params.zones);
  std::vector<ZoneGroup> groups;
  if (variant == Variant::MarginA) {
    // Miss the map-share clause: high+medium+neutral held at or below 70%.
    const int cap = static_cast<int>(std::floor(0.70 * s.snapshots));
    const int hmn = std::clamp(static_cast<int>(std::llround(rng.uniform(0.45, 0.66) * s.snapshots)),
                               1, std::max(1, cap));
    const int rest = s.snapshots - hmn;
    const int m_rest = std::max(1, m / 3);
    groups.push_back({hmn, m - m_rest,
                      {{&pools.pvp, 0.35}, {&pools.field_high, 0.3}, {&pools.city, 0.2},
                       {&pools.field_medium, 0.15}}});
    groups.push_back({rest, m_rest, {{&pools.field_low, 0.7}, {&pools.field_novice, 0.3}}});
  } else {
    const int low = static_cast<int>(std::floor(rng.uniform(0.0, 0.18) * s.snapshots));
    const int m_low = low > 0 ? 1 : 0;
    groups.push_back({s.snapshots - low, m - m_low,
                      {{&pools.pvp, 0.35}, {&pools.field_high, 0.3}, {&pools.city, 0.2},
                       {&pools.field_medium, 0.15}}});
    if (low > 0) groups.push_back({low, m_low, {{&pools.field_low, 1.0}}});
  }
  allocate_zones(rng, groups, s);
  return s;
}

PlayerSketch sketch_socializer(Rng& rng, const PopulationSpec& spec, const Pools& pools,
                               Variant variant) {
  const ArchetypeParams& params = spec.socializer;
  PlayerSketch s;
  const double hours = variant == Variant::MarginB
                           ? rng.uniform(std::max(150.0, params.playtime_hours.lo), params.playtime_hours.hi)
                           : rng.uniform(params.playtime_hours.lo, params.playtime_hours.hi);
  s.snapshots = snapshots_for_hours(hours, spec.interval_minutes, true);

  int evolution;
  if (variant == Variant::MarginB) {
    // Miss the speed clause from above: actual speed lands in [15.3, ~24).
    evolution = evolution_for(rng.uniform(15.3, 18.0), s.snapshots, spec.interval_minutes, +1);
  } else {
    evolution = evolution_for(rng.uniform(params.speed.lo, params.speed.hi), s.snapshots,
                              spec.interval_minutes, -1);
  }
  s.final_level = sample_int(rng, params.final_level);
  if (s.final_level < evolution + 2) s.final_level = std::min(evolution + 2, 28);
  evolution = std::min(evolution, s.final_level - 2);
  evolution = std::max(evolution, 0);
  s.initial_level = s.final_level - evolution;
  s.guild_count = sample_int(rng, params.guilds);

  const int m = std::min(sample_int(rng, params.zones), s.snapshots);
  int nn;  // snapshots in neutral or novice zones
  if (variant == Variant::MarginA) {
    const int cap = static_cast<int>(std::floor(0.30 * s.snapshots));
    nn = std::clamp(static_cast<int>(std::llround(rng.uniform(0.08, 0.28) * s.snapshots)), 0, cap);
  } else {
    const int floor_strict = static_cast<int>(std::floor(0.30 * s.snapshots)) + 1;
    nn = std::clamp(static_cast<int>(std::llround(rng.uniform(0.55, 0.95) * s.snapshots)),
                    std::min(floor_strict, s.snapshots), s.snapshots);
  }
  const int rest = s.snapshots - nn;
  std::vector<ZoneGroup> groups;
  const int m_rest = rest > 0 ? std::max(1, m / 4) : 0;
  if (nn > 0)
    groups.push_back({nn, std::max(1, m - m_rest), {{&pools.city, 0.6}, {&pools.field_novice, 0.4}}});
  if (rest > 0) groups.push_back({rest, std::max(1, m_rest), {{&pools.field_low, 1.0}}});
  allocate_zones(rng, groups, s);
  return s;
}

PlayerSketch sketch_walker(Rng& rng, const PopulationSpec& spec, const Pools& pools,
                           const ArchetypeParams& params, Variant variant, bool explorer) {
  PlayerSketch s;
  if (variant == Variant::Core) {
    s.snapshots = snapshots_for_hours(rng.uniform(params.playtime_hours.lo, params.playtime_hours.hi),
                                      spec.interval_minutes, true);
  } else {
    // Miss the playtime clause: just under the threshold.
    s.snapshots = snapshots_for_hours(rng.uniform(1450.0, 1790.0), spec.interval_minutes, false);
  }
  const double speed = rng.uniform(params.speed.lo, params.speed.hi);
  int evolution = evolution_for(speed, s.snapshots, spec.interval_minutes, 0);
  if (explorer) {
    s.initial_level = sample_int(rng, {25, std::max(25, std::min(45, kMaxLevel - evolution))});
    evolution = std::min(evolution, kMaxLevel - s.initial_level);
    s.final_level = s.initial_level + evolution;
  } else {
    evolution = std::min(evolution, kMaxLevel - 1);
    s.initial_level = sample_int(rng, {1, kMaxLevel - evolution});
    s.final_level = s.initial_level + evolution;
  }
  s.guild_count = sample_int(rng, params.guilds);

  int m = sample_int(rng, params.zones);
  m = std::min(m, s.snapshots);
  std::vector<ZoneGroup> groups;
  if (explorer) {
    groups.push_back({s.snapshots, m,
                      {{&pools.field_low, 0.22}, {&pools.field_medium, 0.22},
                       {&pools.field_high, 0.18}, {&pools.field_novice, 0.14},
                       {&pools.city, 0.12}, {&pools.pvp, 0.12}}});
  } else {
    groups.push_back({s.snapshots, m,
                      {{&pools.field_medium, 0.4}, {&pools.field_high, 0.3},
                       {&pools.field_low, 0.2}, {&pools.city, 0.1}}});
  }
  allocate_zones(rng, groups, s);
  return s;
}

PlayerSketch sketch_gm(Rng& rng, const PopulationSpec& spec, const Pools& pools, int slots,
                       int days) {
  PlayerSketch s;
  const int required = static_cast<int>(std::ceil(kGmHoursPerDay * 60.0 * days / spec.interval_minutes));
  if (required > slots)
    throw std::invalid_argument("generate_population: window too short for GM presence");
  const double hours_per_day = rng.uniform(spec.gm_hours_per_day.lo, spec.gm_hours_per_day.hi);
  const int wanted = static_cast<int>(std::llround(hours_per_day * 60.0 * days / spec.interval_minutes));
  s.snapshots = std::clamp(wanted, required, slots);
  s.initial_level = s.final_level = 1;
  s.guild_count = 0;
  std::vector<ZoneGroup> groups;
  groups.push_back({s.snapshots, std::min(sample_int(rng, spec.gm_zones), s.snapshots),
                    {{&pools.city, 1.0}}});
  allocate_zones(rng, groups, s);
  return s;
}

PlayerSketch sketch_noise(Rng& rng, const PopulationSpec& spec, const Pools& pools) {
  const ArchetypeParams& params = spec.noise;
  PlayerSketch s;
  s.snapshots = snapshots_for_hours(rng.uniform(params.playtime_hours.lo, params.playtime_hours.hi),
                                    spec.interval_minutes, false);
  int evolution = evolution_for(rng.uniform(params.speed.lo, params.speed.hi), s.snapshots,
                                spec.interval_minutes, 0);
  s.final_level = sample_int(rng, params.final_level);
  evolution = std::clamp(evolution, 0, s.final_level - 2);
  s.initial_level = s.final_level - evolution;
  s.guild_count = sample_int(rng, params.guilds);

  const int m = std::min(sample_int(rng, params.zones), s.snapshots);
  std::vector<ZoneGroup> groups;
  groups.push_back({s.snapshots, m,
                    {{&pools.field_low, 0.3}, {&pools.field_medium, 0.25},
                     {&pools.field_novice, 0.15}, {&pools.city, 0.15},
                     {&pools.field_high, 0.1}, {&pools.pvp, 0.05}}});
  allocate_zones(rng, groups, s);
  return s;
}

const std::vector<std::pair<std::string, double>>& race_weights() {
  static const std::vector<std::pair<std::string, double>> w = {
      {"Orc", 0.30}, {"Undead", 0.27}, {"Blood Elf", 0.17}, {"Tauren", 0.16}, {"Troll", 0.10}};
  return w;
}

const std::vector<std::pair<std::string, double>>& class_weights() {
  static const std::vector<std::pair<std::string, double>> w = {
      {"Hunter", 0.20}, {"Mage", 0.17},   {"Warrior", 0.16}, {"Warlock", 0.12}, {"Rogue", 0.11},
      {"Priest", 0.09}, {"Shaman", 0.08}, {"Druid", 0.05},   {"Paladin", 0.02}};
  return w;
}

std::string weighted_name(Rng& rng, const std::vector<std::pair<std::string, double>>& table) {
  std::vector<double> weights;
  weights.reserve(table.size());
  for (const auto& [name, w] : table) weights.push_back(w);
  return table[rng.weighted_index(weights)].first;
}

}  // namespace

SyntheticPopulation generate_population(const PopulationSpec& spec, const ZoneCatalog& catalog) {
  if (spec.counts.total() == 0)
    throw std::invalid_argument("generate_population: empty population");
  if (spec.interval_minutes <= 0)
    throw std::invalid_argument("generate_population: interval must be positive");
  if (spec.window_start > spec.window_end)
    throw std::invalid_argument("generate_population: window start after end");
  if (!(spec.margin_fraction >= 0 && spec.margin_fraction <= 1))
    throw std::invalid_argument("generate_population: margin_fraction outside [0,1]");

  const Pools pools = collect_pools(catalog);
  const auto need_pool = [](const std::vector<std::string>& pool, const char* what) {
    if (pool.empty())
      throw std::invalid_argument(std::string("generate_population: catalog has no ") + what);
  };
  if (spec.counts.killer + spec.counts.explorer + spec.counts.noise > 0) {
    need_pool(pools.field_high, "high-tier field zones");
    need_pool(pools.field_medium, "medium-tier field zones");
    need_pool(pools.pvp, "pvp zones");
  }
  if (spec.counts.total() > 0) {
    need_pool(pools.city, "city zones");
    need_pool(pools.field_low, "low-tier field zones");
    need_pool(pools.field_novice, "novice-tier field zones");
  }

  const auto span_minutes =
      std::chrono::duration_cast<std::chrono::minutes>(spec.window_end - spec.window_start).count();
  const int slots = static_cast<int>(span_minutes / spec.interval_minutes) + 1;
  const int days = window_days(spec.window_start, spec.window_end);

  struct Block {
    Archetype archetype;
    std::size_t count;
  };
  const std::vector<Block> blocks = {
      {Archetype::Killer, spec.counts.killer},     {Archetype::Socializer, spec.counts.socializer},
      {Archetype::Achiever, spec.counts.achiever}, {Archetype::Explorer, spec.counts.explorer},
      {Archetype::Gm, spec.counts.gm},             {Archetype::Noise, spec.counts.noise}};

  SyntheticPopulation population;
  std::size_t player_index = 0;
  char id_buf[16];

  for (const auto& block : blocks) {
    const auto margin_start =
        block.count - static_cast<std::size_t>(std::llround(spec.margin_fraction *
                                                            static_cast<double>(block.count)));
    for (std::size_t j = 0; j < block.count; ++j, ++player_index) {
      Rng rng(spec.rng_seed ^ (0x9e3779b97f4a7c15ULL * (player_index + 1)));
      Variant variant = Variant::Core;
      if ((block.archetype == Archetype::Killer || block.archetype == Archetype::Socializer ||
           block.archetype == Archetype::Achiever || block.archetype == Archetype::Explorer) &&
          j >= margin_start) {
        const std::size_t ordinal = j - margin_start;
        variant = (ordinal % 5) < 3 ? Variant::MarginA : Variant::MarginB;
      }

      PlayerSketch sketch;
      switch (block.archetype) {
        case Archetype::Killer: sketch = sketch_killer(rng, spec, pools, variant); break;
        case Archetype::Socializer: sketch = sketch_socializer(rng, spec, pools, variant); break;
        case Archetype::Achiever:
          sketch = sketch_walker(rng, spec, pools, spec.achiever,
                                 variant == Variant::Core ? Variant::Core : Variant::MarginA, false);
          break;
        case Archetype::Explorer:
          sketch = sketch_walker(rng, spec, pools, spec.explorer,
                                 variant == Variant::Core ? Variant::Core : Variant::MarginA, true);
          break;
        case Archetype::Gm: sketch = sketch_gm(rng, spec, pools, slots, days); break;
        case Archetype::Noise: sketch = sketch_noise(rng, spec, pools); break;
      }

      if (sketch.snapshots > slots)
        throw std::invalid_argument("generate_population: window too short for requested playtime");

      std::snprintf(id_buf, sizeof(id_buf), "P%06zu", player_index);
      const std::string player_id = id_buf;
      population.truth.archetypes.emplace(player_id, block.archetype);

      const std::string race = weighted_name(rng, race_weights());
      const std::string player_class = weighted_name(rng, class_weights());

      // Guild membership segments over the snapshot sequence.
      std::vector<std::string> guild_names;
      if (sketch.guild_count > 0) {
        std::set<std::string> seen;
        while (guild_names.size() < static_cast<std::size_t>(sketch.guild_count)) {
          char g[24];
          std::snprintf(g, sizeof(g), "Warband_%03d", static_cast<int>(rng.uniform_int(0, 499)));
          if (seen.insert(g).second) guild_names.emplace_back(g);
        }
      }
      std::vector<int> guild_segments;
      if (!guild_names.empty())
        guild_segments = spread(rng, sketch.snapshots, static_cast<int>(guild_names.size()));

      const auto start_slot = rng.uniform_int(0, slots - sketch.snapshots);

      // Expand the zone allocation and emit time-ordered snapshots.
      std::size_t zone_cursor = 0;
      int zone_left = sketch.allocation.empty() ? 0 : sketch.allocation[0].second;
      std::size_t guild_cursor = 0;
      int guild_left = guild_segments.empty() ? 0 : guild_segments[0];
      const int evolution = sketch.final_level - sketch.initial_level;
      for (int i = 0; i < sketch.snapshots; ++i) {
        SessionRecord record;
        record.timestamp = spec.window_start +
                           std::chrono::minutes{(start_slot + i) * spec.interval_minutes};
        record.player_id = player_id;
        record.race = race;
        record.player_class = player_class;
        record.level =
            sketch.snapshots == 1
                ? sketch.initial_level
                : sketch.initial_level +
                      static_cast<int>(std::llround(static_cast<double>(evolution) * i /
                                                    (sketch.snapshots - 1)));
        while (zone_left == 0 && zone_cursor + 1 < sketch.allocation.size()) {
          ++zone_cursor;
          zone_left = sketch.allocation[zone_cursor].second;
        }
        record.zone = sketch.allocation[zone_cursor].first;
        --zone_left;
        if (!guild_names.empty()) {
          while (guild_left == 0 && guild_cursor + 1 < guild_names.size()) {
            ++guild_cursor;
            guild_left = guild_segments[guild_cursor];
          }
          record.guild = guild_names[guild_cursor];
          --guild_left;
        }
        population.records.push_back(std::move(record));
      }
    }
  }
  return population;
}

PopulationSpec paper_like_spec(std::size_t total_players, double margin_fraction,
                               std::uint64_t rng_seed) {
  if (total_players < 20) throw std::invalid_argument("paper_like_spec: population too small");
  PopulationSpec spec;
  spec.rng_seed = rng_seed;
  spec.margin_fraction = margin_fraction;
  auto share = [&](double f) { return static_cast<std::size_t>(std::llround(f * total_players)); };
  spec.counts.killer = share(0.36);
  spec.counts.socializer = share(0.18);
  spec.counts.achiever = share(0.18);
  spec.counts.explorer = share(0.18);
  spec.counts.gm = std::max<std::size_t>(1, share(0.005));
  const auto assigned = spec.counts.killer + spec.counts.socializer + spec.counts.achiever +
                        spec.counts.explorer + spec.counts.gm;
  spec.counts.noise = total_players > assigned ? total_players - assigned : 0;
  return spec;
}

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "player_id,archetype\n";
  for (const auto& [player_id, archetype] : truth.archetypes)
    out << player_id << ',' << to_string(archetype) << '\n';
}

GroundTruth read_ground_truth_csv(std::istream& in) {
  GroundTruth truth;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (first) {
      first = false;
      if (std::string_view(line).starts_with("player_id")) continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw std::invalid_argument("ground truth csv: wrong column count");
    const auto token = trim(fields[1]);
    bool matched = false;
    for (const Archetype a : {Archetype::Killer, Archetype::Socializer, Archetype::Achiever,
                              Archetype::Explorer, Archetype::Gm, Archetype::Noise}) {
      if (token == to_string(a)) {
        truth.archetypes.emplace(std::string(trim(fields[0])), a);
        matched = true;
        break;
      }
    }
    if (!matched) throw std::invalid_argument("ground truth csv: unknown archetype '" + std::string(token) + "'");
  }
  return truth;
}

}  // namespace bartle

// Synthetic session-log generator with per-player ground-truth archetypes.
// Core players are constructed to satisfy their archetype's labeling rule;
// a configurable margin fraction is generated just outside one rule clause
// so the semi-supervised step has real work to do.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bartle/session.hpp"
#include "bartle/zone_catalog.hpp"

namespace bartle {

enum class Archetype { Killer = 0, Socializer, Achiever, Explorer, Gm, Noise };

std::string_view to_string(Archetype archetype);

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RealRange {
  double lo = 0;
  double hi = 0;
};

// Sampling ranges per archetype. Playtime is expressed in hours and
// converted to snapshot counts for the configured interval; speed targets
// are in levels per 1000 hours, matching the labeling rules.
struct ArchetypeParams {
  RealRange playtime_hours;
  RealRange speed;
  IntRange zones;
  IntRange final_level;
  IntRange guilds;
};

struct PopulationCounts {
  std::size_t killer = 0;
  std::size_t socializer = 0;
  std::size_t achiever = 0;
  std::size_t explorer = 0;
  std::size_t gm = 0;
  std::size_t noise = 0;

  std::size_t total() const { return killer + socializer + achiever + explorer + gm + noise; }
};

struct PopulationSpec {
  PopulationCounts counts;
  Timestamp window_start = make_timestamp(2006, 1, 1);
  Timestamp window_end = make_timestamp(2006, 12, 31, 23, 50);
  int interval_minutes = 600;
  std::uint64_t rng_seed = 1;
  // Fraction of each behavior class generated as a near-threshold miss of
  // its own rule (unlabeled by the seeding step).
  double margin_fraction = 0.0;

  ArchetypeParams killer{{300, 2400}, {2, 20}, {3, 9}, {60, 80}, {0, 2}};
  // Long-haul killers whose evolution overlaps the achiever range; they
  // keep the archetype separable only through the speed attribute.
  double killer_veteran_fraction = 0.35;
  ArchetypeParams killer_veteran{{2100, 2400}, {15, 22}, {3, 9}, {60, 80}, {0, 2}};
  ArchetypeParams socializer{{30, 400}, {0, 12}, {2, 8}, {3, 28}, {2, 6}};
  ArchetypeParams achiever{{1800, 2200}, {25.5, 36}, {6, 24}, {0, 0}, {0, 2}};
  ArchetypeParams explorer{{1800, 2300}, {5, 24}, {30, 55}, {0, 0}, {0, 3}};
  RealRange gm_hours_per_day{16, 19};
  IntRange gm_zones{1, 3};
  ArchetypeParams noise{{200, 1700}, {0, 18}, {3, 26}, {31, 59}, {0, 3}};
};

struct GroundTruth {
  std::map<std::string, Archetype> archetypes;
};

struct SyntheticPopulation {
  std::vector<SessionRecord> records;  // ordered by player, then time
  GroundTruth truth;
};

// Deterministic in the spec (per-player sub-seeds derived from rng_seed).
// Throws when the spec is infeasible for the catalog or window.
SyntheticPopulation generate_population(const PopulationSpec& spec, const ZoneCatalog& catalog);

// Archetype mix resembling the original corpus: killers the plurality,
// a thin slice of GMs, the rest split between the other behaviors and
// rule-free noise players.
PopulationSpec paper_like_spec(std::size_t total_players, double margin_fraction,
                               std::uint64_t rng_seed);

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth_csv(std::istream& in);

}  // namespace bartle

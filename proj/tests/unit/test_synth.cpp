#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bartle/pipeline.hpp"
#include "bartle/seed_labeler.hpp"
#include "bartle/session.hpp"
#include "bartle/synth.hpp"
#include "../test_helpers.hpp"

using namespace bartle;

namespace {

const ZoneCatalog& shipped_catalog() {
  static ZoneCatalog catalog = [] {
    std::ifstream in(BARTLE_DATA_DIR "/zones.csv");
    REQUIRE(in.good());
    return std::move(load_zone_catalog(in).catalog);
  }();
  return catalog;
}

std::pair<std::vector<PlayerProfile>, std::vector<PlayerProfile>> profiles_of(
    const PopulationSpec& spec, const SyntheticPopulation& population) {
  auto profiles = build_profiles(population.records, shipped_catalog(), spec.interval_minutes);
  return partition_gms(std::move(profiles), window_days(spec.window_start, spec.window_end));
}

}  // namespace

TEST_CASE("an all-killer population satisfies the killer rule everywhere") {
  PopulationSpec spec;
  spec.counts.killer = 100;
  spec.rng_seed = 5;
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  CHECK(population.truth.archetypes.size() == 100);
  const auto [players, gms] = profiles_of(spec, population);
  CHECK(gms.empty());
  REQUIRE(players.size() == 100);
  for (const auto& p : players) {
    const RuleMatches m = evaluate_rules(p);
    CHECK(m.killer);
    CHECK(m.count() == 1);
    CHECK(seed_label(p) == Behavior::Killer);
  }
}

TEST_CASE("noise players match no rule") {
  PopulationSpec spec;
  spec.counts.noise = 50;
  spec.rng_seed = 6;
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  const auto [players, gms] = profiles_of(spec, population);
  CHECK(gms.empty());
  const SeedLabeling labeling = seed_dataset(players);
  CHECK(labeling.labeled() == 0);
  CHECK(labeling.coverage() == 0.0);
}

TEST_CASE("margin 0 seed labeling recovers ground truth with full precision") {
  PopulationSpec spec = paper_like_spec(600, 0.0, 11);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  const auto [players, gms] = profiles_of(spec, population);
  const SeedLabeling labeling = seed_dataset(players);
  CHECK(labeling.conflicts == 0);
  for (const auto& [player_id, label] : labeling.assignments) {
    const Archetype truth = population.truth.archetypes.at(player_id);
    REQUIRE(truth != Archetype::Gm);
    REQUIRE(truth != Archetype::Noise);
    CHECK(static_cast<int>(label) == static_cast<int>(truth));
  }
  // and every behavior player is actually labeled at margin 0
  std::size_t behavior_players = 0;
  for (const auto& [id, a] : population.truth.archetypes)
    if (a != Archetype::Gm && a != Archetype::Noise) ++behavior_players;
  CHECK(labeling.labeled() == behavior_players);
}

TEST_CASE("paper-like mix at margin 0.7 lands in the labeled-coverage band") {
  PopulationSpec spec = paper_like_spec(2000, 0.7, 42);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  const auto [players, gms] = profiles_of(spec, population);
  const SeedLabeling labeling = seed_dataset(players);
  CHECK(labeling.coverage() >= 0.25);
  CHECK(labeling.coverage() <= 0.35);
  CHECK(labeling.conflicts == 0);
}

TEST_CASE("generation is byte-identical for the same spec") {
  const PopulationSpec spec = paper_like_spec(300, 0.5, 77);
  const SyntheticPopulation a = generate_population(spec, shipped_catalog());
  const SyntheticPopulation b = generate_population(spec, shipped_catalog());
  std::ostringstream sa, sb;
  write_session_log(sa, a.records);
  write_session_log(sb, b.records);
  CHECK(sa.str() == sb.str());
  CHECK(a.truth.archetypes == b.truth.archetypes);

  PopulationSpec other = spec;
  other.rng_seed = 78;
  const SyntheticPopulation c = generate_population(other, shipped_catalog());
  std::ostringstream sc;
  write_session_log(sc, c.records);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("generated records survive ingest with zero rejects") {
  const PopulationSpec spec = paper_like_spec(300, 0.7, 13);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  std::ostringstream out;
  write_session_log(out, population.records);
  std::istringstream in(out.str());
  const ParseResult parsed = parse_session_log(in);
  CHECK(parsed.stats.rows_rejected == 0);
  CHECK(parsed.stats.rows_accepted == population.records.size());
  CHECK(parsed.records == population.records);
  CHECK(parsed.stats.distinct_players == population.truth.archetypes.size());
}

TEST_CASE("gm players carry the gm signature and nothing else does") {
  PopulationSpec spec = paper_like_spec(400, 0.5, 21);
  spec.counts.gm = 10;
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  const auto [players, gms] = profiles_of(spec, population);
  CHECK(gms.size() == 10);
  for (const auto& gm : gms) {
    CHECK(population.truth.archetypes.at(gm.player_id) == Archetype::Gm);
    CHECK(gm.final_level == 1);
    CHECK(gm.evolution == 0);
  }
  for (const auto& p : players) CHECK(population.truth.archetypes.at(p.player_id) != Archetype::Gm);
}

TEST_CASE("ground truth CSV round-trips") {
  const PopulationSpec spec = paper_like_spec(120, 0.3, 3);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  std::ostringstream out;
  write_ground_truth_csv(out, population.truth);
  std::istringstream in(out.str());
  const GroundTruth reread = read_ground_truth_csv(in);
  CHECK(reread.archetypes == population.truth.archetypes);
}

TEST_CASE("infeasible specs are rejected") {
  PopulationSpec empty;
  CHECK_THROWS_AS(generate_population(empty, shipped_catalog()), std::invalid_argument);

  // a catalog with no pvp or high zones cannot host killers or explorers
  ZoneCatalog tiny;
  tiny.insert("Town", {ZoneCategory::City, ZoneTier::Neutral});
  tiny.insert("Meadow", {ZoneCategory::Field, ZoneTier::Novice});
  tiny.insert("Forest", {ZoneCategory::Field, ZoneTier::Low});
  PopulationSpec killers;
  killers.counts.killer = 5;
  CHECK_THROWS_AS(generate_population(killers, tiny), std::invalid_argument);

  // window shorter than the required playtime
  PopulationSpec cramped;
  cramped.counts.achiever = 3;
  cramped.window_start = make_timestamp(2006, 1, 1);
  cramped.window_end = make_timestamp(2006, 1, 7);
  CHECK_THROWS_AS(generate_population(cramped, shipped_catalog()), std::invalid_argument);

  PopulationSpec inverted;
  inverted.counts.noise = 3;
  inverted.window_start = make_timestamp(2007, 1, 1);
  inverted.window_end = make_timestamp(2006, 1, 1);
  CHECK_THROWS_AS(generate_population(inverted, shipped_catalog()), std::invalid_argument);
}

TEST_CASE("records are ordered by player then time") {
  const PopulationSpec spec = paper_like_spec(150, 0.4, 9);
  const SyntheticPopulation population = generate_population(spec, shipped_catalog());
  for (std::size_t i = 1; i < population.records.size(); ++i) {
    const auto& prev = population.records[i - 1];
    const auto& cur = population.records[i];
    const bool ordered = prev.player_id < cur.player_id ||
                         (prev.player_id == cur.player_id && prev.timestamp <= cur.timestamp);
    CHECK(ordered);
  }
}

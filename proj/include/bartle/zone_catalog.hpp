// Zone classification: every zone name maps to a category (city, pvp,
// field) and a level tier. Lookups are total; unlisted names fall back to
// a configurable policy entry and are counted.
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bartle {

enum class ZoneCategory { City = 0, Pvp = 1, Field = 2 };
enum class ZoneTier { Neutral = 0, Novice = 1, Low = 2, Medium = 3, High = 4 };

inline constexpr std::size_t kZoneCategoryCount = 3;
inline constexpr std::size_t kZoneTierCount = 5;

std::string_view to_string(ZoneCategory category);
std::string_view to_string(ZoneTier tier);
bool parse_zone_category(std::string_view token, ZoneCategory& out);
bool parse_zone_tier(std::string_view token, ZoneTier& out);

struct ZoneInfo {
  ZoneCategory category = ZoneCategory::Field;
  ZoneTier tier = ZoneTier::Neutral;

  bool operator==(const ZoneInfo&) const = default;
};

struct CatalogLoadStats {
  std::size_t rows_read = 0;
  std::size_t duplicates = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> reject_reasons;
};

class ZoneCatalog {
 public:
  ZoneCatalog() = default;
  explicit ZoneCatalog(ZoneInfo unknown_policy) : unknown_policy_(unknown_policy) {}

  ZoneCatalog(ZoneCatalog&& other) noexcept;
  ZoneCatalog& operator=(ZoneCatalog&& other) noexcept;
  ZoneCatalog(const ZoneCatalog&) = delete;
  ZoneCatalog& operator=(const ZoneCatalog&) = delete;

  // Last insert wins for duplicate names.
  void insert(std::string name, ZoneInfo info) { entries_.insert_or_assign(std::move(name), info); }

  // Total: unlisted names yield the policy entry and bump the counter.
  ZoneInfo classify(std::string_view name) const;

  bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t unknown_hits() const { return unknown_hits_.load(); }
  ZoneInfo unknown_policy() const { return unknown_policy_; }
  const std::map<std::string, ZoneInfo, std::less<>>& entries() const { return entries_; }

  std::vector<std::string> zones_with(ZoneCategory category, ZoneTier tier) const;
  std::vector<std::string> zones_with(ZoneTier tier) const;

 private:
  std::map<std::string, ZoneInfo, std::less<>> entries_;
  ZoneInfo unknown_policy_{ZoneCategory::Field, ZoneTier::Neutral};
  mutable std::atomic<std::uint64_t> unknown_hits_{0};
};

struct CatalogLoadResult {
  ZoneCatalog catalog;
  CatalogLoadStats stats;
};

// Rows are `name,category,tier` (comma or tab separated); '#' starts a
// comment line. Rows with unknown category/tier tokens are rejected and
// counted, duplicates are counted with last entry winning.
CatalogLoadResult load_zone_catalog(std::istream& in);

}  // namespace bartle

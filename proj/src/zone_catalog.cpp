#include "bartle/zone_catalog.hpp"

#include <istream>

#include "bartle/util.hpp"

namespace bartle {

std::string_view to_string(ZoneCategory category) {
  switch (category) {
    case ZoneCategory::City: return "city";
    case ZoneCategory::Pvp: return "pvp";
    case ZoneCategory::Field: return "field";
  }
  return "unknown";
}

std::string_view to_string(ZoneTier tier) {
  switch (tier) {
    case ZoneTier::Neutral: return "neutral";
    case ZoneTier::Novice: return "novice";
    case ZoneTier::Low: return "low";
    case ZoneTier::Medium: return "medium";
    case ZoneTier::High: return "high";
  }
  return "unknown";
}

bool parse_zone_category(std::string_view token, ZoneCategory& out) {
  if (token == "city") out = ZoneCategory::City;
  else if (token == "pvp") out = ZoneCategory::Pvp;
  else if (token == "field") out = ZoneCategory::Field;
  else return false;
  return true;
}

bool parse_zone_tier(std::string_view token, ZoneTier& out) {
  if (token == "neutral") out = ZoneTier::Neutral;
  else if (token == "novice") out = ZoneTier::Novice;
  else if (token == "low") out = ZoneTier::Low;
  else if (token == "medium") out = ZoneTier::Medium;
  else if (token == "high") out = ZoneTier::High;
  else return false;
  return true;
}

ZoneCatalog::ZoneCatalog(ZoneCatalog&& other) noexcept
    : entries_(std::move(other.entries_)),
      unknown_policy_(other.unknown_policy_),
      unknown_hits_(other.unknown_hits_.load()) {}

ZoneCatalog& ZoneCatalog::operator=(ZoneCatalog&& other) noexcept {
  entries_ = std::move(other.entries_);
  unknown_policy_ = other.unknown_policy_;
  unknown_hits_.store(other.unknown_hits_.load());
  return *this;
}

ZoneInfo ZoneCatalog::classify(std::string_view name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) {
    unknown_hits_.fetch_add(1, std::memory_order_relaxed);
    return unknown_policy_;
  }
  return it->second;
}

std::vector<std::string> ZoneCatalog::zones_with(ZoneCategory category, ZoneTier tier) const {
  std::vector<std::string> out;
  for (const auto& [name, info] : entries_)
    if (info.category == category && info.tier == tier) out.push_back(name);
  return out;
}

std::vector<std::string> ZoneCatalog::zones_with(ZoneTier tier) const {
  std::vector<std::string> out;
  for (const auto& [name, info] : entries_)
    if (info.tier == tier) out.push_back(name);
  return out;
}

CatalogLoadResult load_zone_catalog(std::istream& in) {
  CatalogLoadResult result;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    if (trim(view).empty()) continue;
    ++result.stats.rows_read;

    // Tab-separated when the row contains a tab, comma otherwise.
    const char delimiter = view.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto fields = split(view, delimiter);
    if (fields.size() != 3) {
      ++result.stats.rejected;
      ++result.stats.reject_reasons["bad_column_count"];
      continue;
    }
    const auto name = trim(fields[0]);
    if (name.empty()) {
      ++result.stats.rejected;
      ++result.stats.reject_reasons["empty_name"];
      continue;
    }
    ZoneInfo info;
    if (!parse_zone_category(trim(fields[1]), info.category)) {
      ++result.stats.rejected;
      ++result.stats.reject_reasons["bad_category"];
      continue;
    }
    if (!parse_zone_tier(trim(fields[2]), info.tier)) {
      ++result.stats.rejected;
      ++result.stats.reject_reasons["bad_tier"];
      continue;
    }
    if (result.catalog.contains(name)) ++result.stats.duplicates;
    result.catalog.insert(std::string(name), info);
  }
  return result;
}

}  // namespace bartle

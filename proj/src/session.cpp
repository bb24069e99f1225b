#include "bartle/session.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "bartle/util.hpp"

namespace bartle {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::BlankLine: return "blank_line";
    case RejectReason::BadColumnCount: return "bad_column_count";
    case RejectReason::BadTimestamp: return "bad_timestamp";
    case RejectReason::BadLevel: return "bad_level";
    case RejectReason::EmptyPlayerId: return "empty_player_id";
    case RejectReason::EmptyZone: return "empty_zone";
  }
  return "unknown";
}

ColumnMap ColumnMap::parse(std::istream& in) {
  ColumnMap map;
  for (const auto& [key, value] : read_key_values(in)) {
    std::size_t index = 0;
    const auto trimmed = trim(value);
    const auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), index);
    if (res.ec != std::errc{} || res.ptr != trimmed.data() + trimmed.size())
      throw std::invalid_argument("column map: bad index for '" + key + "'");
    if (key == "timestamp") map.timestamp = index;
    else if (key == "player_id") map.player_id = index;
    else if (key == "guild") map.guild = index;
    else if (key == "level") map.level = index;
    else if (key == "race") map.race = index;
    else if (key == "class") map.player_class = index;
    else if (key == "zone") map.zone = index;
    else if (key == "columns") map.columns = index;
    else throw std::invalid_argument("column map: unknown field '" + key + "'");
  }
  return map;
}

std::size_t ColumnMap::expected_columns() const {
  if (columns) return *columns;
  std::size_t max_index = timestamp;
  for (const std::size_t i : {player_id, guild, level, race, player_class, zone})
    if (i > max_index) max_index = i;
  return max_index + 1;
}

namespace {

void reject(IngestStats& stats, std::size_t line_number, RejectReason reason) {
  ++stats.rows_rejected;
  ++stats.reject_reasons[reason];
  stats.rejected_lines.push_back({line_number, reason});
}

}  // namespace

ParseResult parse_session_log(std::istream& in, const ColumnMap& columns,
                              const ParseOptions& options) {
  if (in.fail()) throw std::runtime_error("session log: unreadable stream");

  ParseResult result;
  IngestStats& stats = result.stats;
  const std::size_t expected = columns.expected_columns();
  std::set<std::string> players;

  std::string line;
  std::size_t line_number = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++line_number;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++stats.rows_read;

    const std::string_view view = line;
    if (trim(view).empty()) {
      reject(stats, line_number, RejectReason::BlankLine);
      continue;
    }
    const auto fields = split(view, options.delimiter);
    if (fields.size() != expected) {
      reject(stats, line_number, RejectReason::BadColumnCount);
      continue;
    }

    const auto ts = parse_timestamp(trim(fields[columns.timestamp]), options.timestamp_format);
    if (!ts) {
      reject(stats, line_number, RejectReason::BadTimestamp);
      continue;
    }

    const auto level_field = trim(fields[columns.level]);
    int level = 0;
    const auto res = std::from_chars(level_field.data(), level_field.data() + level_field.size(), level);
    if (res.ec != std::errc{} || res.ptr != level_field.data() + level_field.size() ||
        level < kMinLevel || level > kMaxLevel) {
      reject(stats, line_number, RejectReason::BadLevel);
      continue;
    }

    SessionRecord record;
    record.timestamp = *ts;
    record.player_id = std::string(trim(fields[columns.player_id]));
    if (record.player_id.empty()) {
      reject(stats, line_number, RejectReason::EmptyPlayerId);
      continue;
    }
    record.zone = std::string(trim(fields[columns.zone]));
    if (record.zone.empty()) {
      reject(stats, line_number, RejectReason::EmptyZone);
      continue;
    }
    record.level = level;
    record.race = std::string(trim(fields[columns.race]));
    record.player_class = std::string(trim(fields[columns.player_class]));
    const auto guild = trim(fields[columns.guild]);
    if (!guild.empty() && guild != options.no_guild_token) record.guild = std::string(guild);

    ++stats.rows_accepted;
    players.insert(record.player_id);
    if (!stats.first_timestamp || record.timestamp < *stats.first_timestamp)
      stats.first_timestamp = record.timestamp;
    if (!stats.last_timestamp || record.timestamp > *stats.last_timestamp)
      stats.last_timestamp = record.timestamp;
    result.records.push_back(std::move(record));
  }
  stats.distinct_players = players.size();
  return result;
}

std::vector<SessionRecord> filter_window(std::span<const SessionRecord> records, Timestamp start,
                                         Timestamp end) {
  if (start > end) throw std::invalid_argument("filter_window: start after end");
  std::vector<SessionRecord> out;
  for (const auto& record : records)
    if (record.timestamp >= start && record.timestamp <= end) out.push_back(record);
  return out;
}

void write_session_log(std::ostream& out, std::span<const SessionRecord> records,
                       const ParseOptions& options) {
  const char d = options.delimiter;
  for (const auto& r : records) {
    out << format_timestamp(r.timestamp, options.timestamp_format) << d << r.player_id << d
        << (r.guild ? *r.guild : options.no_guild_token) << d << r.level << d << r.race << d
        << r.player_class << d << r.zone << '\n';
  }
}

}  // namespace bartle

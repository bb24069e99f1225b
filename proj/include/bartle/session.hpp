// Parsing and windowing of session-snapshot logs. One input line is one
// avatar snapshot; malformed lines are counted per reason, never silently
// dropped.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bartle/time.hpp"

namespace bartle {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 80;

struct SessionRecord {
  Timestamp timestamp{};
  std::string player_id;
  std::optional<std::string> guild;  // nullopt = no guild
  int level = kMinLevel;
  std::string race;
  std::string player_class;
  std::string zone;

  bool operator==(const SessionRecord&) const = default;
};

enum class RejectReason {
  BlankLine,
  BadColumnCount,
  BadTimestamp,
  BadLevel,
  EmptyPlayerId,
  EmptyZone,
};

std::string_view to_string(RejectReason reason);

struct RejectedLine {
  std::size_t line_number = 0;  // 1-based, including any header line
  RejectReason reason{};
};

struct IngestStats {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::map<RejectReason, std::size_t> reject_reasons;
  std::vector<RejectedLine> rejected_lines;
  std::size_t distinct_players = 0;
  std::optional<Timestamp> first_timestamp;
  std::optional<Timestamp> last_timestamp;
};

// Field -> column index. The canonical layout is the 7-column identity
// map; `columns` pins the expected width so that wider raw exports (with
// unused filler columns) can be adapted via a map file.
struct ColumnMap {
  std::size_t timestamp = 0;
  std::size_t player_id = 1;
  std::size_t guild = 2;
  std::size_t level = 3;
  std::size_t race = 4;
  std::size_t player_class = 5;
  std::size_t zone = 6;
  std::optional<std::size_t> columns;  // expected column count; default max index + 1

  static ColumnMap parse(std::istream& in);
  std::size_t expected_columns() const;
};

struct ParseOptions {
  char delimiter = ',';
  bool has_header = false;
  std::string timestamp_format = std::string(kDefaultTimestampFormat);
  std::string no_guild_token = "-";
};

struct ParseResult {
  std::vector<SessionRecord> records;
  IngestStats stats;
};

ParseResult parse_session_log(std::istream& in, const ColumnMap& columns = {},
                              const ParseOptions& options = {});

// Records with start <= timestamp <= end, input order preserved.
std::vector<SessionRecord> filter_window(std::span<const SessionRecord> records, Timestamp start,
                                         Timestamp end);

void write_session_log(std::ostream& out, std::span<const SessionRecord> records,
                       const ParseOptions& options = {});

}  // namespace bartle

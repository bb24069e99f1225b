// Calendar timestamps at minute resolution, UTC. Parsing is driven by a
// strftime-like format string so other corpora can adapt without code
// changes.
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace bartle {

using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

inline constexpr std::string_view kDefaultTimestampFormat = "%Y-%m-%d %H:%M";

Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour = 0, unsigned minute = 0);

// Supported tokens: %Y %m %d %H %M %S (seconds accepted and dropped).
// A space in the format matches one or more whitespace characters.
std::optional<Timestamp> parse_timestamp(std::string_view text,
                                         std::string_view format = kDefaultTimestampFormat);

std::string format_timestamp(Timestamp ts, std::string_view format = kDefaultTimestampFormat);

int year_of(Timestamp ts);

// Inclusive [Jan 1 00:00, Dec 31 23:59] of the given calendar year.
std::pair<Timestamp, Timestamp> calendar_year_window(int year);

// Number of (possibly fractional) days covered by an inclusive window,
// rounded up to at least one whole day.
int window_days(Timestamp start, Timestamp end);

}  // namespace bartle

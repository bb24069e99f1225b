#include "bartle/time.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace bartle {

namespace {

using days = std::chrono::days;
using minutes = std::chrono::minutes;

bool read_number(std::string_view& text, int max_digits, int& out) {
  int value = 0;
  int digits = 0;
  while (!text.empty() && digits < max_digits && std::isdigit(static_cast<unsigned char>(text.front()))) {
    value = value * 10 + (text.front() - '0');
    text.remove_prefix(1);
    ++digits;
  }
  if (digits == 0) return false;
  out = value;
  return true;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour, unsigned minute) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) throw std::invalid_argument("make_timestamp: invalid calendar date");
  if (hour > 23 || minute > 59) throw std::invalid_argument("make_timestamp: invalid time of day");
  return std::chrono::sys_days{ymd} + std::chrono::hours{hour} + minutes{minute};
}

std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  bool saw_year = false, saw_month = false, saw_day = false;

  text = std::string_view{text};
  std::string_view fmt = format;
  while (!fmt.empty()) {
    if (fmt.front() == '%') {
      if (fmt.size() < 2) return std::nullopt;
      const char token = fmt[1];
      fmt.remove_prefix(2);
      bool ok = true;
      switch (token) {
        case 'Y': ok = read_number(text, 4, year); saw_year = ok; break;
        case 'm': ok = read_number(text, 2, month); saw_month = ok; break;
        case 'd': ok = read_number(text, 2, day); saw_day = ok; break;
        case 'H': ok = read_number(text, 2, hour); break;
        case 'M': ok = read_number(text, 2, minute); break;
        case 'S': ok = read_number(text, 2, second); break;
        case '%':
          if (text.empty() || text.front() != '%') return std::nullopt;
          text.remove_prefix(1);
          break;
        default: return std::nullopt;  // unsupported token
      }
      if (!ok) return std::nullopt;
    } else if (fmt.front() == ' ') {
      fmt.remove_prefix(1);
      if (text.empty() || !std::isspace(static_cast<unsigned char>(text.front()))) return std::nullopt;
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    } else {
      if (text.empty() || text.front() != fmt.front()) return std::nullopt;
      text.remove_prefix(1);
      fmt.remove_prefix(1);
    }
  }
  if (!text.empty()) return std::nullopt;
  if (!saw_year || !saw_month || !saw_day) return std::nullopt;

  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
  return std::chrono::sys_days{ymd} + std::chrono::hours{hour} + minutes{minute};
}

std::string format_timestamp(Timestamp ts, std::string_view format) {
  const auto day_point = std::chrono::floor<days>(ts);
  const std::chrono::year_month_day ymd{day_point};
  const auto tod = ts - day_point;
  const auto hours = std::chrono::duration_cast<std::chrono::hours>(tod);
  const auto mins = std::chrono::duration_cast<minutes>(tod - hours);

  std::string out;
  out.reserve(format.size() + 8);
  std::string_view fmt = format;
  char buf[8];
  while (!fmt.empty()) {
    if (fmt.front() == '%' && fmt.size() >= 2) {
      const char token = fmt[1];
      fmt.remove_prefix(2);
      switch (token) {
        case 'Y': std::snprintf(buf, sizeof(buf), "%04d", static_cast<int>(ymd.year())); out += buf; break;
        case 'm': std::snprintf(buf, sizeof(buf), "%02u", static_cast<unsigned>(ymd.month())); out += buf; break;
        case 'd': std::snprintf(buf, sizeof(buf), "%02u", static_cast<unsigned>(ymd.day())); out += buf; break;
        case 'H': std::snprintf(buf, sizeof(buf), "%02d", static_cast<int>(hours.count())); out += buf; break;
        case 'M': std::snprintf(buf, sizeof(buf), "%02d", static_cast<int>(mins.count())); out += buf; break;
        case 'S': out += "00"; break;
        case '%': out += '%'; break;
        default: out += '%'; out += token; break;
      }
    } else {
      out += fmt.front();
      fmt.remove_prefix(1);
    }
  }
  return out;
}

int year_of(Timestamp ts) {
  const std::chrono::year_month_day ymd{std::chrono::floor<days>(ts)};
  return static_cast<int>(ymd.year());
}

std::pair<Timestamp, Timestamp> calendar_year_window(int year) {
  return {make_timestamp(year, 1, 1, 0, 0), make_timestamp(year, 12, 31, 23, 59)};
}

int window_days(Timestamp start, Timestamp end) {
  if (start > end) throw std::invalid_argument("window_days: start after end");
  const auto span = std::chrono::duration_cast<std::chrono::minutes>(end - start).count() + 1;
  const auto full = (span + 1439) / 1440;
  return static_cast<int>(full < 1 ? 1 : full);
}

}  // namespace bartle

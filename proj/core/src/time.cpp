#include "confassist/time.hpp"

#include <charconv>
#include <cstdio>

#include "confassist/error.hpp"

namespace confassist {

namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) {
    throw Error(ErrorCode::schema_violation,
                "timestamp too short: '" + std::string(text) + "'");
  }
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc() || ptr != first + len) {
    throw Error(ErrorCode::schema_violation,
                "malformed timestamp: '" + std::string(text) + "'");
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || (text[pos] != c && !(c == 'T' && text[pos] == 't'))) {
    throw Error(ErrorCode::schema_violation,
                "malformed timestamp: '" + std::string(text) + "'");
  }
}

}  // namespace

Instant system_now() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

Instant parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  const int y = read_int(text, 0, 4);
  expect(text, 4, '-');
  const int mo = read_int(text, 5, 2);
  expect(text, 7, '-');
  const int d = read_int(text, 8, 2);
  expect(text, 10, 'T');
  const int h = read_int(text, 11, 2);
  expect(text, 13, ':');
  const int mi = read_int(text, 14, 2);
  expect(text, 16, ':');
  const int s = read_int(text, 17, 2);
  std::size_t pos = 19;
  int millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) {
      throw Error(ErrorCode::schema_violation,
                  "malformed timestamp: '" + std::string(text) + "'");
    }
    for (; digits < 3; ++digits) millis *= 10;
  }
  const std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "z" && zone != "+00:00" && zone != "-00:00") {
    throw Error(ErrorCode::schema_violation,
                "timestamp must be UTC: '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw Error(ErrorCode::schema_violation,
                "timestamp out of range: '" + std::string(text) + "'");
  }
  return Instant{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} +
                 seconds{s} + milliseconds{millis}};
}

std::chrono::sys_days day_of(Instant t) {
  return std::chrono::floor<std::chrono::days>(t);
}

std::string format_rfc3339(Instant t) {
  using namespace std::chrono;
  const sys_days day = day_of(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[40];
  const long long ms = hms.subseconds().count();
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()), ms);
  }
  return buf;
}

std::string format_date(Instant t) {
  return format_rfc3339(Instant{day_of(t)}).substr(0, 10);
}

std::string format_clock(Instant t) {
  return format_rfc3339(t).substr(11, 5);
}

}  // namespace confassist

#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace confassist {

using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Instant()>;

Instant system_now();

// Parses RFC 3339 timestamps in UTC ("2022-04-10T09:00:00Z"; a zero offset
// "+00:00" and fractional seconds are accepted). Throws Error on anything else.
Instant parse_rfc3339(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" only when milliseconds are set.
std::string format_rfc3339(Instant t);

// "YYYY-MM-DD" of the UTC calendar day containing t.
std::string format_date(Instant t);

// "HH:MM" in UTC.
std::string format_clock(Instant t);

std::chrono::sys_days day_of(Instant t);

}  // namespace confassist

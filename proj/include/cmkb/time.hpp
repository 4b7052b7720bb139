#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace cmkb {

using Timestamp = std::chrono::sys_seconds;
using Clock = std::function<Timestamp()>;

Timestamp now_utc();
Clock system_clock();

// Always emits "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

// Accepts RFC 3339 date-times with a "Z" or "+hh:mm" offset; fractional
// seconds are truncated. Throws SchemaError on anything else.
Timestamp parse_rfc3339(std::string_view text);

// Calendar date "YYYY-MM-DD".
bool is_iso_date(std::string_view text);

}  // namespace cmkb

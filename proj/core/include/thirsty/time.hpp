#pragma once

#include <cstdint>
#include <string>

namespace thirsty {

/// Seconds since the Unix epoch, UTC. All timestamps in the library are
/// carried in this form; calendar math happens only at the edges.
using UnixSeconds = std::int64_t;

/// Parse a strict ISO 8601 UTC timestamp of the form "YYYY-MM-DDTHH:MM:SSZ".
/// Anything else (offsets, fractional seconds, missing Z, impossible dates)
/// throws ValidationError.
UnixSeconds parse_utc(const std::string& text);

/// Format as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(UnixSeconds t);

/// Year and month of a UTC instant, for calendar-month grouping.
struct YearMonth {
  int year = 0;
  unsigned month = 0; // 1..12

  auto operator<=>(const YearMonth&) const = default;
};

YearMonth year_month_of(UnixSeconds t);

} // namespace thirsty

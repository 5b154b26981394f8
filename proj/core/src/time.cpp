#include "thirsty/time.hpp"

#include "thirsty/errors.hpp"

#include <chrono>
#include <cstdio>

namespace thirsty {

namespace {

using days_t = std::chrono::sys_days;

} // namespace

UnixSeconds parse_utc(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char z = 0, tail = 0;
  // The trailing %c pair rejects any characters after the Z.
  int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c",
                      &y, &mo, &d, &h, &mi, &s, &z, &tail);
  if (n != 7 || z != 'Z' || text.size() != 20)
    throw ValidationError("timestamp not of form YYYY-MM-DDTHH:MM:SSZ: '" + text + "'");

  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(mo)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok())
    throw ValidationError("impossible calendar date: '" + text + "'");
  if (h > 23 || mi > 59 || s > 59)
    throw ValidationError("time of day out of range: '" + text + "'");

  auto day_start = days_t{ymd}.time_since_epoch();
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(day_start).count();
  return secs + h * 3600 + mi * 60 + s;
}

std::string format_utc(UnixSeconds t) {
  // Floor toward negative infinity so pre-1970 instants land on the right day.
  std::int64_t day = t / 86400;
  std::int64_t sod = t % 86400;
  if (sod < 0) {
    day -= 1;
    sod += 86400;
  }
  auto ymd = std::chrono::year_month_day{
      days_t{std::chrono::days{day}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod % 3600) / 60),
                static_cast<long long>(sod % 60));
  return buf;
}

YearMonth year_month_of(UnixSeconds t) {
  std::int64_t day = t / 86400;
  if (t % 86400 < 0) day -= 1;
  auto ymd = std::chrono::year_month_day{days_t{std::chrono::days{day}}};
  return YearMonth{static_cast<int>(ymd.year()),
                   static_cast<unsigned>(ymd.month())};
}

} // namespace thirsty

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fmros {

// All observation timestamps are UTC seconds since the Unix epoch. A plain
// integer keeps parsing, arithmetic and file round-trips exact; the civil
// calendar helpers below follow Howard Hinnant's algorithms.
using UtcSeconds = std::int64_t;

inline constexpr UtcSeconds kSecondsPerHour = 3600;
inline constexpr UtcSeconds kSecondsPerDay = 86400;

namespace timeutil {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
constexpr std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  int year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr UtcSeconds from_civil(int y, unsigned m, unsigned d, int hh = 0, int mm = 0, int ss = 0) {
  return days_from_civil(y, static_cast<int>(m), static_cast<int>(d)) * kSecondsPerDay +
         hh * 3600 + mm * 60 + ss;
}

}  // namespace timeutil

// Hour of day, 0-23 UTC.
constexpr int hour_of_day(UtcSeconds t) {
  std::int64_t s = t % kSecondsPerDay;
  if (s < 0) s += kSecondsPerDay;
  return static_cast<int>(s / kSecondsPerHour);
}

// Day of year, 1-366.
inline int day_of_year(UtcSeconds t) {
  std::int64_t days = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) --days;
  const auto cd = timeutil::civil_from_days(days);
  return static_cast<int>(days - timeutil::days_from_civil(cd.year, 1, 1)) + 1;
}

// Accepts "YYYY-MM-DD[Thh:mm[:ss[.frac]]][Z]"; fractional seconds are dropped.
std::optional<UtcSeconds> parse_iso8601(std::string_view text);

// "YYYY-MM-DDThh:mm:ssZ"
std::string format_iso8601(UtcSeconds t);

}  // namespace fmros

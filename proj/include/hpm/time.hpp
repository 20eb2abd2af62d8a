#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace hpm {

// UTC instant at millisecond precision. Strict per-holon monotonicity keeps
// lifecycle ordering total, so ties are rejected by the model operations.
struct Instant {
  std::int64_t millis = 0;  // since 1970-01-01T00:00:00Z

  friend constexpr auto operator<=>(const Instant&, const Instant&) = default;
};

constexpr Instant operator+(Instant t, std::int64_t ms) { return Instant{t.millis + ms}; }
constexpr std::int64_t operator-(Instant a, Instant b) { return a.millis - b.millis; }

namespace detail {

// Civil-date conversions on the proleptic Gregorian calendar.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
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
  return {y + (m <= 2), m, d};
}

constexpr bool is_leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return m >= 1 && m <= 12 ? lengths[m - 1] : 0;
}

}  // namespace detail

// Parses a strict ISO-8601 UTC timestamp: YYYY-MM-DDTHH:MM:SS[.f{1,3}]Z.
inline std::optional<Instant> parse_instant(std::string_view s) {
  auto digits = [&](size_t pos, size_t n, std::int64_t& out) {
    if (pos + n > s.size()) return false;
    out = 0;
    for (size_t i = 0; i < n; ++i) {
      char c = s[pos + i];
      if (c < '0' || c > '9') return false;
      out = out * 10 + (c - '0');
    }
    return true;
  };
  std::int64_t y, mo, d, h, mi, se;
  if (!digits(0, 4, y)) return std::nullopt;
  if (s.size() < 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':')
    return std::nullopt;
  if (!digits(5, 2, mo) || !digits(8, 2, d) || !digits(11, 2, h) || !digits(14, 2, mi) ||
      !digits(17, 2, se))
    return std::nullopt;
  size_t pos = 19;
  std::int64_t frac = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    size_t n = pos - start;
    if (n < 1 || n > 3) return std::nullopt;
    for (size_t i = start; i < pos; ++i) frac = frac * 10 + (s[i] - '0');
    for (size_t i = n; i < 3; ++i) frac *= 10;
  }
  if (pos + 1 != s.size() || s[pos] != 'Z') return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 ||
      d > detail::days_in_month(y, static_cast<unsigned>(mo)) || h > 23 || mi > 59 || se > 59)
    return std::nullopt;
  std::int64_t days = detail::days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return Instant{((days * 24 + h) * 60 + mi) * 60000 + se * 1000 + frac};
}

// Canonical form: fractional part emitted only when nonzero, always 3 digits.
inline std::string format_instant(Instant t) {
  std::int64_t ms = t.millis;
  std::int64_t days = ms / 86400000;
  std::int64_t rem = ms % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --days;
  }
  auto cd = detail::civil_from_days(days);
  int h = static_cast<int>(rem / 3600000);
  int mi = static_cast<int>(rem / 60000 % 60);
  int se = static_cast<int>(rem / 1000 % 60);
  int frac = static_cast<int>(rem % 1000);
  char buf[40];
  if (frac != 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<long long>(cd.year), cd.month, cd.day, h, mi, se, frac);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<long long>(cd.year), cd.month, cd.day, h, mi, se);
  }
  return buf;
}

// ISO-8601 duration for a non-negative millisecond span, e.g. PT30M, PT0.5S.
// Zero components are omitted; a zero span is PT0S.
inline std::string format_duration(std::int64_t ms) {
  if (ms < 0) return "-" + format_duration(-ms);
  std::int64_t hours = ms / 3600000;
  std::int64_t minutes = ms / 60000 % 60;
  std::int64_t seconds = ms / 1000 % 60;
  std::int64_t frac = ms % 1000;
  std::string out = "PT";
  if (hours) out += std::to_string(hours) + "H";
  if (minutes) out += std::to_string(minutes) + "M";
  if (seconds || frac || out.size() == 2) {
    out += std::to_string(seconds);
    if (frac) {
      char buf[8];
      std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
      std::string f = buf;
      while (f.back() == '0') f.pop_back();
      out += f;
    }
    out += "S";
  }
  return out;
}

}  // namespace hpm

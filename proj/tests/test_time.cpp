#include <catch2/catch_amalgamated.hpp>

#include "hpm/time.hpp"

using namespace hpm;

TEST_CASE("instants parse and format as ISO-8601 UTC") {
  auto t = parse_instant("2024-03-01T08:15:30Z");
  REQUIRE(t.has_value());
  CHECK(format_instant(*t) == "2024-03-01T08:15:30Z");

  auto frac = parse_instant("2024-03-01T08:15:30.250Z");
  REQUIRE(frac.has_value());
  CHECK(frac->millis == t->millis + 250);
  CHECK(format_instant(*frac) == "2024-03-01T08:15:30.250Z");

  CHECK(parse_instant("1970-01-01T00:00:00Z")->millis == 0);
}

TEST_CASE("sub-second fractions accept one to three digits") {
  CHECK(parse_instant("2024-01-01T00:00:00.5Z")->millis % 1000 == 500);
  CHECK(parse_instant("2024-01-01T00:00:00.05Z")->millis % 1000 == 50);
  CHECK(parse_instant("2024-01-01T00:00:00.005Z")->millis % 1000 == 5);
  CHECK_FALSE(parse_instant("2024-01-01T00:00:00.0005Z").has_value());
}

TEST_CASE("malformed instants are rejected") {
  CHECK_FALSE(parse_instant("").has_value());
  CHECK_FALSE(parse_instant("2024-03-01").has_value());
  CHECK_FALSE(parse_instant("2024-03-01T08:15:30").has_value());        // no zone
  CHECK_FALSE(parse_instant("2024-03-01T08:15:30+01:00").has_value());  // non-UTC
  CHECK_FALSE(parse_instant("2024-13-01T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2024-02-30T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2024-03-01T24:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2024-03-01T08:15:61Z").has_value());
  CHECK_FALSE(parse_instant("2024-03-01T08:15:30Zx").has_value());
}

TEST_CASE("leap years follow the Gregorian rule") {
  CHECK(parse_instant("2024-02-29T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("2023-02-29T00:00:00Z").has_value());
  CHECK_FALSE(parse_instant("1900-02-29T00:00:00Z").has_value());  // century, not /400
  CHECK(parse_instant("2000-02-29T00:00:00Z").has_value());
}

TEST_CASE("format and parse are mutually inverse across a date sweep") {
  // Oracle: stepping by a prime number of seconds crosses month, year, and
  // leap boundaries; each formatted instant must parse back to itself.
  Instant t = *parse_instant("1999-12-28T00:00:00Z");
  Instant end = *parse_instant("2001-01-05T00:00:00Z");
  std::int64_t step_ms = 86'399'000;  // just under a day, prime seconds
  for (; t < end; t = t + step_ms) {
    auto back = parse_instant(format_instant(t));
    REQUIRE(back.has_value());
    CHECK(back->millis == t.millis);
  }
}

TEST_CASE("durations format in ISO-8601 with zero components omitted") {
  CHECK(format_duration(30 * 60'000) == "PT30M");
  CHECK(format_duration(0) == "PT0S");
  CHECK(format_duration(90 * 60'000) == "PT1H30M");
  CHECK(format_duration(3600'000 * 26 + 5'000) == "PT26H5S");
  CHECK(format_duration(50) == "PT0.05S");
  CHECK(format_duration(61'500) == "PT1M1.5S");
}

TEST_CASE("instant arithmetic and ordering") {
  Instant a = *parse_instant("2024-03-01T08:00:00Z");
  Instant b = a + 60'000;
  CHECK(b - a == 60'000);
  CHECK(a < b);
  CHECK(a == *parse_instant("2024-03-01T08:00:00.000Z"));
}

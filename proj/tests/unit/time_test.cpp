#include <gtest/gtest.h>

#include <random>

#include "vesa/time.hpp"

namespace vesa {
namespace {

using namespace std::chrono;

TEST(Timestamp, ParsesZuluWithAndWithoutFraction) {
  auto a = parse_timestamp("1999-08-01T23:00:00Z");
  auto b = parse_timestamp("1999-08-01T23:00:00.000Z");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(*a, Instant{sys_days{year{1999} / August / 1} + hours{23}});
}

TEST(Timestamp, NumericOffsetIsNormalizedToUtc) {
  auto t = parse_timestamp("2023-11-13T06:33:47+00:00");
  auto shifted = parse_timestamp("2023-11-13T08:33:47+02:00");
  auto west = parse_timestamp("2023-11-13T01:33:47-05:00");
  ASSERT_TRUE(t && shifted && west);
  EXPECT_EQ(*t, *shifted);
  EXPECT_EQ(*t, *west);
}

TEST(Timestamp, DateOnlyIsMidnight) {
  EXPECT_EQ(parse_timestamp("2007-06-15"), Instant{sys_days{year{2007} / June / 15}});
}

TEST(Timestamp, RejectsMalformed) {
  for (const char* bad : {"", "1999", "1999-13-01T00:00:00Z", "1999-02-30T00:00:00Z", "1999-01-01T24:00:00Z",
                          "1999-01-01T00:00:00", "1999-01-01T00:00:00.Z", "1999-01-01T00:00:00Zjunk",
                          "1999-01-01T00:00:00+0100"}) {
    EXPECT_FALSE(parse_timestamp(bad)) << bad;
  }
}

TEST(Timestamp, FormatIsCanonicalUtc) {
  EXPECT_EQ(format_timestamp(*parse_timestamp("1999-07-31T23:00:00Z")), "1999-07-31T23:00:00Z");
  EXPECT_EQ(format_timestamp(*parse_timestamp("1999-07-31T23:00:00.25+01:00")), "1999-07-31T22:00:00.250000Z");
}

// Any accepted timestamp survives parse -> format -> parse as the same instant.
TEST(Timestamp, RoundTripPreservesInstant) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> yr(1, 9998), mo(1, 12), dy(1, 28), hr(0, 23), mi(0, 59), se(0, 59);
  std::uniform_int_distribution<int> frac(0, 999999), off(-14 * 60, 14 * 60), style(0, 3);
  for (int i = 0; i < 2000; ++i) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", yr(rng), mo(rng), dy(rng), hr(rng),
                          mi(rng), se(rng));
    std::string text(buf, n);
    int s = style(rng);
    if (s & 1) {
      std::snprintf(buf, sizeof buf, ".%06d", frac(rng));
      text += buf;
    }
    if (s & 2) {
      int o = off(rng);
      std::snprintf(buf, sizeof buf, "%c%02d:%02d", o < 0 ? '-' : '+', std::abs(o) / 60, std::abs(o) % 60);
      text += buf;
    } else {
      text += 'Z';
    }
    auto parsed = parse_timestamp(text);
    ASSERT_TRUE(parsed) << text;
    auto again = parse_timestamp(format_timestamp(*parsed));
    ASSERT_TRUE(again) << text;
    EXPECT_EQ(*parsed, *again) << text;
  }
}

}  // namespace
}  // namespace vesa

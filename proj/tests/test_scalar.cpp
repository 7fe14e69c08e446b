#include "cgjlp/scalar.hpp"

#include <gtest/gtest.h>

using namespace cgjlp;

TEST(ParseRational, AcceptedForms) {
  EXPECT_EQ(parse_rational("12"), 12);
  EXPECT_EQ(parse_rational("-7"), -7);
  EXPECT_EQ(parse_rational("+3"), 3);
  EXPECT_EQ(parse_rational("0.83"), Rational(83) / 100);
  EXPECT_EQ(parse_rational("-.5"), Rational(-1) / 2);
  EXPECT_EQ(parse_rational("2."), 2);
  EXPECT_EQ(parse_rational("1.5e-3"), Rational(3) / 2000);
  EXPECT_EQ(parse_rational("1E+6"), 1000000);
  EXPECT_EQ(parse_rational("1/3"), Rational(1) / 3);
  EXPECT_EQ(parse_rational("-2/6"), Rational(-1) / 3);
  EXPECT_EQ(parse_rational("0.083"), Rational(83) / 1000);
  EXPECT_EQ(parse_rational("0010"), 10);
  EXPECT_EQ(parse_rational("0"), 0);
}

TEST(ParseRational, RejectedForms) {
  for (const char* bad : {"", "-", ".", "abc", "1.2.3", "1/0", "1/-2", "1e", "e5", "1/2/3", "0x10", "1 2", "inf"})
    EXPECT_THROW(parse_rational(bad), NumberFormatError) << '"' << bad << '"';
}

TEST(ShortestDecimal, RecoversLiteral) {
  EXPECT_EQ(shortest_decimal(0.83), "0.83");
  EXPECT_EQ(shortest_decimal(1e-9), "1e-09");
  EXPECT_EQ(parse_rational(shortest_decimal(0.1)), Rational(1) / 10);
}

TEST(Format, FixedFourDecimals) {
  EXPECT_EQ(format_fixed(1.0 / 12.0), "0.0833");
  EXPECT_EQ(format_fixed(-0.0), "0.0000");
  EXPECT_EQ(format_fixed(-0.00004), "0.0000");
  EXPECT_EQ(format_fixed(-0.00005), "-0.0001");
  EXPECT_EQ(format_fixed(Rational(-5) / 12), "-0.4167");
  EXPECT_EQ(format_full(Rational(16) / 19), "16/19");
  EXPECT_EQ(format_full(0.1), "0.10000000000000001");
}

TEST(ToleranceTest, SignsAroundEpsilon) {
  Tolerance<double> t{1e-9};
  EXPECT_TRUE(t.is_zero(5e-10));
  EXPECT_EQ(t.sign(2e-9), 1);
  EXPECT_EQ(t.sign(-2e-9), -1);
  EXPECT_EQ(t.sign(-5e-10), 0);
  Tolerance<Rational> exact{};
  EXPECT_EQ(exact.sign(Rational(1, 1000000000)), 1);
  EXPECT_EQ(make_epsilon<Rational>(1e-3), Rational(1) / 1000);
}

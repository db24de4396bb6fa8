#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mva/error.hpp"
#include "mva/numfmt.hpp"

using mva::format_number;
using mva::parse_number;

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "-0");
}

TEST(FormatNumber, NoExponentDownToOneTenThousandth) {
    EXPECT_EQ(format_number(1e-4), "0.0001");
    EXPECT_EQ(format_number(2.5e-4), "0.00025");
    EXPECT_EQ(format_number(1e-5), "1e-05");
    EXPECT_EQ(format_number(123456789.0), "123456789");
}

TEST(FormatNumber, RandomValuesRoundTrip) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-30, 30);
    for (int i = 0; i < 20000; ++i) {
        const double v = std::ldexp(mant(rng), ex(rng));
        const std::string s = format_number(v);
        EXPECT_EQ(parse_number(s), v) << s;
        EXPECT_EQ(format_number(parse_number(s)), s);
    }
}

TEST(ParseNumber, RejectsTrailingText) {
    EXPECT_THROW(parse_number("1.5x"), mva::Error);
    EXPECT_THROW(parse_number(""), mva::Error);
    EXPECT_EQ(parse_number("+3"), 3.0);
    EXPECT_EQ(parse_number("2e3"), 2000.0);
}

#include <gtest/gtest.h>

#include "netform/rational.hpp"

using netform::Rational;

TEST(Rational, NormalizesSignAndGcd) {
    Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(0, 5), Rational(0));
}

TEST(Rational, ParsesFractionsAndDecimals) {
    EXPECT_EQ(Rational::parse("3/2"), Rational(3, 2));
    EXPECT_EQ(Rational::parse("1.5"), Rational(3, 2));
    EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
    EXPECT_EQ(Rational::parse("-2"), Rational(-2));
    EXPECT_EQ(Rational::parse(" 10 "), Rational(10));
    EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1/0"), std::domain_error);
}

TEST(Rational, ArithmeticIsExact) {
    const Rational tenth(1, 10);
    Rational sum(0);
    for (int k = 0; k < 10; ++k) sum += tenth;
    EXPECT_EQ(sum, Rational(1));
    EXPECT_EQ(Rational(10) / (Rational(1) + tenth), Rational(100, 11));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_EQ((Rational(2, 3) * Rational(3, 4)).str(), "1/2");
}

TEST(Rational, OverflowThrows) {
    Rational big(INT64_MAX);
    EXPECT_THROW(big * Rational(2), std::overflow_error);
}

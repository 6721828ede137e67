#include <gtest/gtest.h>

#include "cmtheta/rational.hpp"

using cmtheta::GaussianRational;
using cmtheta::Rational;

TEST(Rational, NormalizesSignAndGcd) {
  Rational a(6, -4);
  EXPECT_EQ(a.num(), -3);
  EXPECT_EQ(a.den(), 2);
  EXPECT_EQ(Rational(0, 5), Rational(0));
}

TEST(Rational, Arithmetic) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_TRUE(b < a);
  EXPECT_THROW(a / Rational(0), std::domain_error);
}

TEST(Rational, FloorAndFractionalPart) {
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).frac(), Rational(1, 2));
  EXPECT_EQ(Rational(7, 2).frac(), Rational(1, 2));
  EXPECT_EQ(Rational(3).frac(), Rational(0));
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("-0.25"), Rational(-1, 4));
  EXPECT_EQ(Rational::parse("5"), Rational(5));
  for (Rational r : {Rational(-5, 12), Rational(7), Rational(0)}) EXPECT_EQ(Rational::parse(r.str()), r);
  EXPECT_ANY_THROW(Rational::parse("abc"));
  EXPECT_ANY_THROW(Rational::parse("1/0"));
}

TEST(GaussianRational, FieldOperations) {
  GaussianRational z(Rational(1), Rational(2)), w(Rational(3), Rational(-1));
  EXPECT_EQ(z * w, GaussianRational(Rational(5), Rational(5)));
  EXPECT_EQ((z * w) / w, z);
  EXPECT_EQ(z.conj(), GaussianRational(Rational(1), Rational(-2)));
  EXPECT_EQ(z.norm(), Rational(5));
  EXPECT_EQ(GaussianRational::i() * GaussianRational::i(), GaussianRational(-1));
}

TEST(GaussianRational, StringRoundTrip) {
  for (GaussianRational z : {GaussianRational(Rational(-1), Rational(1)), GaussianRational(Rational(1, 2), Rational(-3, 4)),
                             GaussianRational(0), GaussianRational(Rational(0), Rational(2))})
    EXPECT_EQ(GaussianRational::parse(z.str()), z) << z.str();
}

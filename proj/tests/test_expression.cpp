#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "warplab/expression.hpp"

using warplab::Expression;
using warplab::ExpressionError;

TEST(Expression, Precedence) {
    EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0, 0), 7.0);
    EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2) * 3")(0, 0), 9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2 ^ 3 ^ 2")(0, 0), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("-2 ^ 2")(0, 0), -4.0);
    EXPECT_DOUBLE_EQ(Expression::parse("8 / 4 / 2")(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2 - 3 - 4")(0, 0), -5.0);
}

TEST(Expression, VariablesAndFunctions) {
    const auto e = Expression::parse("r * sinh(r) + cos(theta) + exp(log(2)) + t");
    const double r = 1.3, th = 0.4;
    EXPECT_NEAR(e(r, th), r * std::sinh(r) + std::cos(th) + 2.0 + th, 1e-15);
    EXPECT_TRUE(e.depends_on_r());
    EXPECT_TRUE(e.depends_on_theta());
    EXPECT_NEAR(Expression::parse("e^2 + pi")(0, 0), std::exp(2.0) + std::numbers::pi, 1e-14);
    EXPECT_NEAR(Expression::parse("1.5e-3 * 2")(0, 0), 3e-3, 1e-18);
}

TEST(Expression, Constants) {
    EXPECT_DOUBLE_EQ(warplab::evaluate_constant("2/3"), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(warplab::evaluate_constant("exp(20)"), std::exp(20.0));
    EXPECT_THROW(warplab::evaluate_constant("r + 1"), ExpressionError);
}

TEST(Expression, Errors) {
    EXPECT_THROW(Expression::parse("1 +"), ExpressionError);
    EXPECT_THROW(Expression::parse("foo(1)"), ExpressionError);
    EXPECT_THROW(Expression::parse("x"), ExpressionError);
    EXPECT_THROW(Expression::parse("(1"), ExpressionError);
    EXPECT_THROW(Expression::parse("1 2"), ExpressionError);
}

#include "unorm/formal_product.hpp"

#include <gtest/gtest.h>

using namespace unorm;

namespace {

const PrimeId x1{0}, x2{1}, x3{2};

FormalProduct fp(std::vector<int> e) { return FormalProduct::from_exponents(e); }

}  // namespace

TEST(FormalProduct, UnitAndDegree) {
    FormalProduct one;
    EXPECT_TRUE(one.is_unit());
    EXPECT_EQ(one.degree(), 0);
    EXPECT_EQ(fp({2, 1}).degree(), 3);
    EXPECT_EQ(fp({2, 1}).num_primes(), 2);
    EXPECT_EQ(fp({0, 0, 3}), FormalProduct::prime(x3, 3));
}

TEST(FormalProduct, MultiplyAndDivide) {
    const auto z = fp({2, 1});
    EXPECT_EQ(z * FormalProduct::prime(x3), fp({2, 1, 1}));
    EXPECT_EQ(z / FormalProduct::prime(x1), fp({1, 1}));
    EXPECT_THROW(z / FormalProduct::prime(x3), std::invalid_argument);
    EXPECT_TRUE(fp({1, 1}).divides(z));
    EXPECT_FALSE(fp({3}).divides(z));
    EXPECT_THROW(fp({-1}), std::invalid_argument);
}

TEST(FormalProduct, SupportAndStalks) {
    const auto z = fp({2, 1, 3});
    EXPECT_EQ(support(z), fp({1, 1, 1}));
    EXPECT_EQ(stalk(z, fp({1, 0, 1})), fp({2, 0, 3}));
    EXPECT_THROW(stalk(z, fp({2})), std::invalid_argument);
    EXPECT_EQ(stalks(z).size(), 8U);
    EXPECT_EQ(stalks(FormalProduct{}).size(), 1U);
}

TEST(FormalProduct, SquarefreeDivisorsAreSortedAndComplete) {
    const auto ds = squarefree_divisors(fp({1, 1, 1}));
    ASSERT_EQ(ds.size(), 8U);
    EXPECT_TRUE(ds.front().is_unit());
    EXPECT_TRUE(std::is_sorted(ds.begin(), ds.end()));
}

TEST(FormalProduct, OmegaCountsSmallerPrimes) {
    const auto y = fp({1, 1, 1});
    EXPECT_EQ(omega(x1, y), 1);
    EXPECT_EQ(omega(x2, y), -1);
    EXPECT_EQ(omega(x3, y), 1);
    EXPECT_EQ(omega(x2, fp({0, 1, 1})), 1);
    EXPECT_EQ(omega(x1, fp({0, 1})), 0);
    EXPECT_THROW(omega(x1, fp({2})), std::invalid_argument);
}

TEST(FormalProduct, KoszulSignsSquareToZero) {
    // sum over ordered pairs x, x' of omega(x, y) omega(x', y/x) vanishes
    const auto y = fp({1, 1, 1});
    for (PrimeId a : y.primes())
        for (PrimeId b : y.primes()) {
            if (a == b) continue;
            const int s1 = omega(a, y) * omega(b, y / FormalProduct::prime(a));
            const int s2 = omega(b, y) * omega(a, y / FormalProduct::prime(b));
            EXPECT_EQ(s1 + s2, 0);
        }
}

TEST(FormalProduct, ExponentBelow) {
    const auto w = fp({2, 1, 3});
    EXPECT_EQ(exponent_below(x1, w), 0);
    EXPECT_EQ(exponent_below(x2, w), 2);
    EXPECT_EQ(exponent_below(x3, w), 3);
    EXPECT_EQ(sign_of(3), -1);
}

TEST(FormalProduct, ProductsOfDegree) {
    const auto s = fp({1, 1});
    EXPECT_EQ(products_of_degree(s, 0).size(), 1U);
    EXPECT_EQ(products_of_degree(s, 3).size(), 4U);
    EXPECT_EQ(products_of_degree(fp({1, 1, 1}), 2).size(), 6U);
    EXPECT_TRUE(products_of_degree(s, -1).empty());
    for (const auto& w : products_of_degree(s, 3)) EXPECT_EQ(w.degree(), 3);
}

TEST(FormalProduct, OrderIsLexicographicOnExponents) {
    EXPECT_LT(fp({0, 1}), fp({1}));
    EXPECT_LT(fp({1}), fp({1, 1}));
    EXPECT_LT(fp({1, 2}), fp({2}));
}

#include "unorm/config.hpp"
#include "unorm/norm_distribution.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace unorm;

namespace {

const PrimeId x1{0}, x2{1};

FormalProduct z_of(std::vector<int> e) { return FormalProduct::from_exponents(e); }

ASymbol sym(FormalProduct stalk, std::vector<long> residues) { return {GroupElement{std::move(stalk), std::move(residues)}}; }

}  // namespace

TEST(NormDistribution, SymbolCounts) {
    const auto s = preset("cyclotomic:15");
    EXPECT_EQ(enumerate_A(s, z_of({1, 1})).size(), 15U);
    EXPECT_EQ(enumerate_A(s, FormalProduct{}).size(), 1U);
    EXPECT_EQ(enumerate_A(s, z_of({1})).size(), 3U);
    EXPECT_EQ(basis_U(s, z_of({1, 1})).size(), 8U);
}

TEST(NormDistribution, LambdaExamples) {
    const auto trivial = preset("trivial:2x3");
    const auto one = ASymbol::top(FormalProduct{});
    const auto v = lambda<Int>(trivial, z_of({1, 1}), x1, one);
    EXPECT_EQ(v.coefficient(one), 1);
    EXPECT_EQ(v.coefficient(sym(z_of({1}), {0})), -1);
    EXPECT_EQ(v.coefficient(sym(z_of({1}), {1})), -1);
    EXPECT_EQ(v.size(), 3U);

    const auto e1 = preset("cyclotomic:15");
    const auto w = lambda<Int>(e1, z_of({1, 1}), x2, one);
    EXPECT_EQ(w.coefficient(one), 0);
    EXPECT_EQ(w.size(), 4U);
    for (const auto& [a, c] : w) EXPECT_EQ(c, -1);
    EXPECT_THROW(lambda<Int>(e1, z_of({1, 1}), x2, sym(z_of({0, 1}), {0})), std::invalid_argument);
}

TEST(NormDistribution, RelationMatrixRank) {
    const auto e1 = preset("cyclotomic:15");
    const auto sd = smith_diagonal(relation_matrix(e1, z_of({1, 1})));
    EXPECT_EQ(sd.rank, 7U);
    EXPECT_TRUE(sd.torsion.empty());
    EXPECT_EQ(relation_matrix(e1, FormalProduct{}).cols(), 0U);
}

TEST(NormDistribution, ReduceFixesB0AndKillsRelations) {
    const auto e1 = preset("cyclotomic:15");
    const auto z = z_of({1, 1});
    Reducer<Int> red(e1);
    for (const auto& b : basis_U(e1, z)) EXPECT_EQ(red.reduce(b), AVector<Int>(b));
    for (const auto& [x, a] : relation_generators(e1, z)) EXPECT_TRUE(red.reduce(lambda<Int>(e1, z, x, a)).empty());
}

TEST(NormDistribution, ReduceAgreesWithOracle) {
    for (const auto& [name, target] : std::vector<std::pair<std::string, std::string>>{
             {"cyclotomic:15", "3*5"}, {"cyclotomic:45", "3^2*5"}, {"predistribution:35", "5*7"},
             {"trivial:2x3", "x1*x2"}, {"cyclotomic:105", "3*5*7"}}) {
        const auto s = preset(name);
        const auto z = parse_z(s, target);
        const QuotientOracle oracle(s, z);
        EXPECT_TRUE(oracle.is_free()) << name;
        EXPECT_EQ(oracle.quotient_rank(), static_cast<std::size_t>(group_order(s, z))) << name;
        Reducer<Int> red(s);
        for (const auto& a : enumerate_A(s, z)) EXPECT_EQ(red.reduce(a), oracle.reduce(AVector<Int>(a))) << name;
    }
}

TEST(NormDistribution, ReduceIsEquivariant) {
    const auto s = preset("cyclotomic:45");
    const auto z = z_of({2, 1});
    Reducer<Int> red(s);
    for (const auto& g : group_elements(s, z))
        for (const auto& a : enumerate_A(s, z)) {
            AVector<Int> moved;
            for (const auto& [b, c] : red.reduce(a)) moved.add(act(s, g, b), c);
            EXPECT_EQ(red.reduce(act(s, g, a)), red.reduce(moved));
        }
}

TEST(NormDistribution, CorestrictionExamples) {
    const auto s = preset("cyclotomic:45");
    const auto z = z_of({2, 1});
    // the identity for w = z
    const auto id = corestriction_matrix(s, z, z);
    EXPECT_EQ(id, SparseMatrix<Int>::identity(basis_U(s, z).size()));
    // x -> x^2 in the tower 2 | 6: fiber sums, injective
    const auto up = corestriction_matrix(s, z_of({1}), z_of({2}));
    EXPECT_EQ(up.cols(), 2U);
    EXPECT_EQ(smith_diagonal(up).rank, 2U);
    const auto fiber = corestriction(s, z_of({1}), z_of({2}), sym(z_of({1}), {1}));
    EXPECT_EQ(fiber.size(), 3U);
    for (const auto& [a, c] : fiber) EXPECT_EQ(a.g.residues[0] % 2, 1);
}

TEST(NormDistribution, ConnectingMapRoundTrip) {
    const auto s1 = preset("cyclotomic:15");
    auto s2 = s1;
    s2.set_poly(x1, {1});
    s2.set_poly(x2, {0, -1});
    const auto z = z_of({1, 1});
    for (const auto& a : enumerate_A(s1, z)) {
        EXPECT_EQ(connecting_map(s1, s1, a), AVector<Rational>(a, Rational(1)));
        EXPECT_EQ(connecting_map(s2, s1, connecting_map(s1, s2, a)), AVector<Rational>(a, Rational(1)));
    }
    EXPECT_THROW(connecting_map(s1, preset("cyclotomic:35"), ASymbol::top(FormalProduct{})), ConfigError);
}

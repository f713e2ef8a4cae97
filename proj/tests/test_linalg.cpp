#include "unorm/graded_complex.hpp"
#include "unorm/homology.hpp"
#include "unorm/lattice.hpp"
#include "unorm/smith.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace unorm;

namespace {

DenseMatrix<Int> dense(std::vector<std::vector<long>> rows) {
    DenseMatrix<Int> a;
    for (const auto& r : rows) a.emplace_back(r.begin(), r.end());
    return a;
}

SparseMatrix<Int> sparse(std::vector<std::vector<long>> rows) { return SparseMatrix<Int>::from_dense(dense(rows)); }

SparseMatrix<Int> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<int> v(-3, 3), keep(0, 2);
    SparseMatrix<Int> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (keep(rng) == 0) m.add(i, j, v(rng));
    return m;
}

}  // namespace

TEST(Integer, InvariantFactors) {
    EXPECT_EQ(invariant_factors({Int(2), Int(3)}), std::vector<Int>{6});
    EXPECT_EQ(invariant_factors({Int(4), Int(2), Int(1)}), (std::vector<Int>{2, 4}));
    EXPECT_EQ(invariant_factors({Int(6), Int(4)}), (std::vector<Int>{2, 12}));
}

TEST(Smith, DenseFormWithTransforms) {
    const auto a = dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    const auto sf = smith_normal_form(a);
    EXPECT_EQ(sf.invariants, (std::vector<Int>{2, 6, 12}));
    EXPECT_EQ(lattice::multiply(lattice::multiply(sf.left, a, 3), sf.right, 3), sf.diagonal);
}

TEST(Smith, SparseDiagonalMatchesDense) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = random_matrix(rng, 3 + trial % 5, 2 + trial % 7);
        const auto sf = smith_normal_form(m.to_dense());
        const auto sd = smith_diagonal(m);
        EXPECT_EQ(sd.rank, sf.invariants.size());
        EXPECT_EQ(sd.torsion, invariant_factors(sf.invariants));
    }
}

TEST(Smith, RankOverFieldAndRationals) {
    const auto m = sparse({{2, 4}, {1, 2}});
    EXPECT_EQ(rank_over_field(m, 2), 1U);
    EXPECT_EQ(rank_over_field(sparse({{2, 0}, {0, 3}}), 2), 1U);
    EXPECT_EQ(rank_over_field(sparse({{2, 0}, {0, 3}}), 5), 2U);
    EXPECT_EQ(rational_rank(m), 1U);
    EXPECT_THROW(rank_over_field(m, 4), std::invalid_argument);
}

TEST(Lattice, KernelAndCoordinates) {
    const auto a = dense({{1, 2, 3}, {2, 4, 6}});
    const auto k = lattice::kernel_basis(a, 3);
    EXPECT_EQ(lattice::num_cols(k), 2U);
    EXPECT_TRUE(SparseMatrix<Int>::from_dense(lattice::multiply(a, k, 3)).is_zero());
    const auto basis = dense({{2, 0}, {0, 3}});
    const auto x = lattice::coordinates(basis, dense({{4}, {9}}), 2);
    EXPECT_EQ(x, dense({{2}, {3}}));
    EXPECT_THROW(lattice::coordinates(basis, dense({{1}, {0}}), 2), std::domain_error);
}

TEST(Homology, IntegralCyclicQuotient) {
    // Z --2--> Z: cokernel Z/2
    const auto d = sparse({{2}});
    const SparseMatrix<Int> out(0, 1);
    EXPECT_EQ(homology_at(d, out), (HomologyGroup{0, {2}}));
    EXPECT_EQ(homology_at(d, out, Ring::mod(2)), (HomologyGroup{1, {}}));
    EXPECT_EQ(homology_at(d, out, Ring::mod(4)), (HomologyGroup{0, {2}}));
    EXPECT_EQ(homology_at(d, out, Ring::mod(3)), HomologyGroup{});
}

TEST(Homology, CompositeModulusLatticeAgreesWithUct) {
    // cochains of Z/4 with trivial coefficients: 0, 4, 0, 4, ...
    const auto zero = sparse({{0}}), four = sparse({{4}});
    for (long m : {2L, 4L, 6L, 8L}) {
        const auto lat = homology_mod_lattice(zero, four, m);
        const auto uct = homology_mod_uct(smith_diagonal(zero), smith_diagonal(four), 1, m);
        EXPECT_EQ(lat, uct) << "M = " << m;
    }
}

TEST(Homology, NonComposableMapsAreRejected) {
    EXPECT_THROW(homology_at(sparse({{1}}), sparse({{1}})), DifferentialError);
    // composes to zero only mod 2
    EXPECT_NO_THROW(homology_at(sparse({{1}}), sparse({{2}}), Ring::mod(2)));
}

TEST(GradedComplex, AssembleRejectsWrongDegrees) {
    std::map<int, std::vector<int>> bases{{0, {0}}, {1, {1}}};
    auto wrong = [](int) { return LinearCombination<int, Int>(0); };
    EXPECT_THROW(assemble(bases, wrong, [](int k) { return k; }), DifferentialError);
    auto right = [](int k) { return k == 0 ? LinearCombination<int, Int>(1, 3) : LinearCombination<int, Int>(); };
    const auto c = assemble(bases, right, [](int k) { return k; });
    EXPECT_EQ(c.homology(1), (HomologyGroup{0, {3}}));
    EXPECT_EQ(c.homology(0), HomologyGroup{});
}

TEST(HomologyGroup, Describe) {
    EXPECT_EQ(describe(HomologyGroup{2, {2, 4}}), "Z^2 + Z/2 + Z/4");
    EXPECT_EQ(describe(HomologyGroup{3, {}}, 2), "Z/2^3");
    EXPECT_EQ(describe(HomologyGroup{}), "0");
}

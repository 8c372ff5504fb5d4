#include <gtest/gtest.h>

#include <set>

#include "hgsts/rng.hpp"
#include "hgsts/triple.hpp"

using namespace hgsts;

TEST(Binom, SmallValues) {
    EXPECT_EQ(binom(12, 3), 220u);
    EXPECT_EQ(binom(5, 0), 1u);
    EXPECT_EQ(binom(3, 4), 0u);
    EXPECT_EQ(binom(4, -1), 0u);
    EXPECT_DOUBLE_EQ(binom_real(10, 3), 120.0);
    EXPECT_NEAR(binom_real(20000, 3) / (20000.0 * 19999.0 * 19998.0 / 6.0), 1.0, 1e-9);
}

TEST(Triple, SortsOnConstruction) {
    const Triple t(5, 1, 3);
    EXPECT_EQ(t.a, 1);
    EXPECT_EQ(t.b, 3);
    EXPECT_EQ(t.c, 5);
    EXPECT_TRUE(t.contains(Pair{5, 1}));
    EXPECT_FALSE(t.contains(Pair{1, 2}));
    EXPECT_EQ(t.third(Pair{3, 5}), 1);
}

TEST(Triple, RankIsBijectionOnSmallRange) {
    const int n = 12;
    std::set<std::uint32_t> ranks;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                const Triple t(a, b, c);
                const auto r = triple_rank(t);
                EXPECT_EQ(triple_unrank(r), t);
                ranks.insert(r);
            }
    EXPECT_EQ(ranks.size(), binom(n, 3));
    EXPECT_EQ(*ranks.rbegin(), binom(n, 3) - 1);
}

TEST(TripleSystem, NormalizesAndRejectsOutOfRange) {
    TripleSystem s(6, {Triple(0, 1, 2), Triple(2, 1, 0), Triple(3, 4, 5)});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_THROW(TripleSystem(4, {Triple(1, 2, 4)}), InvalidArgument);
    EXPECT_FALSE(s.insert(Triple(0, 1, 2)));
    EXPECT_TRUE(s.insert(Triple(0, 3, 5)));
    EXPECT_TRUE(s.erase(Triple(0, 3, 5)));
    const std::vector<Vertex> w{0, 1, 2, 3};
    EXPECT_EQ(s.induced(w).size(), 1u);
}

TEST(TripleSystem, CompactedRelabelsPoints) {
    const auto s = from_digits(9, "258,268");
    const auto c = s.compacted();
    EXPECT_EQ(c.n(), 4);
    EXPECT_EQ(c, from_digits(4, "013,023"));
}

TEST(Rng, UniformIndexStaysInRangeAndCoversIt) {
    Rng rng(7);
    std::vector<int> hits(7, 0);
    for (int x = 0; x < 7000; ++x) {
        const auto v = uniform_index(rng, 7);
        ASSERT_LT(v, 7u);
        ++hits[v];
    }
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, StreamIsFixedBySeed) {
    Rng a(42);
    Rng b(42);
    for (int x = 0; x < 100; ++x) EXPECT_EQ(uniform_index(a, 1000), uniform_index(b, 1000));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_EQ(derive_seed(1, 3), derive_seed(1, 3));
}

TEST(Rng, UniformRealInUnitInterval) {
    Rng rng(3);
    double sum = 0;
    for (int x = 0; x < 10000; ++x) {
        const double u = uniform_real(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

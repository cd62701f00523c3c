#include <gtest/gtest.h>

#include <set>

#include "test_graphs.hpp"

namespace snmod {
namespace {

TEST(PartitionIterator, CountsAreBellNumbers) {
    const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147};
    for (std::size_t n = 1; n <= 9; ++n) {
        std::uint64_t count = 0;
        enumerate_partitions(n, [&](const std::vector<std::uint8_t>&) { ++count; });
        EXPECT_EQ(count, bell[n]) << "n=" << n;
    }
}

TEST(PartitionIterator, EachPartitionOnceAndCanonical) {
    std::set<std::vector<std::uint8_t>> seen;
    enumerate_partitions(6, [&](const std::vector<std::uint8_t>& labels) {
        EXPECT_EQ(labels[0], 0);
        std::uint8_t top = 0;
        for (std::size_t i = 1; i < labels.size(); ++i) {
            EXPECT_LE(labels[i], top + 1);
            top = std::max(top, labels[i]);
        }
        EXPECT_TRUE(seen.insert(labels).second);
    });
    EXPECT_EQ(seen.size(), 203u);
}

TEST(PartitionIterator, RejectsOutOfRangeSizes) {
    EXPECT_THROW(PartitionIterator(0), InvalidArgument);
    EXPECT_THROW(PartitionIterator(13), InvalidArgument);
    EXPECT_NO_THROW(PartitionIterator(12));
}

TEST(OracleBest, Triangle) {
    const auto r = oracle_best(testing::triangle(), Objective::ng());
    EXPECT_NEAR(r.value, 0.0, 1e-15);
    EXPECT_EQ(r.partition, Partition::whole(3));
    EXPECT_EQ(r.evaluated, 5u);
}

TEST(OracleBest, BridgedTriangles) {
    const auto r = oracle_best(testing::bridged_triangles(), Objective::ng());
    EXPECT_NEAR(r.value, 5.0 / 14.0, 1e-15);
    EXPECT_EQ(r.partition, testing::by_triangle());
}

TEST(OracleBest, ColocatedClustersUnderSn) {
    const auto r = oracle_best(testing::colocated_clusters(), Objective::sn({1.0}));
    EXPECT_NEAR(r.value, 5.0 / 14.0, 1e-15);
    EXPECT_EQ(r.partition, testing::by_triangle());
}

TEST(OracleBest, RejectsLargeGraphs) {
    const auto g = GeoGraph::from_edges(std::vector<GeoPoint>(13), {});
    EXPECT_THROW((void)oracle_best(g, Objective::ng()), InvalidArgument);
}

TEST(OracleBest, BoundsLouvain) {
    Rng rng(73);
    for (int s = 0; s < 15; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 8, .edge_prob = 0.35});
        for (const Objective obj : {Objective::ng(), Objective::sn({300.0})}) {
            const auto best = oracle_best(g, obj);
            EXPECT_GE(best.value, run_louvain(g, obj).score - 1e-12);
            EXPECT_GE(best.value, 0.0 - 1e-15);
        }
    }
}

}  // namespace
}  // namespace snmod

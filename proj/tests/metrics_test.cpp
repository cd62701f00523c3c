#include <gtest/gtest.h>

#include "test_graphs.hpp"

namespace snmod {
namespace {

using testing::bridged_triangles;
using testing::by_triangle;
using testing::colocated_clusters;

TEST(NgModularity, SingleCommunityIsZero) {
    const auto g = bridged_triangles();
    EXPECT_NEAR(ng_modularity(g, Partition::whole(6)), 0.0, 1e-15);
}

TEST(NgModularity, TriangleSingletons) {
    EXPECT_NEAR(ng_modularity(testing::triangle(), Partition::singletons(3)), -1.0 / 3.0, 1e-15);
}

TEST(NgModularity, BridgedTrianglesByTriangle) {
    EXPECT_NEAR(ng_modularity(bridged_triangles(), by_triangle()), 5.0 / 14.0, 1e-15);
}

TEST(NgModularity, SizeMismatchThrows) {
    EXPECT_THROW((void)ng_modularity(bridged_triangles(), Partition::singletons(5)), InvalidArgument);
}

TEST(SnModularity, ZeroDistanceEqualsNgExactly) {
    Rng rng(4);
    const auto g = bridged_triangles();
    for (double sigma : {0.001, 1.0, 300.0, 1e6})
        for (int s = 0; s < 20; ++s) {
            const auto p = testing::random_partition(rng, 6, 4);
            EXPECT_EQ(sn_modularity(g, p, {sigma}), ng_modularity(g, p));
        }
}

TEST(SnModularity, ColocatedClustersReduceToNg) {
    EXPECT_NEAR(sn_modularity(colocated_clusters(), by_triangle(), {1.0}), 5.0 / 14.0, 1e-15);
}

TEST(SnModularity, DispersionOfOneHalvesTheTerm) {
    // Triangle A symmetric about (0,0) on the equator so its centroid is (0,0) and
    // its farthest member sits exactly sigma away; triangle B co-located.
    const double delta = 0.5;
    const GeoPoint b{10, 10};
    const auto g = bridged_triangles({{0, -delta}, {0, 0}, {0, delta}, b, b, b});
    const double sigma = haversine_km({0, 0}, {0, delta});
    EXPECT_NEAR(sn_modularity(g, by_triangle(), {sigma, Aggregation::max}), (2.5 / 2 + 2.5) / 14, 1e-12);
    EXPECT_NEAR((2.5 / 2 + 2.5) / 14, 0.267857, 1e-6);

    // Same configuration in the plane: A at (0,-1),(0,0),(0,1), sigma 1.
    const auto planar = bridged_triangles({{0, -1}, {0, 0}, {0, 1}, b, b, b});
    EXPECT_NEAR(sn_modularity(planar, by_triangle(), {1.0, Aggregation::max, Metric::planar}), (2.5 / 2 + 2.5) / 14,
                1e-15);
    // agg = sum: dispersion 1 + 0 + 1 = 2.
    EXPECT_NEAR(sn_modularity(planar, by_triangle(), {1.0, Aggregation::sum, Metric::planar}), (2.5 / 3 + 2.5) / 14,
                1e-15);
}

TEST(SnModularity, RejectsNonPositiveSigma) {
    EXPECT_THROW((void)sn_modularity(bridged_triangles(), by_triangle(), {0.0}), InvalidArgument);
    EXPECT_THROW((void)sn_modularity(bridged_triangles(), by_triangle(), {-3.0}), InvalidArgument);
}

TEST(CommunityQuality, Examples) {
    const auto g = colocated_clusters();
    const std::vector<NodeId> single{4};
    EXPECT_NEAR(community_quality(g, single, {1.0}), -(2.0 * 2.0) / (14.0 * 14.0), 1e-15);

    const std::vector<NodeId> tri{0, 1, 2};
    EXPECT_NEAR(community_quality(g, tri, {1.0}), 2.5 / 14.0, 1e-15);

    const std::vector<NodeId> all{0, 1, 2, 3, 4, 5};
    EXPECT_NEAR(community_quality(g, all, {1.0}), sn_modularity(g, Partition::whole(6), {1.0}), 1e-15);

    EXPECT_THROW((void)community_quality(g, std::vector<NodeId>{}, {1.0}), InvalidArgument);
}

TEST(Properties, DecompositionAndNaiveAgreement) {
    Rng rng(12);
    for (int s = 0; s < 100; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 2 + uniform_index(rng, 29), .edge_prob = 0.25});
        const auto p = testing::random_partition(rng, g.size(), 1 + uniform_index(rng, 6));
        const SNParams params{50.0 + uniform_real(rng) * 2000, s % 2 ? Aggregation::max : Aggregation::sum};
        double sum = 0.0;
        for (const auto& members : p.communities()) sum += community_quality(g, members, params);
        const double sn = sn_modularity(g, p, params);
        EXPECT_NEAR(sn, sum, 1e-12);

        const auto labels = testing::labels_of(p);
        EXPECT_NEAR(ng_modularity(g, p), testing::naive_ng(g, labels), 1e-12);
        EXPECT_NEAR(sn, testing::naive_sn(g, labels, params.sigma_km, params.agg, true), 1e-12);
    }
}

TEST(Properties, RelabelingAndNodeReorderingInvariance) {
    Rng rng(13);
    for (int s = 0; s < 30; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 12, .edge_prob = 0.3});
        const auto p = testing::random_partition(rng, g.size(), 4);
        const SNParams params{500.0};

        // Relabel: reverse label order.
        std::vector<int> labels = testing::labels_of(p);
        for (auto& l : labels) l = 100 - l;
        const auto relabeled = Partition::from_labels(labels);
        EXPECT_EQ(ng_modularity(g, relabeled), ng_modularity(g, p));
        EXPECT_NEAR(sn_modularity(g, relabeled, params), sn_modularity(g, p, params), 1e-15);

        // Reorder nodes: reverse the index space.
        const std::size_t n = g.size();
        std::vector<GeoPoint> pts(n);
        for (NodeId i = 0; i < n; ++i) pts[n - 1 - i] = g.location(i);
        std::vector<WeightedEdge> edges;
        for (auto e : g.edges()) edges.push_back({static_cast<NodeId>(n - 1 - e.u), static_cast<NodeId>(n - 1 - e.v), e.weight});
        const auto h = GeoGraph::from_edges(pts, edges);
        std::vector<int> moved(n);
        for (NodeId i = 0; i < n; ++i) moved[n - 1 - i] = static_cast<int>(p.community_of(i));
        const auto q = Partition::from_labels(moved);
        EXPECT_NEAR(ng_modularity(h, q), ng_modularity(g, p), 1e-12);
        EXPECT_NEAR(sn_modularity(h, q, params), sn_modularity(g, p, params), 1e-12);
    }
}

TEST(Properties, LargeSigmaApproachesNgWithinBound) {
    Rng rng(14);
    for (int s = 0; s < 30; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 15, .edge_prob = 0.3, .lat_range = 60, .lon_range = 170});
        const auto p = testing::random_partition(rng, g.size(), 4);
        const double ng = ng_modularity(g, p);
        double previous_gap = std::numeric_limits<double>::infinity();
        for (double sigma : {1e4, 1e5, 1e6}) {
            const SNParams params{sigma};
            const double gap = std::abs(sn_modularity(g, p, params) - ng);
            double bound = 0.0;
            for (const auto& st : partition_stats(g, p, params))
                bound += std::abs(st.sum_in - st.sum_deg * st.sum_deg / g.two_m()) * st.dispersion;
            bound /= g.two_m();
            EXPECT_LE(gap, bound + 1e-15);
            EXPECT_LE(gap, previous_gap);
            previous_gap = gap;
        }
    }
}

}  // namespace
}  // namespace snmod

#include <gtest/gtest.h>

#include "test_graphs.hpp"

namespace snmod {
namespace {

using testing::bridged_triangles;
using testing::by_triangle;
using testing::colocated_clusters;

TEST(RunLouvain, BridgedTrianglesSplitAtTheBridge) {
    const auto r = run_louvain(bridged_triangles(), Objective::ng());
    EXPECT_EQ(r.partition, by_triangle());
    EXPECT_NEAR(r.score, 5.0 / 14.0, 1e-15);
}

TEST(RunLouvain, EdgelessGraphKeepsSingletons) {
    const auto g = GeoGraph::from_edges(std::vector<GeoPoint>(4), {});
    const auto r = run_louvain(g, Objective::ng());
    EXPECT_EQ(r.partition, Partition::singletons(4));
    EXPECT_EQ(r.score, 0.0);
    EXPECT_EQ(r.moves, 0u);
}

TEST(RunLouvain, SnOnColocatedClusters) {
    const auto r = run_louvain(colocated_clusters(), Objective::sn({1.0}));
    EXPECT_EQ(r.partition, by_triangle());
    EXPECT_NEAR(r.score, 5.0 / 14.0, 1e-15);
}

TEST(LouvainLevel, MoveGainMatchesQualityDifferences) {
    const auto g = bridged_triangles();
    const auto start = Partition::from_labels(std::vector<int>{0, 0, 1, 2, 2, 2});
    LouvainLevel level(g, Objective::sn({1.0}), {}, start);
    const CommunityId b = level.community_of(3);
    EXPECT_NEAR(level.move_gain(2, b), -1.0 / 14.0, 1e-15);
    EXPECT_EQ(level.move_gain(2, level.community_of(2)), 0.0);
    EXPECT_NEAR(level.move_gain(2, LouvainLevel::kFresh), 0.0, 1e-15);

    // Gains agree with the change in the objective after the move is applied.
    Rng rng(31);
    for (int s = 0; s < 40; ++s) {
        const auto h = testing::random_geo_graph(rng, {.n = 10, .edge_prob = 0.35});
        const auto p = testing::random_partition(rng, h.size(), 4);
        const Objective obj = Objective::sn({300.0, s % 2 ? Aggregation::max : Aggregation::sum});
        LouvainLevel lv(h, obj, {}, p);
        const auto i = static_cast<NodeId>(uniform_index(rng, h.size()));
        const auto j = static_cast<NodeId>(uniform_index(rng, h.size()));
        const CommunityId target = lv.community_of(j);
        const double before = sn_modularity(h, lv.partition(), obj.params);
        const double predicted = lv.move_gain(i, target);
        lv.apply_move(i, target);
        EXPECT_NEAR(sn_modularity(h, lv.partition(), obj.params) - before, predicted, 1e-12);
        EXPECT_NEAR(lv.working_objective(), sn_modularity(h, lv.partition(), obj.params), 1e-12);
    }
}

TEST(LouvainLevel, JoinConstraintBlocksDistantCommunities) {
    const auto g = colocated_clusters();
    EngineConfig cfg;
    cfg.join_constraint_km = 50.0;
    LouvainLevel level(g, Objective::sn({1.0}), cfg, by_triangle());
    EXPECT_FALSE(level.may_join(2, level.community_of(3)));
    EXPECT_TRUE(level.may_join(1, level.community_of(0)));

    // Everything starts in one place, so the unconstrained optimum is reachable.
    const auto r = run_louvain(g, Objective::sn({1.0}), cfg);
    EXPECT_EQ(r.partition, by_triangle());

    // With a zero constraint only co-located nodes can merge.
    cfg.join_constraint_km = 0.0;
    const auto z = run_louvain(g, Objective::ng(), cfg);
    EXPECT_EQ(z.partition, by_triangle());
}

TEST(LouvainLevel, ConstrainedRunsKeepCommunitiesWithinSpan) {
    Rng rng(37);
    for (int s = 0; s < 20; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 40, .edge_prob = 0.15, .lat_range = 20, .lon_range = 20});
        EngineConfig cfg;
        cfg.join_constraint_km = 800.0;
        const auto r = run_louvain(g, Objective::sn({500.0}), cfg);
        // Level 0 respects the constraint pairwise; later levels compare centroids,
        // so only the first level's partition is bounded exactly.
        LouvainLevel first(g, Objective::sn({500.0}), cfg);
        first.local_move_pass();
        const Partition level0 = first.partition();
        for (const auto& members : level0.communities())
            for (NodeId a : members)
                for (NodeId b : members) EXPECT_LE(haversine_km(g.location(a), g.location(b)), 800.0 + 1e-6);
        EXPECT_GE(r.score, sn_modularity(g, Partition::singletons(g.size()), {500.0}) - 1e-12);
    }
}

TEST(AggregateGraph, BridgedTriangles) {
    const auto meta = aggregate_graph(bridged_triangles(), by_triangle());
    const auto& h = meta.graph;
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h.self_loop(0), 6.0);
    EXPECT_EQ(h.self_loop(1), 6.0);
    EXPECT_EQ(h.degree(0), 7.0);
    EXPECT_EQ(h.two_m(), 14.0);
    double bridge = 0.0;
    for (const auto& nb : h.neighbors(0))
        if (nb.node == 1) bridge = nb.weight;
    EXPECT_EQ(bridge, 1.0);
    EXPECT_EQ(meta.provenance[0], (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(meta.provenance[1], (std::vector<NodeId>{3, 4, 5}));
    EXPECT_TRUE(validate_graph(h, true).ok());
    EXPECT_NEAR(ng_modularity(h, Partition::singletons(2)), 5.0 / 14.0, 1e-15);
}

TEST(AggregateGraph, PreservesNgModularity) {
    Rng rng(41);
    for (int s = 0; s < 50; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 20, .edge_prob = 0.2});
        const auto p = testing::random_partition(rng, g.size(), 6);
        const auto meta = aggregate_graph(g, p);
        EXPECT_NEAR(meta.graph.two_m(), g.two_m(), 1e-9);
        EXPECT_NEAR(ng_modularity(meta.graph, Partition::singletons(meta.graph.size())), ng_modularity(g, p), 1e-12);

        const auto coarse = testing::random_partition(rng, meta.graph.size(), 3);
        std::vector<int> lifted(g.size());
        for (NodeId i = 0; i < g.size(); ++i) lifted[i] = static_cast<int>(coarse.community_of(p.community_of(i)));
        EXPECT_NEAR(ng_modularity(meta.graph, coarse), ng_modularity(g, Partition::from_labels(lifted)), 1e-12);
    }
}

TEST(LouvainLevel, LocalMovesNeverDecreaseTheObjective) {
    Rng rng(43);
    for (int s = 0; s < 30; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 30, .edge_prob = 0.15});
        for (const Objective obj : {Objective::ng(), Objective::sn({400.0})}) {
            LouvainLevel level(g, obj, {});
            const double before = level.working_objective();
            std::size_t moved = 0;
            double last = before;
            while (std::size_t m = level.sweep()) {
                moved += m;
                const double now = level.working_objective();
                EXPECT_GT(now, last);
                last = now;
            }
            if (moved > 0) EXPECT_GT(last, before);
            const double direct = obj.spatial() ? sn_modularity(g, level.partition(), obj.params)
                                                : ng_modularity(g, level.partition());
            EXPECT_NEAR(level.working_objective(), direct, 1e-12);
        }
    }
}

TEST(RunLouvain, NgLevelObjectivesIncrease) {
    Rng rng(47);
    for (int s = 0; s < 20; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 60, .edge_prob = 0.08});
        const auto r = run_louvain(g, Objective::ng());
        for (std::size_t l = 1; l < r.level_objectives.size(); ++l)
            EXPECT_GE(r.level_objectives[l], r.level_objectives[l - 1] - 1e-12);
        EXPECT_NEAR(r.score, r.level_objectives.back(), 1e-12);
    }
}

TEST(RunLouvain, IdenticalLocationsMakeSnMatchNg) {
    Rng rng(53);
    for (int s = 0; s < 20; ++s) {
        auto g0 = testing::random_geo_graph(rng, {.n = 40, .edge_prob = 0.1});
        const std::vector<GeoPoint> same(g0.size(), GeoPoint{40.7, -74.0});
        const auto g = GeoGraph::from_edges(same, g0.edges());
        const auto ng = run_louvain(g, Objective::ng());
        const auto sn = run_louvain(g, Objective::sn({100.0}));
        EXPECT_EQ(ng.partition, sn.partition);
        EXPECT_EQ(ng.score, sn.score);
    }
}

TEST(RunLouvain, ShuffledOrderIsDeterministicPerSeed) {
    Rng rng(59);
    const auto g = testing::random_geo_graph(rng, {.n = 80, .edge_prob = 0.06});
    EngineConfig cfg;
    cfg.node_order = NodeOrder::shuffled;
    cfg.seed = 9;
    const auto a = run_louvain(g, Objective::sn({700.0}), cfg);
    const auto b = run_louvain(g, Objective::sn({700.0}), cfg);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.score, b.score);
}

TEST(EngineConfig, RejectsBadValues) {
    EngineConfig cfg;
    cfg.join_constraint_km = -1;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    EXPECT_THROW((void)Objective::sn({0.0}), InvalidArgument);
}

}  // namespace
}  // namespace snmod

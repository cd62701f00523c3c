#include <gtest/gtest.h>

#include <sstream>

#include "test_graphs.hpp"

namespace snmod {
namespace {

using nlohmann::json;

TEST(PartitionCsv, RoundTrip) {
    Rng rng(83);
    for (int s = 0; s < 20; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 25, .edge_prob = 0.1});
        const auto p = testing::random_partition(rng, g.size(), 5);
        std::stringstream buf;
        write_partition_csv(buf, g, p);
        EXPECT_EQ(read_partition_csv(buf, g), p);
    }
}

TEST(PartitionCsv, UsesExternalIds) {
    const auto g = GeoGraph::from_edges({7, 3}, std::vector<GeoPoint>(2), std::vector<WeightedEdge>{{0, 1}});
    std::ostringstream out;
    write_partition_csv(out, g, Partition::singletons(2));
    EXPECT_EQ(out.str(), "node,community\n7,0\n3,1\n");
}

TEST(PartitionCsv, Errors) {
    const auto g = testing::triangle();
    auto read = [&](const std::string& text) {
        std::istringstream in(text);
        return read_partition_csv(in, g);
    };
    EXPECT_EQ(read("0,5\n1,5\n2,9\n"), Partition::from_labels(std::vector<int>{0, 0, 1}));
    EXPECT_THROW((void)read("node,community\n0,1\n1,1\n"), DataError);       // missing node
    EXPECT_THROW((void)read("0,1\n1,1\n2,1\n8,1\n"), DataError);             // unknown node
    EXPECT_THROW((void)read("0,1\n1,1\n1,2\n2,1\n"), DataError);             // listed twice
    EXPECT_THROW((void)read("node,community\n0,1\nx,y\n1,1\n2,1\n"), ParseError);
}

// Structural GeoJSON check written against the format itself, not the writer.
std::vector<std::string> geojson_problems(const json& doc) {
    std::vector<std::string> out;
    auto position_ok = [](const json& p) {
        return p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number() && p[0].get<double>() >= -180 &&
               p[0].get<double>() <= 180 && p[1].get<double>() >= -90 && p[1].get<double>() <= 90;
    };
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") out.push_back("not a FeatureCollection");
    if (!doc.contains("features") || !doc["features"].is_array()) {
        out.push_back("features missing");
        return out;
    }
    for (const auto& f : doc["features"]) {
        if (f.value("type", "") != "Feature") out.push_back("feature type");
        if (!f.contains("properties") || !f["properties"].is_object()) out.push_back("properties");
        if (!f.contains("geometry") || !f["geometry"].is_object()) {
            out.push_back("geometry");
            continue;
        }
        const auto& geom = f["geometry"];
        const std::string type = geom.value("type", "");
        const auto& coords = geom["coordinates"];
        if (type == "Point") {
            if (!position_ok(coords)) out.push_back("point position");
        } else if (type == "LineString") {
            if (!coords.is_array() || coords.size() < 2) out.push_back("line length");
            else
                for (const auto& p : coords)
                    if (!position_ok(p)) out.push_back("line position");
        } else {
            out.push_back("geometry type " + type);
        }
    }
    return out;
}

TEST(GeoJson, BridgedTriangles) {
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({10.0 + i, -20.0 - i});
    const auto g = testing::bridged_triangles(pts);
    const auto doc = to_geojson(g, testing::by_triangle());
    EXPECT_TRUE(geojson_problems(doc).empty());

    // Round trip through text.
    const auto parsed = json::parse(doc.dump());
    EXPECT_EQ(parsed, doc);

    int points = 0, lines = 0, inter = 0;
    for (const auto& f : parsed["features"]) {
        const std::string type = f["geometry"]["type"];
        if (type == "Point") {
            const auto id = f["properties"]["id"].get<NodeId>();
            EXPECT_EQ(f["properties"]["community"].get<int>(), id < 3 ? 0 : 1);
            EXPECT_EQ(f["geometry"]["coordinates"][0].get<double>(), pts[id].lon);
            EXPECT_EQ(f["geometry"]["coordinates"][1].get<double>(), pts[id].lat);
            ++points;
        } else {
            ++lines;
            if (!f["properties"]["intra"].get<bool>()) ++inter;
        }
    }
    EXPECT_EQ(points, 6);
    EXPECT_EQ(lines, 7);
    EXPECT_EQ(inter, 1);
}

TEST(GeoJson, RandomGraphsAreWellFormed) {
    Rng rng(89);
    for (int s = 0; s < 10; ++s) {
        const auto g = testing::random_geo_graph(rng, {.n = 30, .edge_prob = 0.1, .lat_range = 89, .lon_range = 179});
        const auto doc = to_geojson(g, testing::random_partition(rng, g.size(), 4));
        EXPECT_TRUE(geojson_problems(doc).empty());
        EXPECT_EQ(doc["features"].size(), g.size() + g.edge_count());
    }
}

}  // namespace
}  // namespace snmod

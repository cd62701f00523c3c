#pragma once

// Partition CSV and GeoJSON export.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/load.hpp"
#include "snmod/partition.hpp"

namespace snmod {

/// `node,community` header, then one row per node in internal order with the
/// node's external id and canonical community label.
inline void write_partition_csv(std::ostream& out, const GeoGraph& g, const Partition& p) {
    require_compatible(g, p);
    out << "node,community\n";
    for (NodeId i = 0; i < g.size(); ++i) out << g.external_id(i) << ',' << p.community_of(i) << '\n';
}

/// Reads a partition file against `g`. Labels may be any integers; every node of
/// `g` must appear exactly once.
inline Partition read_partition_csv(std::istream& in, const GeoGraph& g, const std::string& source = "partition") {
    std::vector<std::int64_t> labels(g.size(), 0);
    std::vector<char> seen(g.size(), 0);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto f = detail::split(body, ',');
        const auto id = f.size() == 2 ? detail::parse_int(f[0]) : std::nullopt;
        const auto label = f.size() == 2 ? detail::parse_int(f[1]) : std::nullopt;
        if (!id || !label) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw ParseError(source, lineno, "expected node,community");
        }
        first = false;
        const auto node = g.find(*id);
        if (!node) throw DataError(source + ":" + std::to_string(lineno) + ": unknown node " + std::to_string(*id));
        if (seen[*node]) throw DataError(source + ":" + std::to_string(lineno) + ": node " + std::to_string(*id) + " listed twice");
        seen[*node] = 1;
        labels[*node] = *label;
    }
    for (NodeId i = 0; i < g.size(); ++i)
        if (!seen[i]) throw DataError(source + ": node " + std::to_string(g.external_id(i)) + " has no community");
    return Partition::from_labels(labels);
}

inline Partition read_partition_file(const std::filesystem::path& path, const GeoGraph& g) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open partition file " + path.string());
    return read_partition_csv(in, g, path.string());
}

/// FeatureCollection with a Point per node ({id, community}) and a LineString
/// per undirected edge ({intra}). Positions are [lon, lat].
[[nodiscard]] inline nlohmann::json to_geojson(const GeoGraph& g, const Partition& p) {
    require_compatible(g, p);
    using nlohmann::json;
    json features = json::array();
    for (NodeId i = 0; i < g.size(); ++i) {
        const auto& loc = g.location(i);
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {loc.lon, loc.lat}}}},
                            {"properties", {{"id", g.external_id(i)}, {"community", p.community_of(i)}}}});
    }
    for (const auto& e : g.edges()) {
        if (e.u == e.v) continue;
        const auto& a = g.location(e.u);
        const auto& b = g.location(e.v);
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}}},
             {"properties", {{"intra", p.community_of(e.u) == p.community_of(e.v)}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace snmod

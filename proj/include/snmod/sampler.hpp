#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/random.hpp"

namespace snmod {

struct SampleSpec {
    std::size_t target_size = 1000;
    std::uint64_t seed = 0;
};

struct SampleResult {
    GeoGraph graph;
    std::vector<NodeId> nodes;  // source-graph ids of the sampled nodes, ascending
    std::vector<NodeId> picks;  // the random seeds of each expansion, in order
};

/// Node-induced subgraph on `nodes` (any order; output indexed by ascending source id).
[[nodiscard]] inline GeoGraph induced_subgraph(const GeoGraph& g, std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    constexpr NodeId kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(g.size(), kAbsent);
    std::vector<ExternalId> ids;
    std::vector<GeoPoint> locations;
    for (NodeId v : nodes) {
        if (!g.contains(v)) throw InvalidArgument("induced_subgraph: unknown node");
        remap[v] = static_cast<NodeId>(ids.size());
        ids.push_back(g.external_id(v));
        locations.push_back(g.location(v));
    }
    std::vector<WeightedEdge> edges;
    for (NodeId v : nodes)
        for (const auto& nb : g.neighbors(v))
            if (nb.node >= v && remap[nb.node] != kAbsent) edges.push_back({remap[v], remap[nb.node], nb.weight});
    return GeoGraph::from_edges(std::move(ids), std::move(locations), edges, true);
}

/// Snowball sample: repeatedly pick a uniformly random node not yet included,
/// add it, then add its neighbors in ascending id order, stopping the moment
/// the target size is reached. Randomness: mt19937_64(seed) with rejection
/// sampling for the index draw.
[[nodiscard]] inline SampleResult snowball_sample(const GeoGraph& g, const SampleSpec& spec) {
    if (g.size() == 0) throw InvalidArgument("snowball_sample: empty graph");
    if (spec.target_size < 1) throw InvalidArgument("snowball_sample: target size must be at least 1");
    const std::size_t target = std::min(spec.target_size, g.size());

    Rng rng(spec.seed);
    std::vector<NodeId> pool(g.size());
    std::vector<std::size_t> slot(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        pool[i] = i;
        slot[i] = i;
    }
    SampleResult out;
    std::vector<char> included(g.size(), 0);
    auto include = [&](NodeId v) {
        included[v] = 1;
        out.nodes.push_back(v);
        const std::size_t at = slot[v];
        pool[at] = pool.back();
        slot[pool[at]] = at;
        pool.pop_back();
    };

    while (out.nodes.size() < target) {
        const NodeId pick = pool[static_cast<std::size_t>(uniform_index(rng, pool.size()))];
        out.picks.push_back(pick);
        include(pick);
        for (const auto& nb : g.neighbors(pick)) {
            if (out.nodes.size() >= target) break;
            if (!included[nb.node]) include(nb.node);
        }
    }
    std::sort(out.nodes.begin(), out.nodes.end());
    out.graph = induced_subgraph(g, out.nodes);
    return out;
}

}  // namespace snmod

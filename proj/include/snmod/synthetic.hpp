#pragma once

// Planted geographic-cluster graphs. Nodes live in `clusters` cities placed
// along the equator `spacing_km` apart, scattered around each city center with
// a Gaussian of `spread_km` (0 = co-located). Each node belongs to a social
// group: its own city's group with probability 1 - mix, otherwise a uniformly
// chosen other group. Pairs in the same group connect with p_intra, others with
// p_inter.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/geometry.hpp"
#include "snmod/random.hpp"

namespace snmod {

struct SyntheticSpec {
    std::size_t clusters = 10;
    std::size_t nodes = 1000;
    double p_intra = 0.05;
    double p_inter = 0.001;
    double spacing_km = 500.0;
    double spread_km = 25.0;
    double mix = 0.05;
    std::uint64_t seed = 1;

    void validate() const {
        if (clusters < 1 || nodes < clusters) throw InvalidArgument("synthetic: need 1 <= clusters <= nodes");
        auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!prob(p_intra) || !prob(p_inter) || !prob(mix)) throw InvalidArgument("synthetic: probabilities must lie in [0, 1]");
        if (!(spacing_km >= 0.0) || !(spread_km >= 0.0)) throw InvalidArgument("synthetic: distances must be non-negative");
        // Keep every city inside (-180, 180] longitude.
        const double extent_deg = spacing_km * static_cast<double>(clusters - 1) / kKmPerDegree;
        if (extent_deg >= 300.0) throw InvalidArgument("synthetic: cities do not fit around the equator");
    }

    static constexpr double kKmPerDegree = kEarthRadiusKm * 3.14159265358979323846 / 180.0;
};

struct SyntheticGraph {
    GeoGraph graph;
    std::vector<std::uint32_t> city;          // geographic cluster per node
    std::vector<std::uint32_t> social_group;  // planted social community per node
};

[[nodiscard]] inline SyntheticGraph make_planted_geo_graph(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const double first_lon = -150.0;
    const std::size_t n = spec.nodes;

    SyntheticGraph out;
    out.city.resize(n);
    out.social_group.resize(n);
    std::vector<GeoPoint> locations(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto c = static_cast<std::uint32_t>(v % spec.clusters);
        out.city[v] = c;
        const double center_lon = first_lon + static_cast<double>(c) * spec.spacing_km / SyntheticSpec::kKmPerDegree;
        double lat = 0.0, lon = center_lon;
        if (spec.spread_km > 0.0) {
            lat += standard_normal(rng) * spec.spread_km / SyntheticSpec::kKmPerDegree;
            lon += standard_normal(rng) * spec.spread_km / SyntheticSpec::kKmPerDegree;
        }
        locations[v] = {std::clamp(lat, -89.0, 89.0), normalize_lon(lon)};
        std::uint32_t group = c;
        if (spec.clusters > 1 && uniform_real(rng) < spec.mix) {
            group = static_cast<std::uint32_t>(uniform_index(rng, spec.clusters - 1));
            if (group >= c) ++group;
        }
        out.social_group[v] = group;
    }

    std::vector<WeightedEdge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = out.social_group[u] == out.social_group[v] ? spec.p_intra : spec.p_inter;
            if (uniform_real(rng) < p) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
        }
    out.graph = GeoGraph::from_edges(std::move(locations), edges);
    return out;
}

}  // namespace snmod

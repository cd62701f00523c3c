#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/geometry.hpp"
#include "snmod/partition.hpp"

namespace snmod {

/// How the squared, sigma-scaled member-to-center distances of a community
/// combine into its dispersion.
enum class Aggregation { max, sum };

inline std::string_view to_string(Aggregation a) { return a == Aggregation::max ? "max" : "sum"; }

inline Aggregation parse_aggregation(std::string_view s) {
    if (s == "max") return Aggregation::max;
    if (s == "sum") return Aggregation::sum;
    throw InvalidArgument("unknown aggregation '" + std::string(s) + "'");
}

/// Parameters of spatially-near modularity.
struct SNParams {
    double sigma_km = 1000.0;
    Aggregation agg = Aggregation::max;
    Metric metric = Metric::haversine;

    void validate() const {
        if (!(sigma_km > 0.0) || !std::isfinite(sigma_km))
            throw InvalidArgument("sigma must be positive and finite, got " + std::to_string(sigma_km));
    }
};

/// Per-community pieces of the SN-modularity term.
struct CommunityStats {
    double sum_in = 0.0;   // ordered-pair internal weight, self-loops once
    double sum_deg = 0.0;  // sum of member degrees
    GeoPoint centroid;
    double dispersion = 0.0;  // agg over members of (d(i, centroid) / sigma)^2
};

/// One community's contribution: (1/2m) (sum_in - sum_deg^2/2m) / (1 + dispersion).
/// An edgeless graph (2m = 0) contributes 0.
[[nodiscard]] inline double quality_term(double sum_in, double sum_deg, double two_m, double dispersion) {
    if (two_m <= 0.0) return 0.0;
    return ((sum_in - sum_deg * sum_deg / two_m) / (1.0 + dispersion)) / two_m;
}

[[nodiscard]] inline double dispersion_of(std::span<const GeoPoint> points, const GeoPoint& center,
                                          const SNParams& params) {
    double acc = 0.0;
    for (const auto& p : points) {
        const double r = distance(params.metric, p, center) / params.sigma_km;
        const double sq = r * r;
        acc = params.agg == Aggregation::max ? std::max(acc, sq) : acc + sq;
    }
    return acc;
}

/// Stats for every community of `p`, indexed by community label.
[[nodiscard]] inline std::vector<CommunityStats> partition_stats(const GeoGraph& g, const Partition& p,
                                                                 const SNParams& params) {
    require_compatible(g, p);
    std::vector<CommunityStats> stats(p.community_count());
    for (NodeId i = 0; i < g.size(); ++i) {
        const CommunityId c = p.community_of(i);
        stats[c].sum_deg += g.degree(i);
        for (const auto& nb : g.neighbors(i))
            if (p.community_of(nb.node) == c) stats[c].sum_in += nb.weight;
    }
    std::vector<GeoPoint> pts;
    for (CommunityId c = 0; c < p.community_count(); ++c) {
        pts.clear();
        for (NodeId v : p.members(c)) pts.push_back(g.location(v));
        stats[c].centroid = centroid(params.metric, pts);
        stats[c].dispersion = dispersion_of(pts, stats[c].centroid, params);
    }
    return stats;
}

/// Newman-Girvan modularity of `p`.
[[nodiscard]] inline double ng_modularity(const GeoGraph& g, const Partition& p) {
    require_compatible(g, p);
    if (g.two_m() <= 0.0) return 0.0;
    std::vector<double> sum_in(p.community_count(), 0.0);
    std::vector<double> sum_deg(p.community_count(), 0.0);
    for (NodeId i = 0; i < g.size(); ++i) {
        const CommunityId c = p.community_of(i);
        sum_deg[c] += g.degree(i);
        for (const auto& nb : g.neighbors(i))
            if (p.community_of(nb.node) == c) sum_in[c] += nb.weight;
    }
    const double two_m = g.two_m();
    double total = 0.0;
    for (std::size_t c = 0; c < sum_in.size(); ++c) total += sum_in[c] - sum_deg[c] * sum_deg[c] / two_m;
    return total / two_m;
}

/// Spatially-near modularity: each community's NG term divided by 1 + its dispersion.
[[nodiscard]] inline double sn_modularity(const GeoGraph& g, const Partition& p, const SNParams& params) {
    params.validate();
    if (g.two_m() <= 0.0) {
        require_compatible(g, p);
        return 0.0;
    }
    const auto stats = partition_stats(g, p, params);
    const double two_m = g.two_m();
    double total = 0.0;
    for (const auto& s : stats) total += (s.sum_in - s.sum_deg * s.sum_deg / two_m) / (1.0 + s.dispersion);
    return total / two_m;
}

[[nodiscard]] inline CommunityStats community_stats(const GeoGraph& g, std::span<const NodeId> members,
                                                    const SNParams& params) {
    if (members.empty()) throw InvalidArgument("community_stats: empty community");
    std::vector<char> in(g.size(), 0);
    for (NodeId v : members) {
        if (!g.contains(v)) throw InvalidArgument("community_stats: unknown node " + std::to_string(v));
        if (in[v]) throw InvalidArgument("community_stats: node listed twice");
        in[v] = 1;
    }
    CommunityStats s;
    std::vector<GeoPoint> pts;
    pts.reserve(members.size());
    for (NodeId v : members) {
        s.sum_deg += g.degree(v);
        for (const auto& nb : g.neighbors(v))
            if (in[nb.node]) s.sum_in += nb.weight;
        pts.push_back(g.location(v));
    }
    s.centroid = centroid(params.metric, pts);
    s.dispersion = dispersion_of(pts, s.centroid, params);
    return s;
}

/// Quality of a single community. Summed over a partition this is sn_modularity.
[[nodiscard]] inline double community_quality(const GeoGraph& g, std::span<const NodeId> members,
                                              const SNParams& params) {
    params.validate();
    const auto s = community_stats(g, members, params);
    return quality_term(s.sum_in, s.sum_deg, g.two_m(), s.dispersion);
}

}  // namespace snmod

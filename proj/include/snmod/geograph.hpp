#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geometry.hpp"

namespace snmod {

/// Dense internal node index, 0..n-1.
using NodeId = std::uint32_t;
/// Identifier as it appears in input files.
using ExternalId = std::int64_t;

struct Neighbor {
    NodeId node;
    double weight;
};

struct WeightedEdge {
    NodeId u;
    NodeId v;
    double weight = 1.0;
};

/// Undirected weighted graph with a location per node.
///
/// Adjacency is stored in both directions; a self-loop (i, i, w) appears once in
/// i's list and contributes w once to k_i. With that convention two_m equals both
/// the ordered-pair weight sum and the degree sum, and a meta-node's self-loop is
/// the ordered-pair internal weight of the community it replaces.
class GeoGraph {
public:
    GeoGraph() = default;

    /// Unchecked constructor; pair with validate_graph() when the input is untrusted.
    GeoGraph(std::vector<ExternalId> ids, std::vector<GeoPoint> locations,
             std::vector<std::vector<Neighbor>> adjacency, double two_m)
        : ids_(std::move(ids)), locations_(std::move(locations)), adjacency_(std::move(adjacency)), two_m_(two_m) {
        degrees_.resize(adjacency_.size(), 0.0);
        for (std::size_t i = 0; i < adjacency_.size(); ++i)
            for (const auto& nb : adjacency_[i]) degrees_[i] += nb.weight;
        index_.reserve(ids_.size());
        for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], static_cast<NodeId>(i));
    }

    /// Builds a symmetric graph from an undirected edge list. Repeated pairs (in
    /// either orientation) are merged by summing their weights.
    static GeoGraph from_edges(std::vector<ExternalId> ids, std::vector<GeoPoint> locations,
                               std::span<const WeightedEdge> edges, bool allow_self_loops = false) {
        const std::size_t n = ids.size();
        if (locations.size() != n) throw InvalidArgument("from_edges: ids and locations differ in length");
        std::vector<std::vector<Neighbor>> adj(n);
        for (const auto& e : edges) {
            if (e.u >= n || e.v >= n) throw InvalidArgument("from_edges: endpoint out of range");
            if (!(e.weight > 0.0) || !std::isfinite(e.weight))
                throw InvalidArgument("from_edges: edge weight must be positive and finite");
            if (e.u == e.v) {
                if (!allow_self_loops) throw InvalidArgument("from_edges: self-loop not allowed");
                adj[e.u].push_back({e.u, e.weight});
                continue;
            }
            adj[e.u].push_back({e.v, e.weight});
            adj[e.v].push_back({e.u, e.weight});
        }
        double two_m = 0.0;
        for (auto& list : adj) {
            std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
            std::vector<Neighbor> merged;
            merged.reserve(list.size());
            for (const auto& nb : list) {
                if (!merged.empty() && merged.back().node == nb.node)
                    merged.back().weight += nb.weight;
                else
                    merged.push_back(nb);
            }
            for (const auto& nb : merged) two_m += nb.weight;
            list = std::move(merged);
        }
        return GeoGraph(std::move(ids), std::move(locations), std::move(adj), two_m);
    }

    /// Convenience for tests and generators: ids 0..n-1.
    static GeoGraph from_edges(std::vector<GeoPoint> locations, std::span<const WeightedEdge> edges,
                               bool allow_self_loops = false) {
        std::vector<ExternalId> ids(locations.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ExternalId>(i);
        return from_edges(std::move(ids), std::move(locations), edges, allow_self_loops);
    }

    [[nodiscard]] std::size_t size() const { return adjacency_.size(); }
    [[nodiscard]] double two_m() const { return two_m_; }
    [[nodiscard]] double degree(NodeId i) const { return degrees_[i]; }
    [[nodiscard]] std::span<const double> degrees() const { return degrees_; }
    [[nodiscard]] std::span<const Neighbor> neighbors(NodeId i) const { return adjacency_[i]; }
    [[nodiscard]] const GeoPoint& location(NodeId i) const { return locations_[i]; }
    [[nodiscard]] std::span<const GeoPoint> locations() const { return locations_; }
    [[nodiscard]] ExternalId external_id(NodeId i) const { return ids_[i]; }
    [[nodiscard]] std::span<const ExternalId> external_ids() const { return ids_; }

    [[nodiscard]] bool contains(NodeId i) const { return i < size(); }

    [[nodiscard]] std::optional<NodeId> find(ExternalId id) const {
        if (auto it = index_.find(id); it != index_.end()) return it->second;
        return std::nullopt;
    }

    [[nodiscard]] double self_loop(NodeId i) const {
        for (const auto& nb : adjacency_[i])
            if (nb.node == i) return nb.weight;
        return 0.0;
    }

    /// Number of undirected edges, self-loops included.
    [[nodiscard]] std::size_t edge_count() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < adjacency_.size(); ++i)
            for (const auto& nb : adjacency_[i])
                if (nb.node >= i) ++count;
        return count;
    }

    /// Each undirected edge once, u <= v.
    [[nodiscard]] std::vector<WeightedEdge> edges() const {
        std::vector<WeightedEdge> out;
        for (std::size_t i = 0; i < adjacency_.size(); ++i)
            for (const auto& nb : adjacency_[i])
                if (nb.node >= i) out.push_back({static_cast<NodeId>(i), nb.node, nb.weight});
        return out;
    }

    friend bool operator==(const GeoGraph& a, const GeoGraph& b) {
        if (a.ids_ != b.ids_ || a.locations_ != b.locations_ || a.two_m_ != b.two_m_) return false;
        if (a.adjacency_.size() != b.adjacency_.size()) return false;
        for (std::size_t i = 0; i < a.adjacency_.size(); ++i) {
            const auto& x = a.adjacency_[i];
            const auto& y = b.adjacency_[i];
            if (x.size() != y.size()) return false;
            for (std::size_t k = 0; k < x.size(); ++k)
                if (x[k].node != y[k].node || x[k].weight != y[k].weight) return false;
        }
        return true;
    }

private:
    std::vector<ExternalId> ids_;
    std::vector<GeoPoint> locations_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> degrees_;
    double two_m_ = 0.0;
    std::unordered_map<ExternalId, NodeId> index_;
};

[[nodiscard]] inline double weighted_degree(const GeoGraph& g, NodeId i) {
    if (!g.contains(i)) throw InvalidArgument("weighted_degree: unknown node " + std::to_string(i));
    return g.degree(i);
}

struct ValidationReport {
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of a GeoGraph and lists what is broken.
/// Self-loops are reported unless `allow_self_loops` (meta graphs carry them).
[[nodiscard]] inline ValidationReport validate_graph(const GeoGraph& g, bool allow_self_loops = false) {
    ValidationReport report;
    auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
    const std::size_t n = g.size();

    if (g.external_ids().size() != n) add("size: external id table has " + std::to_string(g.external_ids().size()) + " entries for " + std::to_string(n) + " nodes");
    if (g.locations().size() != n) add("size: location table has " + std::to_string(g.locations().size()) + " entries for " + std::to_string(n) + " nodes");

    {
        std::vector<ExternalId> ids(g.external_ids().begin(), g.external_ids().end());
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) add("ids: duplicate external id");
    }
    for (std::size_t i = 0; i < g.locations().size(); ++i)
        if (!is_valid(g.locations()[i])) add("coordinate: node " + std::to_string(i) + " has an out-of-range location");

    double degree_sum = 0.0;
    double ordered_sum = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        double k = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            k += nb.weight;
            ordered_sum += nb.weight;
            if (nb.node >= n) {
                add("range: node " + std::to_string(i) + " lists neighbor " + std::to_string(nb.node));
                continue;
            }
            if (!(nb.weight > 0.0) || !std::isfinite(nb.weight))
                add("weight: edge (" + std::to_string(i) + "," + std::to_string(nb.node) + ") has non-positive weight");
            if (nb.node == i) {
                if (!allow_self_loops) add("self-loop: node " + std::to_string(i));
                continue;
            }
            const auto back = g.neighbors(nb.node);
            const auto it = std::find_if(back.begin(), back.end(), [&](const Neighbor& b) { return b.node == i; });
            if (it == back.end())
                add("asymmetry: (" + std::to_string(i) + "," + std::to_string(nb.node) + ") has no reverse entry");
            else if (it->weight != nb.weight)
                add("asymmetry: (" + std::to_string(i) + "," + std::to_string(nb.node) + ") weight differs from reverse entry");
        }
        if (std::abs(k - g.degree(i)) > 1e-9 * std::max(1.0, std::abs(k)))
            add("degree: k_" + std::to_string(i) + " does not match its incident weights");
        degree_sum += g.degree(i);
    }
    const double scale = std::max(1.0, std::abs(g.two_m()));
    if (std::abs(g.two_m() - degree_sum) > 1e-9 * scale) add("consistency: two_m differs from the degree sum");
    if (std::abs(g.two_m() - ordered_sum) > 1e-9 * scale) add("consistency: two_m differs from the ordered-pair weight sum");
    return report;
}

}  // namespace snmod

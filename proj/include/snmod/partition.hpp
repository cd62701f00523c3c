#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"

namespace snmod {

using CommunityId = std::uint32_t;

/// A set partition of the nodes 0..n-1.
///
/// Labels are canonical: dense 0..|C|-1, numbered by the smallest member of each
/// community. Two Partitions describing the same grouping therefore compare equal
/// regardless of the labels they were built from.
class Partition {
public:
    Partition() = default;

    /// Every node in its own community.
    static Partition singletons(std::size_t n) {
        std::vector<std::int64_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::int64_t>(i);
        return from_labels(labels);
    }

    static Partition whole(std::size_t n) { return from_labels(std::vector<std::int64_t>(n, 0)); }

    /// Arbitrary (possibly sparse or negative) labels, one per node.
    template <typename Label>
    static Partition from_labels(std::span<const Label> labels) {
        Partition p;
        p.assignment_.resize(labels.size());
        std::unordered_map<Label, CommunityId> dense;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto [it, inserted] = dense.try_emplace(labels[i], static_cast<CommunityId>(dense.size()));
            if (inserted) p.communities_.emplace_back();
            p.assignment_[i] = it->second;
            p.communities_[it->second].push_back(static_cast<NodeId>(i));
        }
        return p;
    }

    template <typename Label>
    static Partition from_labels(const std::vector<Label>& labels) {
        return from_labels(std::span<const Label>(labels));
    }

    static Partition from_groups(std::size_t n, const std::vector<std::vector<NodeId>>& groups) {
        std::vector<std::int64_t> labels(n, -1);
        for (std::size_t c = 0; c < groups.size(); ++c)
            for (NodeId v : groups[c]) {
                if (v >= n) throw InvalidArgument("from_groups: node out of range");
                if (labels[v] != -1) throw InvalidArgument("from_groups: node listed twice");
                labels[v] = static_cast<std::int64_t>(c);
            }
        if (std::find(labels.begin(), labels.end(), -1) != labels.end())
            throw InvalidArgument("from_groups: groups do not cover every node");
        return from_labels(labels);
    }

    [[nodiscard]] std::size_t node_count() const { return assignment_.size(); }
    [[nodiscard]] std::size_t community_count() const { return communities_.size(); }
    [[nodiscard]] CommunityId community_of(NodeId v) const { return assignment_[v]; }
    [[nodiscard]] std::span<const CommunityId> assignment() const { return assignment_; }
    [[nodiscard]] std::span<const NodeId> members(CommunityId c) const { return communities_[c]; }
    [[nodiscard]] const std::vector<std::vector<NodeId>>& communities() const { return communities_; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<CommunityId> assignment_;
    std::vector<std::vector<NodeId>> communities_;
};

inline void require_compatible(const GeoGraph& g, const Partition& p) {
    if (g.size() != p.node_count())
        throw InvalidArgument("partition covers " + std::to_string(p.node_count()) + " nodes, graph has " +
                              std::to_string(g.size()));
}

}  // namespace snmod

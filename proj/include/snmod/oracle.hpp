#pragma once

// Exhaustive maximization over every set partition of a small graph.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/louvain.hpp"
#include "snmod/metrics.hpp"
#include "snmod/partition.hpp"

namespace snmod {

inline constexpr std::size_t kMaxOracleNodes = 12;

/// Walks the set partitions of {0..n-1} as restricted growth strings
/// a[0] = 0, a[i] <= 1 + max(a[0..i-1]), in lexicographic order.
class PartitionIterator {
public:
    explicit PartitionIterator(std::size_t n) : labels_(n, 0), prefix_max_(n, 0) {
        if (n < 1 || n > kMaxOracleNodes)
            throw InvalidArgument("partition enumeration supports 1..12 elements, got " + std::to_string(n));
    }

    [[nodiscard]] const std::vector<std::uint8_t>& labels() const { return labels_; }
    [[nodiscard]] Partition partition() const { return Partition::from_labels(labels_); }

    /// Advances to the next string; false once the sequence is exhausted.
    bool next() {
        const std::size_t n = labels_.size();
        for (std::size_t i = n; i-- > 1;) {
            if (labels_[i] <= prefix_max_[i - 1]) {
                ++labels_[i];
                prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
                for (std::size_t j = i + 1; j < n; ++j) {
                    labels_[j] = 0;
                    prefix_max_[j] = prefix_max_[i];
                }
                return true;
            }
        }
        return false;
    }

private:
    std::vector<std::uint8_t> labels_;
    std::vector<std::uint8_t> prefix_max_;  // max(labels_[0..i])
};

/// Calls `visit(const std::vector<uint8_t>& labels)` once per set partition.
template <typename Visitor>
void enumerate_partitions(std::size_t n, Visitor&& visit) {
    PartitionIterator it(n);
    do {
        visit(it.labels());
    } while (it.next());
}

[[nodiscard]] inline std::vector<Partition> all_partitions(std::size_t n) {
    std::vector<Partition> out;
    enumerate_partitions(n, [&](const std::vector<std::uint8_t>& labels) { out.push_back(Partition::from_labels(labels)); });
    return out;
}

struct OracleResult {
    Partition partition;
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t evaluated = 0;
};

/// Arg-max of the objective over all partitions; the first maximum in
/// enumeration order wins ties.
[[nodiscard]] inline OracleResult oracle_best(const GeoGraph& g, const Objective& obj) {
    if (g.size() < 1 || g.size() > kMaxOracleNodes)
        throw InvalidArgument("oracle supports graphs of 1..12 nodes, got " + std::to_string(g.size()));
    OracleResult best;
    enumerate_partitions(g.size(), [&](const std::vector<std::uint8_t>& labels) {
        const Partition p = Partition::from_labels(labels);
        const double v = obj.spatial() ? sn_modularity(g, p, obj.params) : ng_modularity(g, p);
        ++best.evaluated;
        if (v > best.value) {
            best.value = v;
            best.partition = p;
        }
    });
    return best;
}

}  // namespace snmod

#pragma once

// Two-phase Louvain optimizer over either NG-modularity or SN-modularity, with an
// optional geographic join constraint. With the SN objective this is Louvain-SN:
// local moves may also re-isolate a node in a fresh community, and meta-nodes
// are placed at the centroid of the community they replace.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/geometry.hpp"
#include "snmod/metrics.hpp"
#include "snmod/partition.hpp"
#include "snmod/random.hpp"

namespace snmod {

enum class ObjectiveKind { ng, sn };

/// What the optimizer maximizes. NG ignores locations entirely.
struct Objective {
    ObjectiveKind kind = ObjectiveKind::ng;
    SNParams params;

    static Objective ng() { return {}; }
    static Objective sn(const SNParams& p) {
        p.validate();
        return {ObjectiveKind::sn, p};
    }

    [[nodiscard]] bool spatial() const { return kind == ObjectiveKind::sn; }
    [[nodiscard]] Metric metric() const { return params.metric; }
};

enum class NodeOrder { ascending, shuffled };

struct EngineConfig {
    /// A node may join a community only if it is within this distance of every
    /// current member. Infinity disables the check.
    double join_constraint_km = std::numeric_limits<double>::infinity();
    double min_gain = 1e-12;
    NodeOrder node_order = NodeOrder::ascending;
    std::uint64_t seed = 0;
    int max_levels = 50;

    void validate() const {
        if (!(join_constraint_km >= 0.0)) throw InvalidArgument("join constraint must be non-negative");
        if (!(min_gain >= 0.0)) throw InvalidArgument("min_gain must be non-negative");
        if (max_levels < 1) throw InvalidArgument("max_levels must be at least 1");
    }
};

/// Community graph of one Louvain level. `provenance[c]` lists the original
/// nodes folded into meta-node c.
struct MetaGraph {
    GeoGraph graph;
    std::vector<std::vector<NodeId>> provenance;
};

/// Collapses each community of `p` into a meta-node.
///
/// Meta edge (c, c') carries the summed weight between the two communities; the
/// self-loop of c carries the ordered-pair internal weight, so degrees and 2m
/// are preserved. Meta-node c sits at the centroid of its members' locations.
/// `prior` is the provenance of `g`'s own nodes (identity when empty).
[[nodiscard]] inline MetaGraph aggregate_graph(const GeoGraph& g, const Partition& p,
                                               Metric metric = Metric::haversine,
                                               const std::vector<std::vector<NodeId>>& prior = {}) {
    require_compatible(g, p);
    if (!prior.empty() && prior.size() != g.size()) throw InvalidArgument("aggregate_graph: provenance size mismatch");
    const std::size_t k = p.community_count();

    std::vector<std::vector<Neighbor>> adjacency(k);
    std::vector<double> scratch(k, 0.0);
    std::vector<CommunityId> touched;
    for (CommunityId c = 0; c < k; ++c) {
        touched.clear();
        for (NodeId i : p.members(c))
            for (const auto& nb : g.neighbors(i)) {
                const CommunityId d = p.community_of(nb.node);
                if (scratch[d] == 0.0) touched.push_back(d);
                scratch[d] += nb.weight;
            }
        std::sort(touched.begin(), touched.end());
        for (CommunityId d : touched) {
            adjacency[c].push_back({d, scratch[d]});
            scratch[d] = 0.0;
        }
    }

    std::vector<ExternalId> ids(k);
    std::vector<GeoPoint> locations(k);
    std::vector<std::vector<NodeId>> provenance(k);
    std::vector<GeoPoint> pts;
    for (CommunityId c = 0; c < k; ++c) {
        ids[c] = static_cast<ExternalId>(c);
        pts.clear();
        for (NodeId i : p.members(c)) {
            pts.push_back(g.location(i));
            if (prior.empty())
                provenance[c].push_back(i);
            else
                provenance[c].insert(provenance[c].end(), prior[i].begin(), prior[i].end());
        }
        std::sort(provenance[c].begin(), provenance[c].end());
        locations[c] = centroid(metric, pts);
    }
    return {GeoGraph(std::move(ids), std::move(locations), std::move(adjacency), g.two_m()), std::move(provenance)};
}

/// Mutable optimization state for one level of the hierarchy.
///
/// Community labels live in 0..n-1 and may be sparse during the pass; partition()
/// returns the canonical form. For the SN objective each community caches its
/// member list, the running sum of embedded member positions, its dispersion and
/// its current quality term; centroid and dispersion are recomputed exactly in
/// O(|c|) whenever a move is evaluated or applied.
class LouvainLevel {
public:
    static constexpr CommunityId kFresh = std::numeric_limits<CommunityId>::max();

    LouvainLevel(const GeoGraph& g, const Objective& obj, const EngineConfig& cfg, std::uint64_t level = 0)
        : g_(g), obj_(obj), cfg_(cfg), space_(obj.metric()), level_(level) {
        cfg_.validate();
        const std::size_t n = g.size();
        pos_.resize(n);
        for (NodeId i = 0; i < n; ++i) pos_[i] = space_.embed(g.location(i));
        comm_.resize(n);
        slot_.assign(n, 0);
        members_.resize(n);
        sum_in_.resize(n);
        sum_deg_.resize(n);
        pos_sum_.resize(n);
        disp_.assign(n, 0.0);
        quality_.resize(n);
        for (NodeId i = 0; i < n; ++i) {
            comm_[i] = i;
            members_[i] = {i};
            sum_in_[i] = g.self_loop(i);
            sum_deg_[i] = g.degree(i);
            pos_sum_[i] = pos_[i];
            quality_[i] = quality_term(sum_in_[i], sum_deg_[i], g.two_m(), 0.0);
        }
        weight_to_.assign(n, 0.0);
        constrained_ = std::isfinite(cfg_.join_constraint_km);
    }

    /// Initializes from an existing assignment (labels in 0..n-1).
    LouvainLevel(const GeoGraph& g, const Objective& obj, const EngineConfig& cfg, const Partition& start)
        : LouvainLevel(g, obj, cfg) {
        require_compatible(g, start);
        for (NodeId i = 0; i < g.size(); ++i) {
            const CommunityId target = start.community_of(i);
            if (target != comm_[i]) apply_move(i, target);
        }
    }

    [[nodiscard]] CommunityId community_of(NodeId i) const { return comm_[i]; }
    [[nodiscard]] std::size_t community_size(CommunityId c) const { return members_[c].size(); }

    [[nodiscard]] Partition partition() const { return Partition::from_labels(std::span<const CommunityId>(comm_)); }

    /// Sum of the cached quality terms: the objective at this level's resolution.
    [[nodiscard]] double working_objective() const {
        double total = 0.0;
        for (std::size_t c = 0; c < quality_.size(); ++c)
            if (!members_[c].empty()) total += quality_[c];
        return total;
    }

    /// Change in the working objective if i moves from its community to `target`
    /// (kFresh: a new singleton community). Moving to its own community is 0.
    [[nodiscard]] double move_gain(NodeId i, CommunityId target) {
        const CommunityId from = comm_[i];
        if (target == from) return 0.0;
        collect_neighbor_weights(i);
        const double removal = removal_delta(i);
        const double gain = target == kFresh ? removal : removal + insertion_delta(i, target);
        clear_neighbor_weights();
        return gain;
    }

    /// Whether the join constraint admits i into community c.
    [[nodiscard]] bool may_join(NodeId i, CommunityId c) const {
        if (!constrained_) return true;
        double worst = 0.0;
        for (NodeId j : members_[c]) worst = std::max(worst, EmbeddedSpace::proximity_key(pos_[i], pos_[j]));
        // Small slack absorbs the difference between chord and haversine rounding.
        return space_.key_to_distance(worst) <= cfg_.join_constraint_km * (1.0 + 1e-12) + 1e-9;
    }

    /// One sweep over all nodes in the configured order. Returns the number of moves.
    std::size_t sweep() {
        if (order_.empty()) build_order();
        std::size_t moved = 0;
        for (NodeId i : order_)
            if (try_move(i)) ++moved;
        return moved;
    }

    /// Sweeps until a full sweep moves nothing. Returns the total number of moves.
    std::size_t local_move_pass() {
        std::size_t total = 0;
        while (const std::size_t moved = sweep()) total += moved;
        return total;
    }

    /// Applies a move unconditionally (used for initialization and tests).
    void apply_move(NodeId i, CommunityId target) {
        const CommunityId from = comm_[i];
        if (target == kFresh) target = take_free_label();
        if (target == from) return;
        if (target >= members_.size()) throw InvalidArgument("apply_move: label out of range");
        if (members_[target].empty()) free_.erase(target);

        double to_from = 0.0, to_target = 0.0;
        for (const auto& nb : g_.neighbors(i)) {
            if (nb.node == i) continue;
            if (comm_[nb.node] == from) to_from += nb.weight;
            if (comm_[nb.node] == target) to_target += nb.weight;
        }
        const double self = g_.self_loop(i);
        const double k = g_.degree(i);

        sum_in_[from] -= 2.0 * to_from + self;
        sum_deg_[from] -= k;
        pos_sum_[from] -= pos_[i];
        auto& src = members_[from];
        const std::size_t at = slot_[i];
        src[at] = src.back();
        slot_[src[at]] = at;
        src.pop_back();

        sum_in_[target] += 2.0 * to_target + self;
        sum_deg_[target] += k;
        pos_sum_[target] += pos_[i];
        slot_[i] = members_[target].size();
        members_[target].push_back(i);
        comm_[i] = target;

        if (src.empty()) {
            sum_in_[from] = 0.0;
            sum_deg_[from] = 0.0;
            pos_sum_[from] = Vec3{};
            disp_[from] = 0.0;
            quality_[from] = 0.0;
            free_.insert(from);
        } else {
            refresh(from);
        }
        refresh(target);
    }

private:
    void build_order() {
        order_.resize(g_.size());
        for (NodeId i = 0; i < g_.size(); ++i) order_[i] = i;
        if (cfg_.node_order == NodeOrder::shuffled) {
            Rng rng(mix_seed(cfg_.seed, level_));
            shuffle(order_, rng);
        }
    }

    CommunityId take_free_label() {
        if (free_.empty()) throw InvalidArgument("no free community label");
        return *free_.begin();
    }

    void refresh(CommunityId c) {
        disp_[c] = obj_.spatial() ? dispersion(c, std::nullopt, std::nullopt) : 0.0;
        quality_[c] = quality_term(sum_in_[c], sum_deg_[c], g_.two_m(), disp_[c]);
    }

    /// Dispersion of community c with `extra` added and/or `excluded` removed.
    double dispersion(CommunityId c, std::optional<NodeId> extra, std::optional<NodeId> excluded) const {
        Vec3 sum = pos_sum_[c];
        std::size_t count = members_[c].size();
        if (extra) {
            sum += pos_[*extra];
            ++count;
        }
        if (excluded) {
            sum -= pos_[*excluded];
            --count;
        }
        if (count <= 1) return 0.0;
        const Vec3* fallback = nullptr;
        for (NodeId j : members_[c])
            if (!excluded || j != *excluded) {
                fallback = &pos_[j];
                break;
            }
        if (fallback == nullptr) fallback = &pos_[*extra];
        const Vec3 center = space_.centroid_from_sum(sum, count, *fallback);
        const double inv_sigma = 1.0 / obj_.params.sigma_km;

        if (obj_.params.agg == Aggregation::max) {
            double worst = 0.0;
            for (NodeId j : members_[c])
                if (!excluded || j != *excluded) worst = std::max(worst, EmbeddedSpace::proximity_key(pos_[j], center));
            if (extra) worst = std::max(worst, EmbeddedSpace::proximity_key(pos_[*extra], center));
            const double r = space_.key_to_distance(worst) * inv_sigma;
            return r * r;
        }
        double acc = 0.0;
        auto add = [&](NodeId j) {
            const double r = space_.distance(pos_[j], center) * inv_sigma;
            acc += r * r;
        };
        for (NodeId j : members_[c])
            if (!excluded || j != *excluded) add(j);
        if (extra) add(*extra);
        return acc;
    }

    void collect_neighbor_weights(NodeId i) {
        touched_.clear();
        for (const auto& nb : g_.neighbors(i)) {
            if (nb.node == i) continue;
            const CommunityId c = comm_[nb.node];
            if (weight_to_[c] == 0.0) touched_.push_back(c);
            weight_to_[c] += nb.weight;
        }
        std::sort(touched_.begin(), touched_.end());
    }

    void clear_neighbor_weights() {
        for (CommunityId c : touched_) weight_to_[c] = 0.0;
        touched_.clear();
    }

    /// q(A - i) + q({i}) - q(A), where A is i's current community.
    double removal_delta(NodeId i) const {
        const CommunityId a = comm_[i];
        const double self = g_.self_loop(i);
        const double k = g_.degree(i);
        const double q_alone = quality_term(self, k, g_.two_m(), 0.0);
        if (members_[a].size() == 1) return 0.0;
        const double in_rest = sum_in_[a] - 2.0 * weight_to_[a] - self;
        const double deg_rest = sum_deg_[a] - k;
        const double disp_rest = obj_.spatial() ? dispersion(a, std::nullopt, i) : 0.0;
        return quality_term(in_rest, deg_rest, g_.two_m(), disp_rest) + q_alone - quality_[a];
    }

    /// q(B + i) - q(B) - q({i}), with i assumed isolated.
    double insertion_delta(NodeId i, CommunityId b) const {
        const double self = g_.self_loop(i);
        const double k = g_.degree(i);
        const double q_alone = quality_term(self, k, g_.two_m(), 0.0);
        if (members_[b].empty()) return 0.0;
        const double in_new = sum_in_[b] + 2.0 * weight_to_[b] + self;
        const double deg_new = sum_deg_[b] + k;
        const double disp_new = obj_.spatial() ? dispersion(b, i, std::nullopt) : 0.0;
        return quality_term(in_new, deg_new, g_.two_m(), disp_new) - quality_[b] - q_alone;
    }

    bool try_move(NodeId i) {
        const CommunityId from = comm_[i];
        collect_neighbor_weights(i);
        const double removal = removal_delta(i);

        double best_gain = 0.0;
        CommunityId best = from;
        auto offer = [&](CommunityId c, double gain) {
            if (gain > best_gain || (gain == best_gain && best != from && c < best)) {
                best_gain = gain;
                best = c;
            }
        };
        for (CommunityId c : touched_) {
            if (c == from || !may_join(i, c)) continue;
            offer(c, removal + insertion_delta(i, c));
        }
        if (members_[from].size() > 1) offer(*free_.begin(), removal);
        clear_neighbor_weights();

        if (best == from || !(best_gain > cfg_.min_gain)) return false;
        apply_move(i, best);
        return true;
    }

    const GeoGraph& g_;
    Objective obj_;
    EngineConfig cfg_;
    EmbeddedSpace space_;
    std::uint64_t level_;
    bool constrained_ = false;

    std::vector<Vec3> pos_;
    std::vector<CommunityId> comm_;
    std::vector<std::size_t> slot_;  // index of each node inside its member list
    std::vector<std::vector<NodeId>> members_;
    std::vector<double> sum_in_;
    std::vector<double> sum_deg_;
    std::vector<Vec3> pos_sum_;
    std::vector<double> disp_;
    std::vector<double> quality_;
    std::set<CommunityId> free_;

    std::vector<double> weight_to_;
    std::vector<CommunityId> touched_;
    std::vector<NodeId> order_;
};

struct LouvainResult {
    Partition partition;  // over the original nodes
    int levels = 0;       // levels on which at least one move happened
    std::size_t moves = 0;
    /// Working objective at the end of each level (meta-level resolution).
    std::vector<double> level_objectives;
    /// Objective re-evaluated on the original graph (ng or sn per the objective).
    double score = 0.0;
};

/// Runs the full hierarchy from the singleton partition.
[[nodiscard]] inline LouvainResult run_louvain(const GeoGraph& g, const Objective& obj, const EngineConfig& cfg = {}) {
    cfg.validate();
    if (obj.spatial()) obj.params.validate();

    LouvainResult result;
    std::vector<CommunityId> to_meta(g.size());
    for (NodeId i = 0; i < g.size(); ++i) to_meta[i] = i;

    std::optional<GeoGraph> meta;
    const GeoGraph* current = &g;
    for (int level = 0; level < cfg.max_levels; ++level) {
        LouvainLevel state(*current, obj, cfg, static_cast<std::uint64_t>(level));
        const std::size_t moved = state.local_move_pass();
        result.level_objectives.push_back(state.working_objective());
        if (moved == 0) break;
        result.moves += moved;
        ++result.levels;

        const Partition p = state.partition();
        for (auto& m : to_meta) m = p.community_of(m);
        if (p.community_count() == current->size()) break;
        meta = aggregate_graph(*current, p, obj.metric()).graph;
        current = &*meta;
    }

    result.partition = Partition::from_labels(std::span<const CommunityId>(to_meta));
    result.score = obj.spatial() ? sn_modularity(g, result.partition, obj.params) : ng_modularity(g, result.partition);
    return result;
}

}  // namespace snmod

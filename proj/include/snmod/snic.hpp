#pragma once

// Spatially Near Iterative Constraining: repeated Louvain-SN runs, each limited
// to joins within the widest community span of the previous run.

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "snmod/geograph.hpp"
#include "snmod/geometry.hpp"
#include "snmod/louvain.hpp"
#include "snmod/metrics.hpp"
#include "snmod/partition.hpp"

namespace snmod {

struct SnicConfig {
    SNParams params;
    int max_iters = 100;
    EngineConfig engine;

    void validate() const {
        params.validate();
        engine.validate();
        if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    }
};

struct SnicIteration {
    int iteration = 0;  // 1-based
    double constraint_km = 0.0;
    double sn_modularity = 0.0;
    double span_km = 0.0;
    double seconds = 0.0;
};

struct SnicResult {
    Partition partition;
    double sn_modularity = 0.0;
    int best_iteration = 0;
    std::vector<SnicIteration> trace;
};

/// Widest member-to-member distance over all communities of `p`.
[[nodiscard]] inline double partition_max_span(const GeoGraph& g, const Partition& p,
                                               Metric metric = Metric::haversine) {
    require_compatible(g, p);
    double best = 0.0;
    std::vector<GeoPoint> pts;
    for (const auto& members : p.communities()) {
        pts.clear();
        for (NodeId v : members) pts.push_back(g.location(v));
        best = std::max(best, max_pairwise_span_km(pts, metric));
    }
    return best;
}

/// Iteration 1 is unconstrained; each later iteration uses the previous
/// partition's max span as the join constraint. Stops when that span is 0, when
/// it fails to shrink, or after max_iters. Returns the best-scoring iterate
/// (earliest on ties).
[[nodiscard]] inline SnicResult run_snic(const GeoGraph& g, const SnicConfig& cfg) {
    cfg.validate();
    const Objective obj = Objective::sn(cfg.params);
    SnicResult result;
    double constraint = std::numeric_limits<double>::infinity();

    for (int t = 1; t <= cfg.max_iters; ++t) {
        const auto start = std::chrono::steady_clock::now();
        EngineConfig engine = cfg.engine;
        engine.join_constraint_km = constraint;
        LouvainResult run = run_louvain(g, obj, engine);
        const double span = partition_max_span(g, run.partition, cfg.params.metric);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        result.trace.push_back({t, constraint, run.score, span, seconds});
        if (t == 1 || run.score > result.sn_modularity) {
            result.sn_modularity = run.score;
            result.partition = std::move(run.partition);
            result.best_iteration = t;
        }
        if (span <= 0.0 || span >= constraint) break;
        constraint = span;
    }
    return result;
}

/// CSV: iteration,constraint_km,sn_modularity,span_km,seconds
inline void write_trace_csv(std::ostream& out, const std::vector<SnicIteration>& trace) {
    out << "iteration,constraint_km,sn_modularity,span_km,seconds\n";
    const auto old = out.precision(17);
    for (const auto& it : trace) {
        out << it.iteration << ',';
        if (std::isinf(it.constraint_km))
            out << "inf";
        else
            out << it.constraint_km;
        out << ',' << it.sn_modularity << ',' << it.span_km << ',' << it.seconds << '\n';
    }
    out.precision(old);
}

}  // namespace snmod

#pragma once

// Experiment plumbing shared by the CLI and the acceptance suite: running one
// of the three detectors, and sweeping sigma over datasets with CSV output.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/louvain.hpp"
#include "snmod/metrics.hpp"
#include "snmod/partition.hpp"
#include "snmod/snic.hpp"

namespace snmod {

enum class Algorithm { louvain, louvain_sn, snic };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::louvain: return "louvain";
        case Algorithm::louvain_sn: return "louvain-sn";
        case Algorithm::snic: return "snic";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    if (s == "louvain") return Algorithm::louvain;
    if (s == "louvain-sn") return Algorithm::louvain_sn;
    if (s == "snic") return Algorithm::snic;
    throw InvalidArgument("unknown algorithm '" + std::string(s) + "'");
}

struct RunOutcome {
    Algorithm algorithm = Algorithm::louvain;
    Partition partition;
    double sn_modularity = 0.0;
    double ng_modularity = 0.0;
    double seconds = 0.0;
    int iterations = 0;  // Louvain levels, or SNIC iterations
    std::vector<SnicIteration> trace;
};

/// Runs one detector and scores its partition under both metrics.
[[nodiscard]] inline RunOutcome run_algorithm(const GeoGraph& g, Algorithm algo, const SNParams& params,
                                              const EngineConfig& engine = {}, int max_iters = 100) {
    params.validate();
    RunOutcome out;
    out.algorithm = algo;
    const auto start = std::chrono::steady_clock::now();
    switch (algo) {
        case Algorithm::louvain: {
            auto r = run_louvain(g, Objective::ng(), engine);
            out.partition = std::move(r.partition);
            out.iterations = r.levels;
            break;
        }
        case Algorithm::louvain_sn: {
            auto r = run_louvain(g, Objective::sn(params), engine);
            out.partition = std::move(r.partition);
            out.iterations = r.levels;
            break;
        }
        case Algorithm::snic: {
            auto r = run_snic(g, SnicConfig{params, max_iters, engine});
            out.partition = std::move(r.partition);
            out.iterations = static_cast<int>(r.trace.size());
            out.trace = std::move(r.trace);
            break;
        }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.ng_modularity = ng_modularity(g, out.partition);
    out.sn_modularity = sn_modularity(g, out.partition, params);
    return out;
}

struct SweepSpec {
    std::vector<double> sigmas{300, 500, 1000, 2000, 3000, 4000, 5000};
    std::vector<Algorithm> algorithms{Algorithm::louvain, Algorithm::louvain_sn, Algorithm::snic};
    std::vector<std::uint64_t> seeds{1};
    Aggregation agg = Aggregation::max;
    Metric metric = Metric::haversine;
    NodeOrder node_order = NodeOrder::ascending;
    int max_iters = 100;

    void validate() const {
        if (sigmas.empty() || algorithms.empty() || seeds.empty()) throw InvalidArgument("sweep lists must be nonempty");
        for (double s : sigmas)
            if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("sigma values must be positive");
        if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    }
};

struct SweepRow {
    std::string dataset;
    double sigma_km = 0.0;
    Algorithm algorithm = Algorithm::louvain;
    std::uint64_t seed = 0;
    double sn_modularity = 0.0;
    double ng_modularity = 0.0;
    double seconds = 0.0;
    int iterations = 0;
};

/// Relative gain of an algorithm over plain Louvain at one sweep cell.
struct ImprovementRow {
    std::string dataset;
    double sigma_km = 0.0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::louvain_sn;
    double sn_louvain = 0.0;
    double sn_algorithm = 0.0;
    double percent = 0.0;   // NaN when |sn_louvain| < 1e-12
    double absolute = 0.0;  // sn_algorithm - sn_louvain
};

[[nodiscard]] inline double percent_improvement(double algorithm_value, double louvain_value) {
    if (std::abs(louvain_value) < 1e-12) return std::numeric_limits<double>::quiet_NaN();
    return (algorithm_value - louvain_value) / std::abs(louvain_value) * 100.0;
}

struct SweepSinks {
    std::function<void(const SweepRow&)> row;
    std::function<void(const ImprovementRow&)> improvement;
    /// Receives every SNIC trace: (dataset, sigma, seed, trace).
    std::function<void(const std::string&, double, std::uint64_t, const std::vector<SnicIteration>&)> trace;
};

/// Runs every (sigma, algorithm, seed) cell on one dataset. Plain Louvain does
/// not depend on sigma, so it runs once per seed and is re-scored at each sigma.
inline void run_sweep(const std::string& dataset, const GeoGraph& g, const SweepSpec& spec, const SweepSinks& sinks) {
    spec.validate();
    for (const std::uint64_t seed : spec.seeds) {
        EngineConfig engine;
        engine.node_order = spec.node_order;
        engine.seed = seed;

        std::optional<LouvainResult> louvain;
        double louvain_seconds = 0.0;
        {
            const auto start = std::chrono::steady_clock::now();
            louvain = run_louvain(g, Objective::ng(), engine);
            louvain_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        const double louvain_ng = ng_modularity(g, louvain->partition);

        for (const double sigma : spec.sigmas) {
            const SNParams params{sigma, spec.agg, spec.metric};
            const double louvain_sn = sn_modularity(g, louvain->partition, params);
            for (const Algorithm algo : spec.algorithms) {
                SweepRow row{dataset, sigma, algo, seed, 0.0, 0.0, 0.0, 0};
                if (algo == Algorithm::louvain) {
                    row.sn_modularity = louvain_sn;
                    row.ng_modularity = louvain_ng;
                    row.seconds = louvain_seconds;
                    row.iterations = louvain->levels;
                } else {
                    const RunOutcome out = run_algorithm(g, algo, params, engine, spec.max_iters);
                    row.sn_modularity = out.sn_modularity;
                    row.ng_modularity = out.ng_modularity;
                    row.seconds = out.seconds;
                    row.iterations = out.iterations;
                    if (sinks.improvement)
                        sinks.improvement({dataset, sigma, seed, algo, louvain_sn, out.sn_modularity,
                                           percent_improvement(out.sn_modularity, louvain_sn),
                                           out.sn_modularity - louvain_sn});
                    if (algo == Algorithm::snic && sinks.trace) sinks.trace(dataset, sigma, seed, out.trace);
                }
                if (sinks.row) sinks.row(row);
            }
        }
    }
}

inline constexpr std::string_view kSweepHeader =
    "dataset,sigma_km,algorithm,seed,sn_modularity,ng_modularity,seconds,iterations";
inline constexpr std::string_view kImprovementHeader =
    "dataset,sigma_km,seed,algorithm,sn_louvain,sn_algorithm,percent_improvement,absolute_improvement";

namespace detail {
inline void write_number(std::ostream& out, double v) {
    if (std::isnan(v))
        out << "nan";
    else
        out << v;
}
}  // namespace detail

inline void write_sweep_row(std::ostream& out, const SweepRow& r) {
    const auto old = out.precision(17);
    out << r.dataset << ',' << r.sigma_km << ',' << to_string(r.algorithm) << ',' << r.seed << ',' << r.sn_modularity
        << ',' << r.ng_modularity << ',' << r.seconds << ',' << r.iterations << '\n';
    out.precision(old);
}

inline void write_improvement_row(std::ostream& out, const ImprovementRow& r) {
    const auto old = out.precision(17);
    out << r.dataset << ',' << r.sigma_km << ',' << r.seed << ',' << to_string(r.algorithm) << ',' << r.sn_louvain
        << ',' << r.sn_algorithm << ',';
    detail::write_number(out, r.percent);
    out << ',' << r.absolute << '\n';
    out.precision(old);
}

}  // namespace snmod

// snmod: spatially-near community detection from the command line.
//
//   snmod detect          run louvain | louvain-sn | snic and write a partition
//   snmod score           evaluate a partition file
//   snmod sweep           sigma sweep over files or synthetic graphs, CSV out
//   snmod export-geojson  nodes and edges as a GeoJSON FeatureCollection
//   snmod sample          snowball-sample a graph into new edge/coord files
//   snmod synth           write a planted geo-cluster graph to files
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snmod/snmod.hpp"

namespace {

namespace fs = std::filesystem;
using namespace snmod;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphInputs {
    std::string edges;
    std::string coords;
    std::string coord_policy = "mean";
    std::string missing = "error";

    void add_to(CLI::App* cmd, bool coords_required = false) {
        cmd->add_option("--edges", edges, "edge list: u<TAB>v[<TAB>w]")->required();
        auto* c = cmd->add_option("--coords", coords, "node,lat,lon CSV or TAB check-in rows");
        if (coords_required) c->required();
        cmd->add_option("--coord-policy", coord_policy, "mean | last")->check(CLI::IsMember({"mean", "last"}));
        cmd->add_option("--missing", missing, "error | drop")->check(CLI::IsMember({"error", "drop"}));
    }

    [[nodiscard]] bool has_coords() const { return !coords.empty(); }

    [[nodiscard]] GeoGraph load() const {
        LoadOptions opts{parse_coord_policy(coord_policy), parse_missing_policy(missing)};
        std::optional<fs::path> coord_path;
        if (has_coords()) coord_path = coords;
        return load_graph_files(edges, coord_path, opts);
    }
};

struct ScoreParams {
    double sigma = 1000.0;
    std::string agg = "max";
    std::string metric = "haversine";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--sigma", sigma, "distance scale in km")->check(CLI::PositiveNumber);
        cmd->add_option("--agg", agg, "max | sum")->check(CLI::IsMember({"max", "sum"}));
        cmd->add_option("--metric", metric, "haversine | planar")->check(CLI::IsMember({"haversine", "planar"}));
    }

    [[nodiscard]] SNParams params() const { return {sigma, parse_aggregation(agg), parse_metric(metric)}; }
};

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------------------

struct DetectCmd {
    GraphInputs in;
    ScoreParams score;
    std::string algo = "louvain";
    int max_iters = 100;
    std::uint64_t seed = 0;
    std::string order = "ascending";
    std::string out;
    std::string trace;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("detect", "find communities");
        in.add_to(cmd);
        score.add_to(cmd);
        cmd->add_option("--algo", algo, "louvain | louvain-sn | snic")
            ->check(CLI::IsMember({"louvain", "louvain-sn", "snic"}));
        cmd->add_option("--max-iters", max_iters, "SNIC iteration cap")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "node-order seed (with --order shuffled)");
        cmd->add_option("--order", order, "ascending | shuffled")->check(CLI::IsMember({"ascending", "shuffled"}));
        cmd->add_option("--out", out, "partition CSV")->required();
        cmd->add_option("--trace", trace, "SNIC per-iteration CSV");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const Algorithm a = parse_algorithm(algo);
        if (a != Algorithm::louvain && !in.has_coords()) throw UsageError(algo + " needs --coords");
        const GeoGraph g = in.load();
        EngineConfig engine;
        engine.seed = seed;
        engine.node_order = order == "shuffled" ? NodeOrder::shuffled : NodeOrder::ascending;
        const RunOutcome r = run_algorithm(g, a, score.params(), engine, max_iters);

        auto file = open_out(out);
        write_partition_csv(file, g, r.partition);
        if (!trace.empty()) {
            auto t = open_out(trace);
            write_trace_csv(t, r.trace);
        }
        std::cout << "algorithm=" << algo << " n=" << g.size() << " m=" << g.edge_count()
                  << " communities=" << r.partition.community_count() << " ng_modularity=" << fmt(r.ng_modularity)
                  << " sn_modularity=" << (in.has_coords() ? fmt(r.sn_modularity) : "na")
                  << " seconds=" << fmt(r.seconds) << '\n';
    }
};

struct ScoreCmd {
    GraphInputs in;
    ScoreParams score;
    std::string partition;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("score", "evaluate a partition");
        in.add_to(cmd);
        score.add_to(cmd);
        cmd->add_option("--partition", partition, "node,community CSV")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const GeoGraph g = in.load();
        const Partition p = read_partition_file(partition, g);
        const SNParams params = score.params();
        std::cout << "ng_modularity,sn_modularity\n"
                  << fmt(ng_modularity(g, p)) << ',' << fmt(sn_modularity(g, p, params)) << '\n';
        std::cout << "community,size,sum_in,sum_deg,dispersion,quality\n";
        const auto stats = partition_stats(g, p, params);
        for (CommunityId c = 0; c < p.community_count(); ++c) {
            const auto& s = stats[c];
            std::cout << c << ',' << p.members(c).size() << ',' << fmt(s.sum_in) << ',' << fmt(s.sum_deg) << ','
                      << fmt(s.dispersion) << ',' << fmt(quality_term(s.sum_in, s.sum_deg, g.two_m(), s.dispersion))
                      << '\n';
        }
    }
};

struct SweepCmd {
    GraphInputs in;
    std::vector<double> sigmas{300, 500, 1000, 2000, 3000, 4000, 5000};
    std::vector<std::string> algos{"louvain", "louvain-sn", "snic"};
    std::vector<std::uint64_t> seeds{1};
    std::string agg = "max";
    std::string metric = "haversine";
    std::string order = "ascending";
    int max_iters = 100;
    std::string out;
    std::string improvement;
    std::string trace_dir;
    std::string dataset_name;

    bool synthetic = false;
    SyntheticSpec synth;
    int datasets = 1;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("sweep", "sigma sweep with runtime measurement");
        cmd->add_option("--edges", in.edges, "edge list (omit with --synthetic)");
        cmd->add_option("--coords", in.coords, "coordinates (omit with --synthetic)");
        cmd->add_option("--coord-policy", in.coord_policy)->check(CLI::IsMember({"mean", "last"}));
        cmd->add_option("--missing", in.missing)->check(CLI::IsMember({"error", "drop"}));
        cmd->add_option("--name", dataset_name, "dataset label for file input");
        cmd->add_option("--sigmas", sigmas, "sigma values in km")->delimiter(',');
        cmd->add_option("--algos", algos, "subset of louvain,louvain-sn,snic")->delimiter(',');
        cmd->add_option("--seeds", seeds, "node-order seeds")->delimiter(',');
        cmd->add_option("--agg", agg)->check(CLI::IsMember({"max", "sum"}));
        cmd->add_option("--metric", metric)->check(CLI::IsMember({"haversine", "planar"}));
        cmd->add_option("--order", order)->check(CLI::IsMember({"ascending", "shuffled"}));
        cmd->add_option("--max-iters", max_iters)->check(CLI::PositiveNumber);
        cmd->add_option("--out", out, "results CSV (appended when it exists)")->required();
        cmd->add_option("--improvement", improvement, "percent-improvement CSV (default: <out>.improvement.csv)");
        cmd->add_option("--trace-dir", trace_dir, "directory for SNIC trace CSVs");
        cmd->add_flag("--synthetic", synthetic, "use planted geo-cluster graphs");
        cmd->add_option("--datasets", datasets, "number of synthetic graphs")->check(CLI::PositiveNumber);
        cmd->add_option("--clusters", synth.clusters);
        cmd->add_option("--nodes", synth.nodes);
        cmd->add_option("--p-intra", synth.p_intra);
        cmd->add_option("--p-inter", synth.p_inter);
        cmd->add_option("--spacing-km", synth.spacing_km);
        cmd->add_option("--spread-km", synth.spread_km);
        cmd->add_option("--mix", synth.mix);
        cmd->add_option("--synthetic-seed", synth.seed, "seed of the first synthetic graph");
        cmd->callback([this] { run(); });
    }

    static void open_csv(std::ofstream& file, const std::string& path, std::string_view header) {
        bool fresh = true;
        if (fs::exists(path) && fs::file_size(path) > 0) {
            std::ifstream existing(path);
            std::string first;
            std::getline(existing, first);
            if (first != header) throw DataError(path + " exists with a different header");
            fresh = false;
        }
        file = open_out(path, std::ios::app);
        if (fresh) file << header << '\n';
    }

    void run() const {
        if (!synthetic && (in.edges.empty() || in.coords.empty()))
            throw UsageError("sweep needs --edges and --coords, or --synthetic");
        SweepSpec spec;
        spec.sigmas = sigmas;
        spec.algorithms.clear();
        for (const auto& a : algos) spec.algorithms.push_back(parse_algorithm(a));
        spec.seeds = seeds;
        spec.agg = parse_aggregation(agg);
        spec.metric = parse_metric(metric);
        spec.node_order = order == "shuffled" ? NodeOrder::shuffled : NodeOrder::ascending;
        spec.max_iters = max_iters;
        spec.validate();

        std::ofstream rows, gains;
        open_csv(rows, out, kSweepHeader);
        open_csv(gains, improvement.empty() ? out + ".improvement.csv" : improvement, kImprovementHeader);
        if (!trace_dir.empty()) fs::create_directories(trace_dir);

        SweepSinks sinks;
        sinks.row = [&](const SweepRow& r) {
            write_sweep_row(rows, r);
            rows.flush();
        };
        sinks.improvement = [&](const ImprovementRow& r) { write_improvement_row(gains, r); };
        if (!trace_dir.empty())
            sinks.trace = [&](const std::string& name, double sigma, std::uint64_t seed,
                              const std::vector<SnicIteration>& trace) {
                std::ostringstream file;
                file << name << "_sigma" << sigma << "_seed" << seed << ".csv";
                auto t = open_out((fs::path(trace_dir) / file.str()).string());
                write_trace_csv(t, trace);
            };

        if (synthetic) {
            for (int d = 0; d < datasets; ++d) {
                SyntheticSpec s = synth;
                s.seed = synth.seed + static_cast<std::uint64_t>(d);
                const auto sg = make_planted_geo_graph(s);
                run_sweep("synthetic" + std::to_string(s.seed), sg.graph, spec, sinks);
            }
        } else {
            const GeoGraph g = in.load();
            run_sweep(dataset_name.empty() ? fs::path(in.edges).stem().string() : dataset_name, g, spec, sinks);
        }
    }
};

struct ExportCmd {
    GraphInputs in;
    std::string partition;
    std::string out;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("export-geojson", "write nodes and edges as GeoJSON");
        in.add_to(cmd, true);
        cmd->add_option("--partition", partition, "node,community CSV")->required();
        cmd->add_option("--out", out, "GeoJSON path")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const GeoGraph g = in.load();
        const Partition p = read_partition_file(partition, g);
        auto file = open_out(out);
        file << to_geojson(g, p).dump() << '\n';
    }
};

void write_graph_files(const GeoGraph& g, const std::string& edges_path, const std::string& coords_path) {
    auto edges = open_out(edges_path);
    edges.precision(17);
    for (const auto& e : g.edges())
        edges << g.external_id(e.u) << '\t' << g.external_id(e.v) << '\t' << e.weight << '\n';
    auto coords = open_out(coords_path);
    coords.precision(17);
    coords << "node,lat,lon\n";
    for (NodeId i = 0; i < g.size(); ++i)
        coords << g.external_id(i) << ',' << g.location(i).lat << ',' << g.location(i).lon << '\n';
}

struct SampleCmd {
    GraphInputs in;
    std::size_t size = 1000;
    std::uint64_t seed = 0;
    std::string out_edges;
    std::string out_coords;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("sample", "snowball-sample a node-induced subgraph");
        in.add_to(cmd, true);
        cmd->add_option("--size", size, "target node count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed);
        cmd->add_option("--out-edges", out_edges)->required();
        cmd->add_option("--out-coords", out_coords)->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const GeoGraph g = in.load();
        const auto s = snowball_sample(g, {size, seed});
        write_graph_files(s.graph, out_edges, out_coords);
        std::cout << "n=" << s.graph.size() << " m=" << s.graph.edge_count() << " expansions=" << s.picks.size()
                  << '\n';
    }
};

struct SynthCmd {
    SyntheticSpec synth;
    std::string out_edges;
    std::string out_coords;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("synth", "write a planted geo-cluster graph");
        cmd->add_option("--clusters", synth.clusters);
        cmd->add_option("--nodes", synth.nodes);
        cmd->add_option("--p-intra", synth.p_intra);
        cmd->add_option("--p-inter", synth.p_inter);
        cmd->add_option("--spacing-km", synth.spacing_km);
        cmd->add_option("--spread-km", synth.spread_km);
        cmd->add_option("--mix", synth.mix);
        cmd->add_option("--seed", synth.seed);
        cmd->add_option("--out-edges", out_edges)->required();
        cmd->add_option("--out-coords", out_coords)->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const auto sg = make_planted_geo_graph(synth);
        write_graph_files(sg.graph, out_edges, out_coords);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatially-near community detection"};
    app.require_subcommand(1);
    DetectCmd detect;
    ScoreCmd score;
    SweepCmd sweep;
    ExportCmd exporter;
    SampleCmd sample;
    SynthCmd synth;
    detect.attach(app);
    score.attach(app);
    sweep.attach(app);
    exporter.attach(app);
    sample.attach(app);
    synth.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}

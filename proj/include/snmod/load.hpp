#pragma once

// Ingestion of edge lists and coordinate files (plain CSV or Brightkite-style
// check-in dumps) into a GeoGraph.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snmod/error.hpp"
#include "snmod/geograph.hpp"
#include "snmod/geometry.hpp"

namespace snmod {

/// How repeated coordinates for one node collapse to a single location.
///  - mean: spherical centroid of every observation.
///  - last: the most recent check-in by timestamp (file order for plain CSV).
enum class CoordPolicy { mean, last };

/// What happens to a node that has edges but no coordinate.
enum class MissingPolicy { error, drop };

struct LoadOptions {
    CoordPolicy coord_policy = CoordPolicy::mean;
    MissingPolicy missing_policy = MissingPolicy::error;
};

inline CoordPolicy parse_coord_policy(std::string_view s) {
    if (s == "mean") return CoordPolicy::mean;
    if (s == "last") return CoordPolicy::last;
    throw InvalidArgument("unknown coordinate policy '" + std::string(s) + "'");
}

inline MissingPolicy parse_missing_policy(std::string_view s) {
    if (s == "error") return MissingPolicy::error;
    if (s == "drop") return MissingPolicy::drop;
    throw InvalidArgument("unknown missing-coordinate policy '" + std::string(s) + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(delim, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const auto b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    // from_chars rejects a leading '+'; accept it.
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace detail

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]` into UTC seconds.
inline std::optional<double> parse_iso8601(std::string_view s) {
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<std::int64_t> {
        if (pos + len > s.size()) return std::nullopt;
        return detail::parse_int(s.substr(pos, len));
    };
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        s[16] != ':')
        return std::nullopt;
    const auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2), se = num(17, 2);
    if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
    if (*mo < 1 || *mo > 12 || *d < 1 || *d > 31 || *h > 23 || *mi > 59 || *se > 60) return std::nullopt;
    double seconds = static_cast<double>(detail::days_from_civil(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d))) * 86400.0 +
                     static_cast<double>(*h * 3600 + *mi * 60 + *se);
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        const auto b = ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == b) return std::nullopt;
        seconds += *detail::parse_double("0." + std::string(s.substr(b, pos - b)));
    }
    if (pos == s.size()) return seconds;
    if (s[pos] == 'Z' && pos + 1 == s.size()) return seconds;
    if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
        const auto oh = num(pos + 1, 2), om = num(pos + 4, 2);
        if (!oh || !om) return std::nullopt;
        const double offset = static_cast<double>(*oh * 3600 + *om * 60);
        return s[pos] == '+' ? seconds - offset : seconds + offset;
    }
    return std::nullopt;
}

struct RawEdge {
    ExternalId u;
    ExternalId v;
    double weight;
};

/// Reads `u<TAB>v[<TAB>w]` lines. Blank and `#` lines are skipped.
inline std::vector<RawEdge> read_edge_list(std::istream& in, const std::string& source = "edges") {
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = detail::split_ws(body);
        if (fields.size() != 2 && fields.size() != 3)
            throw ParseError(source, lineno, "expected 2 or 3 fields, found " + std::to_string(fields.size()));
        const auto u = detail::parse_int(fields[0]);
        const auto v = detail::parse_int(fields[1]);
        if (!u || !v) throw ParseError(source, lineno, "node id is not an integer");
        double w = 1.0;
        if (fields.size() == 3) {
            const auto parsed = detail::parse_double(fields[2]);
            if (!parsed || !std::isfinite(*parsed)) throw ParseError(source, lineno, "weight is not a number");
            w = *parsed;
        }
        if (!(w > 0.0)) throw ParseError(source, lineno, "edge weight must be positive");
        if (*u == *v) throw ParseError(source, lineno, "self-loop on node " + std::to_string(*u));
        edges.push_back({*u, *v, w});
    }
    return edges;
}

struct CoordObservation {
    GeoPoint point;
    double timestamp;  // seconds since epoch; file order for plain CSV
};

/// Reads either `node,lat,lon` CSV (optional header) or 5-column TAB check-ins
/// `user<TAB>timestamp<TAB>lat<TAB>lon<TAB>place`. The format is decided by the
/// first data line: a TAB-separated 5-field row selects check-in mode.
inline std::map<ExternalId, std::vector<CoordObservation>> read_coordinates(std::istream& in,
                                                                            const std::string& source = "coords") {
    std::map<ExternalId, std::vector<CoordObservation>> out;
    enum class Format { unknown, csv, checkin } format = Format::unknown;
    std::string line;
    std::size_t lineno = 0;
    std::size_t data_rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        // Split the untrimmed row so an empty trailing place field still counts.
        std::string_view raw = line;
        while (!raw.empty() && (raw.back() == '\r' || raw.back() == '\n')) raw.remove_suffix(1);
        if (format == Format::unknown) format = detail::split(raw, '\t').size() >= 4 ? Format::checkin : Format::csv;
        if (format == Format::checkin) {
            auto f = detail::split(raw, '\t');
            if (f.size() != 4 && f.size() != 5)
                throw ParseError(source, lineno, "check-in row needs user, time, lat, lon[, place] separated by TABs");
            for (auto& field : f) field = detail::trim(field);
            const auto id = detail::parse_int(f[0]);
            if (!id) throw ParseError(source, lineno, "user id is not an integer");
            const auto ts = parse_iso8601(f[1]);
            if (!ts) throw ParseError(source, lineno, "timestamp is not ISO-8601");
            if (f[2].empty() && f[3].empty()) continue;  // check-in without a position
            const auto lat = detail::parse_double(f[2]);
            const auto lon = detail::parse_double(f[3]);
            if (!lat || !lon) throw ParseError(source, lineno, "latitude/longitude is not a number");
            const GeoPoint p{*lat, normalize_lon(*lon)};
            if (!is_valid(p) || std::abs(*lon) > 180.0) throw ParseError(source, lineno, "coordinate out of range");
            out[*id].push_back({p, *ts});
        } else {
            const auto f = detail::split(body, ',');
            if (f.size() != 3) throw ParseError(source, lineno, "expected node,lat,lon");
            const auto id = detail::parse_int(f[0]);
            const auto lat = detail::parse_double(f[1]);
            const auto lon = detail::parse_double(f[2]);
            if (!id || !lat || !lon) {
                if (data_rows == 0) {
                    ++data_rows;  // header
                    continue;
                }
                throw ParseError(source, lineno, "malformed coordinate row");
            }
            const GeoPoint p{*lat, normalize_lon(*lon)};
            if (!is_valid(p) || std::abs(*lon) > 180.0) throw ParseError(source, lineno, "coordinate out of range");
            out[*id].push_back({p, static_cast<double>(lineno)});
        }
        ++data_rows;
    }
    return out;
}

inline GeoPoint collapse_observations(const std::vector<CoordObservation>& obs, CoordPolicy policy) {
    if (policy == CoordPolicy::last) {
        const CoordObservation* best = &obs.front();
        for (const auto& o : obs)
            if (o.timestamp >= best->timestamp) best = &o;
        return best->point;
    }
    std::vector<GeoPoint> pts;
    pts.reserve(obs.size());
    for (const auto& o : obs) pts.push_back(o.point);
    return spherical_centroid(pts);
}

/// Builds a GeoGraph from an edge list and an optional coordinate source.
///
/// The node set is every id that appears in the edge list, indexed in ascending
/// external-id order. Coordinate rows for ids without edges are ignored. Without
/// a coordinate source every node sits at (0, 0).
inline GeoGraph load_graph(std::istream& edge_source, std::istream* coord_source, const LoadOptions& opts = {},
                           const std::string& edge_name = "edges", const std::string& coord_name = "coords") {
    const auto raw = read_edge_list(edge_source, edge_name);
    std::vector<ExternalId> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& e : raw) {
        ids.push_back(e.u);
        ids.push_back(e.v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<GeoPoint> locations(ids.size());
    std::vector<bool> keep(ids.size(), true);
    if (coord_source != nullptr) {
        const auto coords = read_coordinates(*coord_source, coord_name);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto it = coords.find(ids[i]);
            if (it == coords.end()) {
                if (opts.missing_policy == MissingPolicy::error)
                    throw DataError("node " + std::to_string(ids[i]) + " has edges but no coordinate");
                keep[i] = false;
                continue;
            }
            locations[i] = collapse_observations(it->second, opts.coord_policy);
        }
    }

    std::vector<NodeId> remap(ids.size(), 0);
    std::vector<ExternalId> kept_ids;
    std::vector<GeoPoint> kept_locations;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!keep[i]) continue;
        remap[i] = static_cast<NodeId>(kept_ids.size());
        kept_ids.push_back(ids[i]);
        kept_locations.push_back(locations[i]);
    }
    auto index_of = [&](ExternalId id) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<WeightedEdge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw) {
        const auto a = index_of(e.u);
        const auto b = index_of(e.v);
        if (!keep[a] || !keep[b]) continue;
        edges.push_back({remap[a], remap[b], e.weight});
    }
    return GeoGraph::from_edges(std::move(kept_ids), std::move(kept_locations), edges);
}

inline GeoGraph load_graph_files(const std::filesystem::path& edge_path,
                                 const std::optional<std::filesystem::path>& coord_path, const LoadOptions& opts = {}) {
    std::ifstream edges(edge_path);
    if (!edges) throw DataError("cannot open edge file " + edge_path.string());
    if (!coord_path) return load_graph(edges, nullptr, opts, edge_path.string());
    std::ifstream coords(*coord_path);
    if (!coords) throw DataError("cannot open coordinate file " + coord_path->string());
    return load_graph(edges, &coords, opts, edge_path.string(), coord_path->string());
}

}  // namespace snmod

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snmod/error.hpp"

namespace snmod {

inline constexpr double kEarthRadiusKm = 6371.0;

/// A location in degrees. lat in [-90, 90], lon in (-180, 180].
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Distance model used for every d(i, j) in the library.
///  - haversine: great-circle kilometres on a sphere of radius 6371 km.
///  - planar: lat/lon read as plane coordinates, Euclidean distance (synthetic tests).
enum class Metric { haversine, planar };

inline std::string_view to_string(Metric m) {
    return m == Metric::haversine ? "haversine" : "planar";
}

inline Metric parse_metric(std::string_view s) {
    if (s == "haversine") return Metric::haversine;
    if (s == "planar") return Metric::planar;
    throw InvalidArgument("unknown metric '" + std::string(s) + "'");
}

[[nodiscard]] inline bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon > -180.0 && p.lon <= 180.0;
}

/// Maps lon = -180 onto the equivalent 180 so points stay in the half-open range.
[[nodiscard]] inline double normalize_lon(double lon) {
    while (lon <= -180.0) lon += 360.0;
    while (lon > 180.0) lon -= 360.0;
    return lon;
}

namespace detail {
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace detail

[[nodiscard]] inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    using detail::kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

[[nodiscard]] inline double planar_distance(const GeoPoint& a, const GeoPoint& b) {
    return std::hypot(a.lat - b.lat, a.lon - b.lon);
}

[[nodiscard]] inline double distance(Metric metric, const GeoPoint& a, const GeoPoint& b) {
    return metric == Metric::haversine ? haversine_km(a, b) : planar_distance(a, b);
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    [[nodiscard]] double norm2() const { return x * x + y * y + z * z; }
    [[nodiscard]] double norm() const { return std::sqrt(norm2()); }
};

[[nodiscard]] inline Vec3 to_unit_vector(const GeoPoint& p) {
    using detail::kDegToRad;
    const double lat = p.lat * kDegToRad;
    const double lon = p.lon * kDegToRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

[[nodiscard]] inline GeoPoint from_unit_vector(const Vec3& v) {
    using detail::kRadToDeg;
    const double lat = std::atan2(v.z, std::hypot(v.x, v.y)) * kRadToDeg;
    const double lon = normalize_lon(std::atan2(v.y, v.x) * kRadToDeg);
    return {lat, lon};
}

namespace detail {
inline bool all_identical(std::span<const GeoPoint> points) {
    return std::all_of(points.begin(), points.end(), [&](const GeoPoint& p) { return p == points.front(); });
}
}  // namespace detail

/// Normalized 3-D mean of the points. A mean vector shorter than 1e-9 (antipodal
/// pairs and the like) has no direction; the first point is returned instead.
/// Identical inputs return that point bit-for-bit.
[[nodiscard]] inline GeoPoint spherical_centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw InvalidArgument("spherical_centroid: empty point set");
    if (detail::all_identical(points)) return points.front();
    Vec3 sum;
    for (const auto& p : points) sum += to_unit_vector(p);
    const double mean_norm = sum.norm() / static_cast<double>(points.size());
    if (mean_norm < 1e-9) return points.front();
    return from_unit_vector(sum);
}

[[nodiscard]] inline GeoPoint planar_centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw InvalidArgument("planar_centroid: empty point set");
    if (detail::all_identical(points)) return points.front();
    double lat = 0.0, lon = 0.0;
    for (const auto& p : points) {
        lat += p.lat;
        lon += p.lon;
    }
    const auto n = static_cast<double>(points.size());
    return {lat / n, lon / n};
}

[[nodiscard]] inline GeoPoint centroid(Metric metric, std::span<const GeoPoint> points) {
    return metric == Metric::haversine ? spherical_centroid(points) : planar_centroid(points);
}

[[nodiscard]] inline double max_pairwise_span_km(std::span<const GeoPoint> points,
                                                 Metric metric = Metric::haversine) {
    double best = 0.0;
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b)
            best = std::max(best, distance(metric, points[a], points[b]));
    return best;
}

/// Points embedded in R^3 so that distances and centroids reduce to vector
/// arithmetic. On the sphere the embedding is the unit vector and the distance
/// is recovered from the chord length; in the plane it is (lat, lon, 0).
/// Used by the optimizer's inner loop, where trig per pair is too slow.
class EmbeddedSpace {
public:
    explicit EmbeddedSpace(Metric metric) : metric_(metric) {}

    [[nodiscard]] Metric metric() const { return metric_; }

    [[nodiscard]] Vec3 embed(const GeoPoint& p) const {
        return metric_ == Metric::haversine ? to_unit_vector(p) : Vec3{p.lat, p.lon, 0.0};
    }

    /// Monotone in the true distance; compare these instead of distances.
    [[nodiscard]] static double proximity_key(const Vec3& a, const Vec3& b) { return (a - b).norm2(); }

    [[nodiscard]] double key_to_distance(double key) const {
        const double chord = std::sqrt(key);
        if (metric_ == Metric::planar) return chord;
        return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, chord / 2.0));
    }

    [[nodiscard]] double distance(const Vec3& a, const Vec3& b) const {
        return key_to_distance(proximity_key(a, b));
    }

    /// Centroid from the running sum of embedded members. `fallback` is used for
    /// the degenerate spherical case.
    [[nodiscard]] Vec3 centroid_from_sum(const Vec3& sum, std::size_t count, const Vec3& fallback) const {
        const auto n = static_cast<double>(count);
        if (metric_ == Metric::planar) return sum * (1.0 / n);
        const double norm = sum.norm();
        if (norm / n < 1e-9) return fallback;
        return sum * (1.0 / norm);
    }

    [[nodiscard]] GeoPoint to_point(const Vec3& v) const {
        return metric_ == Metric::haversine ? from_unit_vector(v) : GeoPoint{v.x, v.y};
    }

private:
    Metric metric_;
};

}  // namespace snmod

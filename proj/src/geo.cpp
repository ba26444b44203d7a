#include "mobimpute/geo.hpp"

#include <algorithm>
#include <cmath>

namespace mobimpute {

namespace {
constexpr double kDegTolerance = 1e-9;

double deg2rad(double d) { return d * kPi / 180.0; }
}  // namespace

ProjectionFrame build_frame(std::span<const GpsRecord> records) {
    if (records.empty()) throw std::invalid_argument("empty trace");

    ProjectionFrame f;
    f.lat_min = f.lat_max = records.front().lat;
    f.lon_min = f.lon_max = records.front().lon;
    for (const auto& r : records) {
        f.lat_min = std::min(f.lat_min, r.lat);
        f.lat_max = std::max(f.lat_max, r.lat);
        f.lon_min = std::min(f.lon_min, r.lon);
        f.lon_max = std::max(f.lon_max, r.lon);
    }
    const double lat_span = deg2rad(f.lat_max - f.lat_min);
    const double lon_span = deg2rad(f.lon_max - f.lon_min);
    f.d1 = lat_span * f.earth_radius;
    f.d2 = lon_span * f.earth_radius * std::sin(kPi / 2.0 - deg2rad(f.lat_max));
    f.d3 = lon_span * f.earth_radius * std::sin(kPi / 2.0 - deg2rad(f.lat_min));
    return f;
}

PlanarPoint project(const GpsRecord& record, const ProjectionFrame& frame) {
    const double lat = std::clamp(record.lat, frame.lat_min, frame.lat_max);
    const double lon = std::clamp(record.lon, frame.lon_min, frame.lon_max);
    if (std::abs(lat - record.lat) > kDegTolerance ||
        std::abs(lon - record.lon) > kDegTolerance) {
        throw std::invalid_argument("out of frame");
    }

    const double lat_span = frame.lat_max - frame.lat_min;
    const double lon_span = frame.lon_max - frame.lon_min;
    // w1 interpolates along the trapezoid height (latitude), w2 along its
    // width (longitude). Zero spans degenerate to 0.
    const double w1 = lat_span > 0.0 ? (lat - frame.lat_min) / lat_span : 0.0;
    const double w2 = lon_span > 0.0 ? (lon - frame.lon_min) / lon_span : 0.0;

    PlanarPoint p;
    p.t = record.t;
    p.x = w1 * (frame.d3 - frame.d2) / 2.0 +
          w2 * (frame.d3 * (1.0 - w1) + frame.d2 * w1);
    if (frame.d1 > 0.0) {
        // Trapezoid height: legs d1, half-offset (d3-d2)/2 between the
        // parallel sides. Clamp the arccos argument against rounding.
        double a = (frame.d3 - frame.d2) / (2.0 * frame.d1);
        a = std::clamp(a, -1.0, 1.0);
        p.y = w1 * frame.d1 * std::sin(std::acos(a));
    } else {
        p.y = 0.0;
    }
    return p;
}

std::vector<PlanarPoint> project_all(std::span<const GpsRecord> records,
                                     const ProjectionFrame& frame) {
    std::vector<PlanarPoint> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(project(r, frame));
    return out;
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace mobimpute

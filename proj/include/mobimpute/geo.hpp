#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace mobimpute {

inline constexpr double kEarthRadiusM = 6.371e6;
inline constexpr double kPi = 3.14159265358979323846;

/// One raw GPS observation.
struct GpsRecord {
    double t = 0.0;         ///< seconds (epoch or trace-relative)
    double lat = 0.0;       ///< degrees, [-90, 90]
    double lon = 0.0;       ///< degrees, [-180, 180]
    double accuracy = -1.0; ///< meters, negative = unknown
};

struct PlanarPoint {
    double x = 0.0;  ///< meters
    double y = 0.0;  ///< meters
    double t = 0.0;  ///< seconds
};

/// Per-subject isosceles-trapezoid projection frame. The trapezoid has legs
/// of length d1 (north-south extent) and parallel sides d2 (at the maximum
/// latitude) and d3 (at the minimum latitude). In the northern hemisphere
/// d2 < d3; in the southern, d2 > d3.
struct ProjectionFrame {
    double lat_min = 0.0, lat_max = 0.0;  ///< degrees
    double lon_min = 0.0, lon_max = 0.0;  ///< degrees
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;  ///< meters
    double earth_radius = kEarthRadiusM;
};

/// Fit a projection frame to the bounding box of a record sequence.
/// Throws std::invalid_argument("empty trace") on empty input.
ProjectionFrame build_frame(std::span<const GpsRecord> records);

/// Map one record into the frame's plane. The origin sits at
/// (lat_min, lon_min). Records outside the frame bounds beyond a 1e-9 degree
/// tolerance throw std::invalid_argument("out of frame"). Zero-span frames
/// collapse the corresponding axis to 0 (degenerate but defined).
PlanarPoint project(const GpsRecord& record, const ProjectionFrame& frame);

std::vector<PlanarPoint> project_all(std::span<const GpsRecord> records,
                                     const ProjectionFrame& frame);

double planar_distance(const PlanarPoint& a, const PlanarPoint& b);

}  // namespace mobimpute

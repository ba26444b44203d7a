#pragma once

#include <string>
#include <vector>

#include "mobimpute/geo.hpp"

namespace mobimpute {

enum class EventKind { Flight, Pause };

/// One flight or pause. The event starts at (x, y, t) and displaces by
/// (dx, dy) over dt seconds. Pauses have dx = dy = 0; imputed (bridged)
/// pauses may carry a small residual drift from anchoring the path to the
/// gap endpoints.
struct Event {
    EventKind kind = EventKind::Flight;
    double x = 0.0, y = 0.0;   ///< start location, meters
    double t = 0.0;            ///< start time, seconds
    double dx = 0.0, dy = 0.0; ///< displacement, meters
    double dt = 0.0;           ///< duration, seconds (> 0)
    bool observed = true;

    double x_end() const { return x + dx; }
    double y_end() const { return y + dy; }
    double t_end() const { return t + dt; }
    double length() const;
};

/// A span of time with no observations, flanked by the last/first observed
/// locations.
struct MissingInterval {
    double t_start = 0.0;  ///< seconds
    double t_end = 0.0;    ///< seconds
    PlanarPoint anchor_start;
    PlanarPoint anchor_end;

    double duration() const { return t_end - t_start; }
};

/// A subject's event stream plus its missing intervals.
struct MobilityTrace {
    std::string subject_id;
    std::vector<Event> events;          ///< ordered by t, tiling observed spans
    std::vector<MissingInterval> gaps;  ///< ordered, disjoint from events
    std::vector<MissingInterval> merged_gaps;  ///< gaps absorbed into pauses
    ProjectionFrame frame;
    bool psi_fallback_used = false;  ///< set when imputation had no flight pairs

    double t_first() const;
    double t_last() const;
    /// Seconds not covered by an observed event inside [t0, t1].
    double missing_seconds(double t0, double t1) const;
};

struct SegmentationConfig {
    double pause_radius_m = 25.0;
    double min_pause_s = 30.0;
    double gap_threshold_s = 90.0;
    double pause_merge_m = 50.0;
};

}  // namespace mobimpute

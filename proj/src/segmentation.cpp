#include "mobimpute/segmentation.hpp"

#include <algorithm>
#include <cmath>

namespace mobimpute {

double Event::length() const { return std::hypot(dx, dy); }

double MobilityTrace::t_first() const {
    double t = events.empty() ? 0.0 : events.front().t;
    if (!gaps.empty()) t = events.empty() ? gaps.front().t_start : std::min(t, gaps.front().t_start);
    return t;
}

double MobilityTrace::t_last() const {
    double t = events.empty() ? 0.0 : events.back().t_end();
    if (!gaps.empty()) t = events.empty() ? gaps.back().t_end : std::max(t, gaps.back().t_end);
    return t;
}

double MobilityTrace::missing_seconds(double t0, double t1) const {
    double covered = 0.0;
    for (const auto& e : events) {
        if (!e.observed) continue;
        covered += std::max(0.0, std::min(t1, e.t_end()) - std::max(t0, e.t));
    }
    // Gap time absorbed into merged pauses is still unobserved.
    for (const auto& g : merged_gaps) {
        covered -= std::max(0.0, std::min(t1, g.t_end) - std::max(t0, g.t_start));
    }
    return std::max(0.0, (t1 - t0) - covered);
}

namespace {

double dist2d(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

// Perpendicular distance from p to the chord a->b.
double chord_deviation(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len = std::hypot(vx, vy);
    if (len < 1e-12) return dist2d(p.x, p.y, a.x, a.y);
    return std::abs(vx * (p.y - a.y) - vy * (p.x - a.x)) / len;
}

struct PauseRun {
    std::size_t first, last;  // inclusive point range
    double cx, cy;            // centroid
};

// Greedy stationary-cluster scan: a pause accepts the next point while it
// stays within pause_radius of the running centroid, the cluster's bounding
// box stays within a 2 * pause_radius circle (so a slow drift cannot drag
// the centroid along), and the cluster lasts at least min_pause_s.
std::vector<PauseRun> find_pauses(std::span<const PlanarPoint> pts,
                                  const SegmentationConfig& cfg) {
    std::vector<PauseRun> out;
    std::size_t i = 0;
    while (i + 1 < pts.size()) {
        double cx = pts[i].x, cy = pts[i].y;
        double min_x = cx, max_x = cx, min_y = cy, max_y = cy;
        const double diam2 = 4.0 * cfg.pause_radius_m * cfg.pause_radius_m;
        std::size_t j = i;
        std::size_t count = 1;
        while (j + 1 < pts.size()) {
            const PlanarPoint& nxt = pts[j + 1];
            if (dist2d(nxt.x, nxt.y, cx, cy) > cfg.pause_radius_m) break;
            const double sx = std::max(max_x, nxt.x) - std::min(min_x, nxt.x);
            const double sy = std::max(max_y, nxt.y) - std::min(min_y, nxt.y);
            if (sx * sx + sy * sy > diam2) break;
            ++j;
            ++count;
            cx += (nxt.x - cx) / static_cast<double>(count);
            cy += (nxt.y - cy) / static_cast<double>(count);
            min_x = std::min(min_x, nxt.x);
            max_x = std::max(max_x, nxt.x);
            min_y = std::min(min_y, nxt.y);
            max_y = std::max(max_y, nxt.y);
        }
        if (j > i && pts[j].t - pts[i].t >= cfg.min_pause_s) {
            out.push_back({i, j, cx, cy});
            i = j + 1;  // restart past the run so back-to-back clusters stay
                        // separated by a connecting segment
        } else {
            ++i;
        }
    }
    return out;
}

// Rectangular method on a movement run: extend the candidate chord while all
// intermediate points stay within pause_radius of it, otherwise cut at the
// farthest-deviation point. Returns indices of the corner points (excluding
// the run endpoints).
std::vector<std::size_t> rectangle_corners(std::span<const PlanarPoint> pts,
                                           std::size_t first, std::size_t last,
                                           const SegmentationConfig& cfg) {
    std::vector<std::size_t> corners;
    std::size_t anchor = first;
    while (anchor + 1 < last) {
        std::size_t end = anchor + 1;
        std::size_t cut = anchor;  // none
        while (end + 1 <= last) {
            ++end;
            double worst = -1.0;
            std::size_t worst_i = anchor;
            for (std::size_t k = anchor + 1; k < end; ++k) {
                const double dev = chord_deviation(pts[k], pts[anchor], pts[end]);
                if (dev > worst) { worst = dev; worst_i = k; }
            }
            if (worst > cfg.pause_radius_m) { cut = worst_i; break; }
        }
        if (cut == anchor) break;  // chord reached the run end
        corners.push_back(cut);
        anchor = cut;
    }
    return corners;
}

void append_segment(std::vector<Event>& events, double x0, double y0, double t0,
                    double x1, double y1, double t1) {
    if (t1 - t0 <= 0.0) return;
    Event e;
    e.x = x0; e.y = y0; e.t = t0;
    e.dx = x1 - x0; e.dy = y1 - y0; e.dt = t1 - t0;
    e.kind = (std::hypot(e.dx, e.dy) < 1e-9) ? EventKind::Pause : EventKind::Flight;
    if (e.kind == EventKind::Pause) { e.dx = 0.0; e.dy = 0.0; }
    events.push_back(e);
}

// Fold consecutive nearby pauses into one (duration-weighted centroid).
// Distant back-to-back pauses are left alone; merging them would teleport
// the trajectory.
void coalesce_pauses(std::vector<Event>& events, const SegmentationConfig& cfg) {
    std::vector<Event> out;
    for (const auto& e : events) {
        if (!out.empty() && out.back().kind == EventKind::Pause &&
            e.kind == EventKind::Pause &&
            std::abs(out.back().t_end() - e.t) < 1e-9 &&
            dist2d(out.back().x, out.back().y, e.x, e.y) <= cfg.pause_radius_m) {
            Event& p = out.back();
            const double w = p.dt + e.dt;
            p.x = (p.x * p.dt + e.x * e.dt) / w;
            p.y = (p.y * p.dt + e.y * e.dt) / w;
            p.dt = w;
            continue;
        }
        out.push_back(e);
    }
    events = std::move(out);
}

void segment_burst(std::span<const PlanarPoint> pts, const SegmentationConfig& cfg,
                   std::vector<Event>& events) {
    if (pts.size() < 2) return;

    const auto pauses = find_pauses(pts, cfg);

    // Waypoints: (location, time) chain the burst is rebuilt from.
    struct Wp { double x, y, t; };
    std::vector<Event> burst_events;

    std::size_t cursor = 0;
    Wp prev{pts[0].x, pts[0].y, pts[0].t};
    auto emit_movement = [&](std::size_t first, std::size_t last, const Wp& from, const Wp& to) {
        // Rebuild the run through its rectangle corners.
        const auto corners = rectangle_corners(pts, first, last, cfg);
        Wp cur = from;
        for (std::size_t ci : corners) {
            Wp c{pts[ci].x, pts[ci].y, pts[ci].t};
            append_segment(burst_events, cur.x, cur.y, cur.t, c.x, c.y, c.t);
            cur = c;
        }
        append_segment(burst_events, cur.x, cur.y, cur.t, to.x, to.y, to.t);
    };

    for (const auto& pr : pauses) {
        if (pr.first > cursor) {
            Wp to{pr.cx, pr.cy, pts[pr.first].t};
            emit_movement(cursor, pr.first, prev, to);
        }
        Event p;
        p.kind = EventKind::Pause;
        p.x = pr.cx; p.y = pr.cy;
        p.t = pts[pr.first].t;
        p.dt = pts[pr.last].t - pts[pr.first].t;
        if (p.dt > 0.0) burst_events.push_back(p);
        prev = {pr.cx, pr.cy, pts[pr.last].t};
        cursor = pr.last;
    }
    if (cursor + 1 < pts.size()) {
        Wp to{pts.back().x, pts.back().y, pts.back().t};
        emit_movement(cursor, pts.size() - 1, prev, to);
    }

    coalesce_pauses(burst_events, cfg);
    events.insert(events.end(), burst_events.begin(), burst_events.end());
}

}  // namespace

std::vector<MissingInterval> detect_missing_intervals(
    std::span<const PlanarPoint> points, const SegmentationConfig& cfg) {
    std::vector<MissingInterval> gaps;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double dt = points[i].t - points[i - 1].t;
        if (dt > cfg.gap_threshold_s) {
            MissingInterval g;
            g.t_start = points[i - 1].t;
            g.t_end = points[i].t;
            g.anchor_start = points[i - 1];
            g.anchor_end = points[i];
            gaps.push_back(g);
        }
    }
    return gaps;
}

MobilityTrace extract_events(std::span<const PlanarPoint> points,
                             const SegmentationConfig& cfg) {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].t < points[i - 1].t) throw std::invalid_argument("unsorted");
    }
    // Drop duplicate timestamps so every segment has dt > 0.
    std::vector<PlanarPoint> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (pts.empty() || p.t > pts.back().t) pts.push_back(p);
    }

    MobilityTrace trace;
    trace.gaps = detect_missing_intervals(pts, cfg);

    std::size_t start = 0;
    for (const auto& g : trace.gaps) {
        std::size_t end = start;
        while (end < pts.size() && pts[end].t <= g.t_start + 1e-12) ++end;
        segment_burst(std::span(pts).subspan(start, end - start), cfg, trace.events);
        start = end;
    }
    segment_burst(std::span(pts).subspan(start), cfg, trace.events);
    return trace;
}

MobilityTrace merge_pause_flanked_gaps(const MobilityTrace& trace,
                                       const SegmentationConfig& cfg) {
    MobilityTrace out = trace;
    std::vector<MissingInterval> kept;

    for (const auto& g : out.gaps) {
        // Locate the events flanking this gap.
        std::size_t before = out.events.size(), after = out.events.size();
        for (std::size_t i = 0; i < out.events.size(); ++i) {
            if (std::abs(out.events[i].t_end() - g.t_start) < 1e-6) before = i;
            if (after == out.events.size() && std::abs(out.events[i].t - g.t_end) < 1e-6)
                after = i;
        }
        bool mergeable = before < out.events.size() && after < out.events.size() &&
                         out.events[before].kind == EventKind::Pause &&
                         out.events[after].kind == EventKind::Pause;
        if (mergeable) {
            const Event& p1 = out.events[before];
            const Event& p2 = out.events[after];
            mergeable = dist2d(p1.x, p1.y, p2.x, p2.y) <= cfg.pause_merge_m;
        }
        if (!mergeable) {
            kept.push_back(g);
            continue;
        }

        Event p1 = out.events[before];
        Event p2 = out.events[after];
        Event merged;
        merged.kind = EventKind::Pause;
        const double w = p1.dt + p2.dt;
        merged.x = (p1.x * p1.dt + p2.x * p2.dt) / w;
        merged.y = (p1.y * p1.dt + p2.y * p2.dt) / w;
        merged.t = p1.t;
        merged.dt = p2.t_end() - p1.t;
        merged.observed = p1.observed && p2.observed;

        // Keep neighbours continuous with the relocated pause.
        if (before > 0) {
            Event& fb = out.events[before - 1];
            if (std::abs(fb.t_end() - p1.t) < 1e-6) {
                fb.dx = merged.x - fb.x;
                fb.dy = merged.y - fb.y;
            }
        }
        if (after + 1 < out.events.size()) {
            Event& fa = out.events[after + 1];
            if (std::abs(fa.t - p2.t_end()) < 1e-6) {
                const double ex = fa.x_end(), ey = fa.y_end();
                fa.x = merged.x;
                fa.y = merged.y;
                fa.dx = ex - fa.x;
                fa.dy = ey - fa.y;
            }
        }

        out.events.erase(out.events.begin() + after);
        out.events.erase(out.events.begin() + before);
        out.events.insert(out.events.begin() + before, merged);
        out.merged_gaps.push_back(g);
    }
    out.gaps = std::move(kept);
    std::sort(out.events.begin(), out.events.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
}

}  // namespace mobimpute

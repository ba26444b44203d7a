#include "mobimpute/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mobimpute {

namespace {

constexpr double kDayS = 86400.0;

double dist2d(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

// Events clipped to [t0, t1), positions interpolated along flights.
std::vector<Event> clip_events(const MobilityTrace& trace, double t0, double t1) {
    std::vector<Event> out;
    for (const auto& e : trace.events) {
        const double a = std::max(e.t, t0);
        const double b = std::min(e.t_end(), t1);
        if (b - a <= 1e-12 || e.dt <= 0.0) continue;
        const double fa = (a - e.t) / e.dt;
        const double fb = (b - e.t) / e.dt;
        Event c = e;
        c.x = e.x + fa * e.dx;
        c.y = e.y + fa * e.dy;
        c.t = a;
        c.dx = (fb - fa) * e.dx;
        c.dy = (fb - fa) * e.dy;
        c.dt = b - a;
        out.push_back(c);
    }
    return out;
}

// Time the segment (A -> A + D over dt seconds) spends within radius r of C.
double segment_time_in_circle(double ax, double ay, double dx, double dy, double dt,
                              double cx, double cy, double r) {
    const double a = dx * dx + dy * dy;
    const double ex = ax - cx, ey = ay - cy;
    if (a < 1e-18) return (ex * ex + ey * ey <= r * r) ? dt : 0.0;
    const double b = 2.0 * (ex * dx + ey * dy);
    const double c = ex * ex + ey * ey - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) return c <= 0.0 ? dt : 0.0;
    const double sq = std::sqrt(disc);
    const double s1 = std::clamp((-b - sq) / (2.0 * a), 0.0, 1.0);
    const double s2 = std::clamp((-b + sq) / (2.0 * a), 0.0, 1.0);
    return (s2 - s1) * dt;
}

struct PathMoments {
    double total_t = 0.0;
    double cx = 0.0, cy = 0.0;  // time-weighted centroid
};

PathMoments path_centroid(std::span<const Event> events) {
    PathMoments m;
    double ix = 0.0, iy = 0.0;
    for (const auto& e : events) {
        // integral of a linear segment = dt * midpoint
        ix += e.dt * (e.x + 0.5 * e.dx);
        iy += e.dt * (e.y + 0.5 * e.dy);
        m.total_t += e.dt;
    }
    if (m.total_t > 0.0) { m.cx = ix / m.total_t; m.cy = iy / m.total_t; }
    return m;
}

// Exact integral of squared distance from (cx, cy) along the path.
double path_second_moment(std::span<const Event> events, double cx, double cy) {
    double acc = 0.0;
    for (const auto& e : events) {
        const double ex = e.x - cx, ey = e.y - cy;
        const double d2 = ex * ex + ey * ey;
        const double cross = ex * e.dx + ey * e.dy;
        const double l2 = e.dx * e.dx + e.dy * e.dy;
        acc += e.dt * (d2 + cross + l2 / 3.0);
    }
    return acc;
}

int assign_location(double x, double y, std::span<const SignificantLocation> locations,
                    double radius) {
    int best = -1;
    double best_d = radius;
    for (const auto& loc : locations) {
        const double d = dist2d(x, y, loc.x, loc.y);
        if (d <= best_d) { best_d = d; best = loc.id; }
    }
    return best;
}

double night_overlap(double t_start, double dt, const FeatureConfig& cfg) {
    // Overlap of [t_start, t_start + dt) with the nightly local window.
    const double lt0 = t_start + cfg.tz_offset_s;
    double acc = 0.0;
    const double first_day = std::floor(lt0 / kDayS) - 1.0;
    for (double day = first_day;; day += 1.0) {
        const double w0 = day * kDayS + cfg.night_start_s;
        const double w1 = day * kDayS + cfg.night_end_s;
        if (w0 >= lt0 + dt) break;
        acc += std::max(0.0, std::min(lt0 + dt, w1) - std::max(lt0, w0));
    }
    return acc;
}

}  // namespace

const std::vector<std::string>& DailyFeatureVector::measure_names() {
    static const std::vector<std::string> names = {
        "Hometime",      "DistTravelled", "RoG",          "MaxDiam",
        "MaxHomeDist",   "SigLocsVisited", "AvgFlightLen", "StdFlightLen",
        "AvgFlightDur",  "StdFlightDur",   "FracPause",    "SigLocEntropy",
        "MinsMissing",   "CircdnRtn",      "WkEndDayRtn"};
    return names;
}

std::vector<double> DailyFeatureVector::as_vector() const {
    return {hometime_min,   dist_travelled_m, rog_m,          max_diam_m,
            max_home_dist_m, sig_locs_visited, avg_flight_len_m, std_flight_len_m,
            avg_flight_dur_s, std_flight_dur_s, frac_pause,     sig_loc_entropy,
            mins_missing,    circdn_rtn,       wkend_day_rtn};
}

void DailyFeatureVector::set_measure(std::size_t index, double value) {
    double* fields[] = {&hometime_min,   &dist_travelled_m, &rog_m,          &max_diam_m,
                        &max_home_dist_m, &sig_locs_visited, &avg_flight_len_m,
                        &std_flight_len_m, &avg_flight_dur_s, &std_flight_dur_s,
                        &frac_pause,     &sig_loc_entropy,  &mins_missing,
                        &circdn_rtn,     &wkend_day_rtn};
    *fields[index] = value;
}

std::vector<SignificantLocation> find_significant_locations(
    std::span<const MobilityTrace> traces, const FeatureConfig& cfg) {
    struct Cluster {
        double x, y, w;      // pause-time-weighted centroid
        double night_s;
    };
    std::vector<Cluster> clusters;
    for (const auto& trace : traces) {
        for (const auto& e : trace.events) {
            if (e.kind != EventKind::Pause || e.dt <= 0.0) continue;
            clusters.push_back({e.x, e.y, e.dt, night_overlap(e.t, e.dt, cfg)});
        }
    }

    // Centroid-linkage agglomeration: repeatedly merge the closest pair of
    // centroids while they sit within the merge radius.
    bool merged = true;
    while (merged && clusters.size() > 1) {
        merged = false;
        double best = cfg.sigloc_radius_m;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double d = dist2d(clusters[i].x, clusters[i].y, clusters[j].x, clusters[j].y);
                if (d <= best) { best = d; bi = i; bj = j; merged = true; }
            }
        }
        if (merged) {
            Cluster& a = clusters[bi];
            const Cluster& b = clusters[bj];
            const double w = a.w + b.w;
            a.x = (a.x * a.w + b.x * b.w) / w;
            a.y = (a.y * a.w + b.y * b.w) / w;
            a.night_s += b.night_s;
            a.w = w;
            clusters.erase(clusters.begin() + static_cast<long>(bj));
        }
    }

    std::vector<SignificantLocation> out;
    for (const auto& c : clusters) {
        if (c.w >= cfg.sigloc_min_s) {
            SignificantLocation loc;
            loc.x = c.x; loc.y = c.y;
            loc.total_pause_s = c.w;
            loc.night_pause_s = c.night_s;
            out.push_back(loc);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.total_pause_s > b.total_pause_s;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

std::size_t estimate_home(std::vector<SignificantLocation>& locations,
                          const FeatureConfig&) {
    if (locations.empty()) return static_cast<std::size_t>(-1);
    std::size_t best = 0;
    for (std::size_t i = 1; i < locations.size(); ++i) {
        const auto& a = locations[i];
        const auto& b = locations[best];
        if (a.night_pause_s > b.night_pause_s ||
            (a.night_pause_s == b.night_pause_s && a.total_pause_s > b.total_pause_s) ||
            (a.night_pause_s == b.night_pause_s && a.total_pause_s == b.total_pause_s &&
             a.id < b.id)) {
            best = i;
        }
    }
    // No night pauses anywhere: fall back to total pause time.
    if (locations[best].night_pause_s <= 0.0) {
        best = 0;
        for (std::size_t i = 1; i < locations.size(); ++i) {
            if (locations[i].total_pause_s > locations[best].total_pause_s) best = i;
        }
    }
    for (auto& loc : locations) loc.is_home = false;
    locations[best].is_home = true;
    return best;
}

DailyFeatureVector compute_daily_features(const MobilityTrace& trace, double day_start,
                                          std::span<const SignificantLocation> locations,
                                          const SignificantLocation* home,
                                          const FeatureConfig& cfg,
                                          double mins_missing) {
    DailyFeatureVector f;
    f.day_start = day_start;
    f.mins_missing = mins_missing;

    const double day_end = day_start + kDayS;
    const auto events = clip_events(trace, day_start, day_end);
    if (events.empty()) {
        f.valid = false;
        f.mins_missing = kDayS / 60.0;
        return f;
    }

    double pause_s = 0.0;
    std::vector<double> flight_len, flight_dur;
    for (const auto& e : events) {
        if (e.kind == EventKind::Flight) {
            f.dist_travelled_m += e.length();
            flight_len.push_back(e.length());
            flight_dur.push_back(e.dt);
        } else {
            pause_s += e.dt;
        }
    }
    f.frac_pause = pause_s / kDayS;

    auto mean_of = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    auto pop_std = [&](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        const double m = mean_of(v);
        double acc = 0.0;
        for (double x : v) acc += (x - m) * (x - m);
        return std::sqrt(acc / static_cast<double>(v.size()));
    };
    f.avg_flight_len_m = mean_of(flight_len);
    f.std_flight_len_m = pop_std(flight_len);
    f.avg_flight_dur_s = mean_of(flight_dur);
    f.std_flight_dur_s = pop_std(flight_dur);

    // Radius of gyration: time-weighted RMS distance from the time-weighted
    // centroid, exact over the piecewise-linear path.
    const auto cm = path_centroid(events);
    if (cm.total_t > 0.0) {
        f.rog_m = std::sqrt(std::max(0.0, path_second_moment(events, cm.cx, cm.cy) / cm.total_t));
    }

    // Pairwise diameter over event endpoints.
    std::vector<std::pair<double, double>> endpoints;
    endpoints.reserve(events.size() + 1);
    endpoints.emplace_back(events.front().x, events.front().y);
    for (const auto& e : events) endpoints.emplace_back(e.x_end(), e.y_end());
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        for (std::size_t j = i + 1; j < endpoints.size(); ++j) {
            f.max_diam_m = std::max(f.max_diam_m,
                                    dist2d(endpoints[i].first, endpoints[i].second,
                                           endpoints[j].first, endpoints[j].second));
        }
    }

    if (home != nullptr) {
        double home_s = 0.0;
        for (const auto& e : events) {
            home_s += segment_time_in_circle(e.x, e.y, e.dx, e.dy, e.dt, home->x, home->y,
                                             cfg.home_radius_m);
            f.max_home_dist_m = std::max(f.max_home_dist_m, dist2d(e.x, e.y, home->x, home->y));
            f.max_home_dist_m = std::max(f.max_home_dist_m, dist2d(e.x_end(), e.y_end(), home->x, home->y));
        }
        f.hometime_min = home_s / 60.0;
    }

    // Pause-time shares per significant location (+ "other").
    std::vector<double> shares(locations.size() + 1, 0.0);
    std::vector<bool> visited(locations.size(), false);
    for (const auto& e : events) {
        if (e.kind != EventKind::Pause) continue;
        const int loc = assign_location(e.x, e.y, locations, cfg.sigloc_radius_m);
        if (loc >= 0) {
            shares[static_cast<std::size_t>(loc)] += e.dt;
            visited[static_cast<std::size_t>(loc)] = true;
        } else {
            shares.back() += e.dt;
        }
    }
    f.sig_locs_visited = static_cast<double>(std::count(visited.begin(), visited.end(), true));
    if (pause_s > 0.0) {
        for (double s : shares) {
            if (s <= 0.0) continue;
            const double p = s / pause_s;
            f.sig_loc_entropy -= p * std::log(p);
        }
    }
    return f;
}

std::vector<std::vector<double>> day_occupancy(const MobilityTrace& trace, double day_start,
                                               std::span<const SignificantLocation> locations,
                                               const FeatureConfig& cfg) {
    const std::size_t k = locations.size();
    std::vector<std::vector<double>> bins(24, std::vector<double>(k + 1, 0.0));
    for (int h = 0; h < 24; ++h) {
        const double b0 = day_start + h * 3600.0;
        const auto events = clip_events(trace, b0, b0 + 3600.0);
        auto& bin = bins[static_cast<std::size_t>(h)];
        double covered = 0.0;
        for (const auto& e : events) {
            covered += e.dt;
            if (e.kind == EventKind::Pause) {
                const int loc = assign_location(e.x, e.y, locations, cfg.sigloc_radius_m);
                bin[loc >= 0 ? static_cast<std::size_t>(loc) : k] += e.dt;
            } else {
                bin[k] += e.dt;
            }
        }
        bin[k] += std::max(0.0, 3600.0 - covered);  // uncovered time counts as "other"
        for (auto& v : bin) v /= 3600.0;
    }
    return bins;
}

namespace {
double day_similarity(const std::vector<std::vector<double>>& a,
                      const std::vector<std::vector<double>>& b) {
    double acc = 0.0;
    for (std::size_t h = 0; h < 24; ++h) {
        double overlap = 0.0;
        for (std::size_t l = 0; l < a[h].size(); ++l) overlap += std::min(a[h][l], b[h][l]);
        acc += overlap;
    }
    return acc / 24.0;
}
}  // namespace

void fill_routine_measures(std::vector<DailyFeatureVector>& days,
                           const std::vector<std::vector<std::vector<double>>>& occupancy,
                           const std::vector<bool>& day_is_weekend) {
    const std::size_t n = days.size();
    for (std::size_t i = 0; i < n; ++i) {
        double all_acc = 0.0, same_acc = 0.0;
        int all_cnt = 0, same_cnt = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double s = day_similarity(occupancy[i], occupancy[j]);
            all_acc += s;
            ++all_cnt;
            if (day_is_weekend[i] == day_is_weekend[j]) { same_acc += s; ++same_cnt; }
        }
        days[i].circdn_rtn = all_cnt > 0 ? all_acc / all_cnt : 0.0;
        days[i].wkend_day_rtn = same_cnt > 0 ? same_acc / same_cnt : 0.0;
    }
}

DailyFeatureVector feature_intervals(std::span<const DailyFeatureVector> replicate_vectors,
                                     double alpha) {
    if (replicate_vectors.size() < 2) {
        throw std::invalid_argument("feature_intervals: need at least 2 replicates");
    }
    DailyFeatureVector out = replicate_vectors.front();
    const std::size_t m = DailyFeatureVector::measure_names().size();
    out.lo.resize(m);
    out.hi.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> vals;
        vals.reserve(replicate_vectors.size());
        for (const auto& v : replicate_vectors) vals.push_back(v.as_vector()[i]);
        const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                            static_cast<double>(vals.size());
        auto [lo, hi] = confidence_interval(vals, alpha);
        out.set_measure(i, mean);
        out.lo[i] = lo;
        out.hi[i] = hi;
    }
    return out;
}

const std::vector<std::string>& trace_measure_names() {
    static const std::vector<std::string> names = {
        "DistTravelled", "RoG",          "MaxDiam",      "AvgFlightLen",
        "StdFlightLen",  "AvgFlightDur", "StdFlightDur", "FracPause"};
    return names;
}

std::vector<double> trace_measures(const MobilityTrace& trace) {
    std::vector<double> flight_len, flight_dur;
    double dist = 0.0, pause_s = 0.0, span = 0.0;
    for (const auto& e : trace.events) {
        span += e.dt;
        if (e.kind == EventKind::Flight) {
            dist += e.length();
            flight_len.push_back(e.length());
            flight_dur.push_back(e.dt);
        } else {
            pause_s += e.dt;
        }
    }
    auto mean_of = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    auto pop_std = [&](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        const double m = mean_of(v);
        double acc = 0.0;
        for (double x : v) acc += (x - m) * (x - m);
        return std::sqrt(acc / static_cast<double>(v.size()));
    };

    double rog = 0.0;
    const auto cm = path_centroid(trace.events);
    if (cm.total_t > 0.0) {
        rog = std::sqrt(std::max(0.0, path_second_moment(trace.events, cm.cx, cm.cy) / cm.total_t));
    }

    double diam = 0.0;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(trace.events.size() + 1);
    if (!trace.events.empty()) pts.emplace_back(trace.events.front().x, trace.events.front().y);
    for (const auto& e : trace.events) pts.emplace_back(e.x_end(), e.y_end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            diam = std::max(diam, dist2d(pts[i].first, pts[i].second, pts[j].first, pts[j].second));
        }
    }

    return {dist,
            rog,
            diam,
            mean_of(flight_len),
            pop_std(flight_len),
            mean_of(flight_dur),
            pop_std(flight_dur),
            span > 0.0 ? pause_s / span : 0.0};
}

}  // namespace mobimpute

#include "mobimpute/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mobimpute/imputer.hpp"
#include "mobimpute/segmentation.hpp"

namespace mobimpute {

namespace {

constexpr double kNearZero = 1e-9;

bool scheduled_on(double t, const OnOffSchedule& s) {
    if (s.off_s <= 0.0) return true;
    double m = std::fmod(t - s.phase_s, s.cycle_s());
    if (m < 0.0) m += s.cycle_s();
    return m < s.on_s;
}

double median_interval(std::span<const PlanarPoint> pts) {
    if (pts.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> dts;
    dts.reserve(pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) dts.push_back(pts[i].t - pts[i - 1].t);
    std::nth_element(dts.begin(), dts.begin() + static_cast<long>(dts.size() / 2), dts.end());
    return dts[dts.size() / 2];
}

}  // namespace

void ErrorTable::finalize() {
    mean_abs_error.assign(methods.size(), 0.0);
    for (std::size_t c = 0; c < methods.size(); ++c) {
        double acc = 0.0;
        int count = 0;
        for (std::size_t r = 0; r < measures.size(); ++r) {
            if (flagged[r][c]) continue;
            acc += std::abs(cells[r][c]);
            ++count;
        }
        mean_abs_error[c] = count > 0 ? acc / count : 0.0;
    }
}

std::vector<PlanarPoint> impose_missingness(std::span<const PlanarPoint> points,
                                            const OnOffSchedule& schedule) {
    std::vector<PlanarPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (scheduled_on(p.t, schedule)) out.push_back(p);
    }
    return out;
}

std::vector<GpsRecord> impose_missingness(std::span<const GpsRecord> records,
                                          const OnOffSchedule& schedule) {
    std::vector<GpsRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (scheduled_on(r.t, schedule)) out.push_back(r);
    }
    return out;
}

ErrorTable evaluate(std::span<const std::vector<PlanarPoint>> truth_traces,
                    const OnOffSchedule& schedule, std::span<const Method> methods,
                    int replicates, std::uint64_t seed,
                    const SegmentationConfig& seg_cfg) {
    ErrorTable table;
    table.measures = trace_measure_names();
    for (const auto& m : methods) table.methods.push_back(m.name);
    const std::size_t nr = table.measures.size();
    const std::size_t nc = methods.size();
    table.cells.assign(nr, std::vector<double>(nc, 0.0));
    table.flagged.assign(nr, std::vector<bool>(nc, false));

    std::vector<std::vector<int>> counts(nr, std::vector<int>(nc, 0));

    for (std::size_t ti = 0; ti < truth_traces.size(); ++ti) {
        const auto& points = truth_traces[ti];
        if (median_interval(points) > 10.0) {
            throw std::runtime_error("truth trace is not dense enough (median interval > 10 s)");
        }

        const MobilityTrace truth = extract_events(points, seg_cfg);
        const auto truth_m = trace_measures(truth);

        const auto degraded_pts = impose_missingness(points, schedule);
        MobilityTrace degraded = extract_events(degraded_pts, seg_cfg);
        degraded = merge_pause_flanked_gaps(degraded, seg_cfg);

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const bool stochastic = methods[mi].spec.family != KernelFamily::LI;
            std::uint64_t s = seed;
            rng::splitmix64(s);
            s ^= (ti + 1) * 0x2545f4914f6cdd1dULL + mi;
            const int b = stochastic ? replicates : 1;
            const auto reps = impute_trace(degraded, methods[mi].spec, b, rng::splitmix64(s));

            std::vector<double> mean_m(nr, 0.0);
            for (const auto& rep : reps) {
                const auto m = trace_measures(rep);
                for (std::size_t r = 0; r < nr; ++r) mean_m[r] += m[r] / static_cast<double>(reps.size());
            }
            for (std::size_t r = 0; r < nr; ++r) {
                const double err = mean_m[r] - truth_m[r];
                if (std::abs(truth_m[r]) < kNearZero) {
                    table.flagged[r][mi] = true;
                    table.cells[r][mi] += err;  // absolute error, flagged
                } else {
                    table.cells[r][mi] += err / truth_m[r] * 100.0;
                }
                counts[r][mi] += 1;
            }
        }
    }
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            if (counts[r][c] > 0) table.cells[r][c] /= counts[r][c];
        }
    }
    table.finalize();
    return table;
}

std::int64_t civil_to_epoch(int year, int month, int day, int hour, int minute, int second) {
    // days-from-civil, proleptic Gregorian
    std::int64_t y = year;
    y -= month <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    const std::int64_t days = era * 146097 + doe - 719468;
    return days * 86400 + hour * 3600 + minute * 60 + second;
}

PltParseResult parse_plt(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    int header = 0;
    PltParseResult result;
    while (header < 6) {
        if (!std::getline(in, line)) throw std::runtime_error("not a PLT file");
        ++header;
    }
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 7) { ++result.malformed_lines; continue; }
        try {
            const double lat = std::stod(fields[0]);
            const double lon = std::stod(fields[1]);
            int yy, mo, dd, hh, mi, ss;
            if (std::sscanf(fields[5].c_str(), "%d-%d-%d", &yy, &mo, &dd) != 3 ||
                std::sscanf(fields[6].c_str(), "%d:%d:%d", &hh, &mi, &ss) != 3) {
                ++result.malformed_lines;
                continue;
            }
            if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0 ||
                mo < 1 || mo > 12 || dd < 1 || dd > 31 || hh < 0 || hh > 23 ||
                mi < 0 || mi > 59 || ss < 0 || ss > 60) {
                ++result.malformed_lines;
                continue;
            }
            GpsRecord r;
            r.lat = lat;
            r.lon = lon;
            r.t = static_cast<double>(civil_to_epoch(yy, mo, dd, hh, mi, ss));
            result.records.push_back(r);
        } catch (const std::exception&) {
            ++result.malformed_lines;
        }
    }
    return result;
}

double unscheduled_missingness(std::span<const PlanarPoint> points,
                               const OnOffSchedule& schedule, double tolerance_s) {
    if (points.empty()) return 1.0;
    const double t0 = points.front().t;
    const double t1 = points.back().t;
    if (t1 <= t0) return 0.0;

    // Merged coverage intervals: each observation covers +/- tolerance.
    std::vector<std::pair<double, double>> cover;
    for (const auto& p : points) {
        const double a = p.t - tolerance_s, b = p.t + tolerance_s;
        if (!cover.empty() && a <= cover.back().second) {
            cover.back().second = std::max(cover.back().second, b);
        } else {
            cover.emplace_back(a, b);
        }
    }

    double on_total = 0.0, on_covered = 0.0;
    const double cycle = schedule.cycle_s();
    auto add_window = [&](double w0, double w1) {
        w0 = std::max(w0, t0);
        w1 = std::min(w1, t1);
        if (w1 <= w0) return;
        on_total += w1 - w0;
        for (const auto& [a, b] : cover) {
            on_covered += std::max(0.0, std::min(w1, b) - std::max(w0, a));
        }
    };
    if (schedule.off_s <= 0.0) {
        add_window(t0, t1);
    } else {
        const double first = std::floor((t0 - schedule.phase_s) / cycle) * cycle + schedule.phase_s;
        for (double w = first; w < t1; w += cycle) add_window(w, w + schedule.on_s);
    }
    if (on_total <= 0.0) return 0.0;
    return std::clamp((on_total - on_covered) / on_total, 0.0, 1.0);
}

}  // namespace mobimpute

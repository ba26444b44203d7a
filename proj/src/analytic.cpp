#include "mobimpute/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "mobimpute/features.hpp"
#include "mobimpute/imputer.hpp"
#include "mobimpute/trace.hpp"

namespace mobimpute {

namespace {

double step_angle(const AnalyticModel& model, int t) {
    if (model.n < 2) return model.theta0;
    return model.theta0 - 2.0 * model.theta0 * t / (model.n - 1);
}

}  // namespace

std::pair<double, double> mean_displacement(const AnalyticModel& model, int t) {
    if (t < 0 || t > model.n - 1) throw std::out_of_range("mean_displacement: step out of range");
    const double a = step_angle(model, t);
    const double amp = std::sqrt(model.d);
    return {amp * std::cos(a), amp * std::sin(a)};
}

std::vector<std::pair<double, double>> simulate_analytic_trace(const AnalyticModel& model,
                                                               rng::Stream& stream) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(model.n));
    const double sx = std::sqrt(model.sigma_x2);
    const double sy = std::sqrt(model.sigma_y2);
    for (int i = 0; i < model.n; ++i) {
        auto [mx, my] = mean_displacement(model, i);
        out.emplace_back(mx + sx * stream.normal(), my + sy * stream.normal());
    }
    return out;
}

double expected_gap_hotdeck(const AnalyticModel& model) {
    if (model.n < 1) throw std::invalid_argument("n must be >= 1");
    return (model.n - 1) / 3.0 * (model.sigma_x2 + model.sigma_y2);
}

double mean_path_term(const AnalyticModel& model, int t) {
    // The printed quadruple sum collapses (via prefix sums) to
    // sum_l (S_l(t) - (t/n) S_l(n))^2 with S_l(t) = sum_{i<=t} mu_l(i).
    double sx = 0.0, sy = 0.0, ax = 0.0, ay = 0.0;
    for (int i = 1; i <= model.n; ++i) {
        auto [mx, my] = mean_displacement(model, i - 1);
        if (i <= t) { sx += mx; sy += my; }
        ax += mx;
        ay += my;
    }
    const double frac = static_cast<double>(t) / model.n;
    const double ex = sx - frac * ax;
    const double ey = sy - frac * ay;
    return ex * ex + ey * ey;
}

double expected_gap_li(const AnalyticModel& model) {
    if (model.n < 1) throw std::invalid_argument("n must be >= 1");
    const double var_term = (model.n - 1) / 6.0 * (model.sigma_x2 + model.sigma_y2);

    // Prefix sums keep the whole M(t) average at O(n).
    double ax = 0.0, ay = 0.0;
    std::vector<double> px(static_cast<std::size_t>(model.n) + 1, 0.0), py = px;
    for (int i = 1; i <= model.n; ++i) {
        auto [mx, my] = mean_displacement(model, i - 1);
        ax += mx;
        ay += my;
        px[static_cast<std::size_t>(i)] = ax;
        py[static_cast<std::size_t>(i)] = ay;
    }
    double m_sum = 0.0;
    for (int t = 0; t <= model.n; ++t) {
        const double frac = static_cast<double>(t) / model.n;
        const double ex = px[static_cast<std::size_t>(t)] - frac * ax;
        const double ey = py[static_cast<std::size_t>(t)] - frac * ay;
        m_sum += ex * ex + ey * ey;
    }
    return var_term + m_sum / (model.n + 1);
}

double monte_carlo_gap(const AnalyticModel& model, GapMethod method, int reps,
                       std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    const int n = model.n;
    double acc = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        auto stream = rng::derive_stream(seed, static_cast<std::uint64_t>(rep), 0);
        const auto truth = simulate_analytic_trace(model, stream);
        std::vector<std::pair<double, double>> surrogate;
        if (method == GapMethod::HotdeckOracle) {
            surrogate = simulate_analytic_trace(model, stream);
        }

        // cumulative truth and surrogate paths
        std::vector<double> lx(static_cast<std::size_t>(n) + 1, 0.0), ly = lx;
        std::vector<double> hx = lx, hy = lx;
        for (int i = 1; i <= n; ++i) {
            lx[static_cast<std::size_t>(i)] = lx[static_cast<std::size_t>(i - 1)] + truth[static_cast<std::size_t>(i - 1)].first;
            ly[static_cast<std::size_t>(i)] = ly[static_cast<std::size_t>(i - 1)] + truth[static_cast<std::size_t>(i - 1)].second;
            if (method == GapMethod::HotdeckOracle) {
                hx[static_cast<std::size_t>(i)] = hx[static_cast<std::size_t>(i - 1)] + surrogate[static_cast<std::size_t>(i - 1)].first;
                hy[static_cast<std::size_t>(i)] = hy[static_cast<std::size_t>(i - 1)] + surrogate[static_cast<std::size_t>(i - 1)].second;
            }
        }

        double gap = 0.0;
        for (int t = 0; t <= n; ++t) {
            const double frac = static_cast<double>(t) / n;
            double ex, ey;
            if (method == GapMethod::HotdeckOracle) {
                // bridged resample: (t/n)(L(n) - sum resampled) + partial sum
                ex = frac * (lx[static_cast<std::size_t>(n)] - hx[static_cast<std::size_t>(n)]) + hx[static_cast<std::size_t>(t)] - lx[static_cast<std::size_t>(t)];
                ey = frac * (ly[static_cast<std::size_t>(n)] - hy[static_cast<std::size_t>(n)]) + hy[static_cast<std::size_t>(t)] - ly[static_cast<std::size_t>(t)];
            } else {
                ex = frac * lx[static_cast<std::size_t>(n)] - lx[static_cast<std::size_t>(t)];
                ey = frac * ly[static_cast<std::size_t>(n)] - ly[static_cast<std::size_t>(t)];
            }
            gap += ex * ex + ey * ey;
        }
        acc += gap / (n + 1);
    }
    return acc / reps;
}

std::vector<JitterBiasRow> jittered_semicircle(const AnalyticModel& model, double jitter_scale,
                                               const std::vector<double>& missing_fractions,
                                               int replicates, double alpha,
                                               std::uint64_t seed) {
    // Truth: one noisy semicircular walk, one point per step, 60 s per step.
    const double step_s = 60.0;
    AnalyticModel jittered = model;
    jittered.sigma_x2 = model.sigma_x2 * jitter_scale * jitter_scale;
    jittered.sigma_y2 = model.sigma_y2 * jitter_scale * jitter_scale;
    auto stream = rng::derive_stream(seed, 0, 0);
    const auto steps = simulate_analytic_trace(jittered, stream);

    std::vector<PlanarPoint> points;
    points.reserve(steps.size() + 1);
    points.push_back({0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < steps.size(); ++i) {
        points.push_back({points.back().x + steps[i].first,
                          points.back().y + steps[i].second,
                          (static_cast<double>(i) + 1.0) * step_s});
    }

    double truth_dist = 0.0;
    for (const auto& s : steps) truth_dist += std::hypot(s.first, s.second);

    std::vector<JitterBiasRow> rows;
    const double cycle_steps = 20.0;
    for (std::size_t fi = 0; fi < missing_fractions.size(); ++fi) {
        const double f = missing_fractions[fi];
        JitterBiasRow row;
        row.missing_fraction = f;
        row.truth_dist = truth_dist;

        std::vector<PlanarPoint> kept;
        if (f <= 0.0) {
            kept = points;
        } else {
            const double cycle = cycle_steps * step_s;
            const double on = (1.0 - f) * cycle;
            for (const auto& p : points) {
                if (std::fmod(p.t, cycle) < on) kept.push_back(p);
            }
        }
        if (kept.size() < 2) continue;

        // Build the trace directly: each consecutive retained pair inside an
        // on-window is a flight; longer jumps are missing intervals.
        MobilityTrace trace;
        for (std::size_t i = 1; i < kept.size(); ++i) {
            const double dt = kept[i].t - kept[i - 1].t;
            if (dt <= step_s + 1e-9) {
                Event e;
                e.kind = EventKind::Flight;
                e.x = kept[i - 1].x;
                e.y = kept[i - 1].y;
                e.t = kept[i - 1].t;
                e.dx = kept[i].x - kept[i - 1].x;
                e.dy = kept[i].y - kept[i - 1].y;
                e.dt = dt;
                if (e.length() < 1e-9) e.kind = EventKind::Pause;
                trace.events.push_back(e);
            } else {
                MissingInterval g;
                g.t_start = kept[i - 1].t;
                g.t_end = kept[i].t;
                g.anchor_start = kept[i - 1];
                g.anchor_end = kept[i];
                trace.gaps.push_back(g);
            }
        }

        const auto li = impute_trace(trace, KernelSpec::make(KernelFamily::LI), 1, seed);
        row.li_dist = trace_measures(li.front()).front();

        const auto spec = KernelSpec::make(KernelFamily::TL, 1.0, 10.0);
        const auto reps = impute_trace(trace, spec, replicates, seed + fi + 1);
        std::vector<double> dists;
        dists.reserve(reps.size());
        for (const auto& r : reps) dists.push_back(trace_measures(r).front());
        double mean = 0.0;
        for (double dv : dists) mean += dv / static_cast<double>(dists.size());
        row.tl_mean = mean;
        if (dists.size() >= 2) {
            auto [lo, hi] = confidence_interval(dists, alpha);
            row.tl_lo = lo;
            row.tl_hi = hi;
        } else {
            row.tl_lo = row.tl_hi = mean;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mobimpute

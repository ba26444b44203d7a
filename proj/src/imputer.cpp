#include "mobimpute/imputer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobimpute {

EmpiricalPool EmpiricalPool::from_trace(const MobilityTrace& trace) {
    EmpiricalPool pool;
    const Event* prev = nullptr;
    for (const auto& e : trace.events) {
        if (!e.observed) { prev = nullptr; continue; }
        if (e.kind == EventKind::Flight) pool.flights.push_back(e);
        else pool.pauses.push_back(e);
        if (prev != nullptr) {
            TransitionPair p;
            p.prev_flight = prev->kind == EventKind::Flight;
            p.cur_flight = e.kind == EventKind::Flight;
            p.z = PlanarPoint{e.x, e.y, e.t};
            pool.pairs.push_back(p);
        }
        prev = &e;
    }
    return pool;
}

double estimate_psi(const EmpiricalPool& pool, const KernelSpec& spec,
                    const PlanarPoint& z_new, bool* used_fallback) {
    double num = 0.0, den = 0.0;
    for (const auto& p : pool.pairs) {
        if (!p.prev_flight) continue;
        const double w = weight(spec, z_new, p.z);
        den += w;
        if (p.cur_flight) num += w;
    }
    if (den > 0.0) {
        if (used_fallback) *used_fallback = false;
        return num / den;
    }
    if (used_fallback) *used_fallback = true;
    const double total = static_cast<double>(pool.n_flights() + pool.n_pauses());
    return total > 0.0 ? static_cast<double>(pool.n_flights()) / total : 0.0;
}

Event sample_event(const EmpiricalPool& pool, const KernelSpec& spec,
                   const PlanarPoint& z_new, bool is_flight, rng::Stream& stream) {
    const auto& donors = is_flight ? pool.flights : pool.pauses;
    if (donors.empty()) throw std::runtime_error("no donors");
    std::vector<double> weights(donors.size());
    for (std::size_t i = 0; i < donors.size(); ++i) {
        weights[i] = weight(spec, z_new, PlanarPoint{donors[i].x, donors[i].y, donors[i].t});
    }
    return donors[stream.discrete(weights)];
}

ImputedTrajectory linear_interpolate(const MissingInterval& gap) {
    ImputedTrajectory out;
    out.gap = gap;
    Event e;
    e.observed = false;
    e.x = gap.anchor_start.x;
    e.y = gap.anchor_start.y;
    e.t = gap.t_start;
    e.dx = gap.anchor_end.x - gap.anchor_start.x;
    e.dy = gap.anchor_end.y - gap.anchor_start.y;
    e.dt = gap.duration();
    e.kind = std::hypot(e.dx, e.dy) < 1e-9 ? EventKind::Pause : EventKind::Flight;
    if (e.kind == EventKind::Pause) { e.dx = 0.0; e.dy = 0.0; }
    if (e.dt > 0.0) out.events.push_back(e);
    return out;
}

ImputedTrajectory bridge(const std::vector<Event>& raw_events, const MissingInterval& gap) {
    if (raw_events.empty()) return linear_interpolate(gap);

    const double tau0 = gap.t_start, tau1 = gap.t_end;
    const double span = tau1 - tau0;

    // Bridged waypoints P_k = G(t_k) at the simulated event boundaries;
    // interpolating linearly between them keeps every segment straight.
    std::vector<double> px, py, pt;
    px.reserve(raw_events.size() + 1);
    double sx = 0.0, sy = 0.0, st = 0.0;
    auto g_at = [&](double t, double sum_x, double sum_y) {
        const double a = (tau1 - t) / span;
        const double b = (t - tau0) / span;
        return std::pair<double, double>{
            a * (gap.anchor_start.x + sum_x) + b * gap.anchor_end.x,
            a * (gap.anchor_start.y + sum_y) + b * gap.anchor_end.y};
    };
    auto [x0, y0] = g_at(tau0, 0.0, 0.0);
    px.push_back(x0); py.push_back(y0); pt.push_back(tau0);
    for (const auto& e : raw_events) {
        sx += e.dx; sy += e.dy; st += e.dt;
        auto [x, y] = g_at(tau0 + st, sx, sy);
        px.push_back(x); py.push_back(y); pt.push_back(tau0 + st);
    }

    ImputedTrajectory out;
    out.gap = gap;
    for (std::size_t k = 0; k < raw_events.size(); ++k) {
        Event e;
        e.kind = raw_events[k].kind;
        e.observed = false;
        e.x = px[k]; e.y = py[k]; e.t = pt[k];
        e.dx = px[k + 1] - px[k];
        e.dy = py[k + 1] - py[k];
        e.dt = pt[k + 1] - pt[k];
        out.events.push_back(e);
    }
    return out;
}

ImputedTrajectory simulate_gap(const MobilityTrace& trace, const MissingInterval& gap,
                               const EmpiricalPool& pool, const KernelSpec& spec,
                               rng::Stream& stream) {
    if (gap.duration() <= 0.0) throw std::invalid_argument("gap duration must be positive");
    if (pool.flights.empty() && pool.pauses.empty()) throw std::runtime_error("no donors");

    // A pause-only trace cannot alternate; the whole gap becomes one pause
    // and bridging pins it to the anchors.
    if (pool.flights.empty()) {
        Event p;
        p.kind = EventKind::Pause;
        p.dt = gap.duration();
        ImputedTrajectory out = bridge({p}, gap);
        out.psi_fallback = true;
        return out;
    }

    bool prev_flight = true;
    for (const auto& e : trace.events) {
        if (std::abs(e.t_end() - gap.t_start) < 1e-6) prev_flight = e.kind == EventKind::Flight;
    }

    const double gap_dur = gap.duration();
    PlanarPoint z{gap.anchor_start.x, gap.anchor_start.y, gap.t_start};
    std::vector<Event> raw;
    double cum = 0.0;
    bool fallback_seen = false;

    while (true) {
        bool is_flight = true;
        if (prev_flight) {  // a pause forces the next event to be a flight
            bool fb = false;
            const double psi = estimate_psi(pool, spec, z, &fb);
            fallback_seen = fallback_seen || fb;
            is_flight = stream.bernoulli(psi);
        }
        if (!is_flight && pool.pauses.empty()) is_flight = true;

        Event donor = sample_event(pool, spec, z, is_flight, stream);
        if (cum + donor.dt >= gap_dur) break;  // overshooting draw is discarded

        Event e;
        e.kind = is_flight ? EventKind::Flight : EventKind::Pause;
        e.x = z.x; e.y = z.y; e.t = z.t;
        e.dx = is_flight ? donor.dx : 0.0;
        e.dy = is_flight ? donor.dy : 0.0;
        e.dt = donor.dt;
        e.observed = false;
        raw.push_back(e);

        cum += e.dt;
        z.x += e.dx;
        z.y += e.dy;
        z.t += e.dt;
        prev_flight = is_flight;
    }

    // Stretch the final kept event so the events tile the gap exactly
    // (displacement unchanged).
    if (!raw.empty()) raw.back().dt += gap_dur - cum;

    ImputedTrajectory out = bridge(raw, gap);
    out.psi_fallback = fallback_seen;
    return out;
}

std::vector<MobilityTrace> impute_trace(const MobilityTrace& trace, const KernelSpec& spec,
                                        int replicates, std::uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");

    EmpiricalPool pool;
    if (spec.family != KernelFamily::LI) pool = EmpiricalPool::from_trace(trace);

    std::vector<MobilityTrace> out;
    out.reserve(static_cast<std::size_t>(replicates));
    for (int b = 0; b < replicates; ++b) {
        MobilityTrace rep = trace;
        for (std::size_t gi = 0; gi < trace.gaps.size(); ++gi) {
            const auto& gap = trace.gaps[gi];
            ImputedTrajectory imp;
            if (spec.family == KernelFamily::LI) {
                imp = linear_interpolate(gap);
            } else {
                auto stream = rng::derive_stream(seed, static_cast<std::uint64_t>(b), gi);
                imp = simulate_gap(trace, gap, pool, spec, stream);
            }
            imp.replicate_index = b;
            rep.psi_fallback_used = rep.psi_fallback_used || imp.psi_fallback;
            rep.events.insert(rep.events.end(), imp.events.begin(), imp.events.end());
        }
        std::sort(rep.events.begin(), rep.events.end(),
                  [](const Event& a, const Event& b2) { return a.t < b2.t; });
        out.push_back(std::move(rep));
    }
    return out;
}

std::pair<double, double> confidence_interval(std::vector<double> values, double alpha) {
    const auto b = static_cast<long>(values.size());
    if (b < 2) throw std::invalid_argument("confidence_interval: need at least 2 values");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");
    std::sort(values.begin(), values.end());
    auto clamp_rank = [&](long r) { return std::clamp(r, 1L, b); };
    const long lo = clamp_rank(static_cast<long>(std::ceil(alpha / 2.0 * static_cast<double>(b))));
    const long hi = clamp_rank(static_cast<long>(std::floor((1.0 - alpha / 2.0) * static_cast<double>(b))));
    return {values[static_cast<std::size_t>(lo - 1)], values[static_cast<std::size_t>(hi - 1)]};
}

}  // namespace mobimpute

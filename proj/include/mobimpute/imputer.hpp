#pragma once

#include <cstdint>
#include <utility>

#include "mobimpute/kernels.hpp"
#include "mobimpute/rng.hpp"
#include "mobimpute/trace.hpp"

namespace mobimpute {

/// Observed donor events plus flight-adjacency records, the empirical
/// distributions the hot-deck draws from.
struct EmpiricalPool {
    std::vector<Event> flights;
    std::vector<Event> pauses;

    /// Consecutive observed event pair; z is the position of the later event.
    struct TransitionPair {
        bool prev_flight = false;
        bool cur_flight = false;
        PlanarPoint z;
    };
    std::vector<TransitionPair> pairs;

    static EmpiricalPool from_trace(const MobilityTrace& trace);

    std::size_t n_flights() const { return flights.size(); }
    std::size_t n_pauses() const { return pauses.size(); }
};

/// One imputed filling of a single gap.
struct ImputedTrajectory {
    std::vector<Event> events;  ///< observed = false, tiling [t_start, t_end]
    MissingInterval gap;
    int replicate_index = 0;
    std::uint64_t seed = 0;
    bool psi_fallback = false;
};

/// Kernel-weighted estimate of the probability that an event at z_new is a
/// flight given the previous event was a flight. Falls back to the global
/// flight fraction (and sets *used_fallback) when the trace has no
/// flight-to-anything transition pairs.
double estimate_psi(const EmpiricalPool& pool, const KernelSpec& spec,
                    const PlanarPoint& z_new, bool* used_fallback = nullptr);

/// Draw one donor displacement from the flight or pause pool, with
/// selection probability proportional to the kernel weight at z_new.
/// Throws std::runtime_error("no donors") on an empty pool.
Event sample_event(const EmpiricalPool& pool, const KernelSpec& spec,
                   const PlanarPoint& z_new, bool is_flight, rng::Stream& stream);

/// Simulate a flight/pause sequence across one gap and bridge it to the
/// anchors. The last kept event's duration is stretched so the events tile
/// the gap exactly.
ImputedTrajectory simulate_gap(const MobilityTrace& trace, const MissingInterval& gap,
                               const EmpiricalPool& pool, const KernelSpec& spec,
                               rng::Stream& stream);

/// Anchor a raw simulated displacement sequence to the gap endpoints while
/// keeping every segment straight. Empty input degenerates to linear
/// interpolation between the anchors.
ImputedTrajectory bridge(const std::vector<Event>& raw_events, const MissingInterval& gap);

/// The baseline: one straight flight between the anchors (a pause when they
/// coincide).
ImputedTrajectory linear_interpolate(const MissingInterval& gap);

/// Fill every gap of the trace B times. Replicate b and gap g draw from an
/// independent stream derived from (seed, b, g), so results are
/// deterministic. family = LI produces B identical copies.
std::vector<MobilityTrace> impute_trace(const MobilityTrace& trace, const KernelSpec& spec,
                                        int replicates, std::uint64_t seed);

/// Order-statistic interval over B replicate values: ranks
/// ceil(alpha/2 * B) and floor((1 - alpha/2) * B), 1-based, clamped.
std::pair<double, double> confidence_interval(std::vector<double> values, double alpha);

}  // namespace mobimpute

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobimpute/imputer.hpp"
#include "mobimpute/trace.hpp"

namespace mobimpute {

struct FeatureConfig {
    double home_radius_m = 200.0;
    double sigloc_radius_m = 200.0;
    double sigloc_min_s = 1800.0;
    double night_start_s = 0.0;       ///< seconds into the local day
    double night_end_s = 6.0 * 3600;  ///< 00:00-06:00 local
    double tz_offset_s = 0.0;         ///< local = utc + offset
};

struct SignificantLocation {
    int id = 0;
    double x = 0.0, y = 0.0;   ///< cluster center, meters
    double total_pause_s = 0.0;
    double night_pause_s = 0.0;
    bool is_home = false;
};

/// The 15 daily mobility measures, plus optional per-measure interval
/// bounds when computed over imputation replicates.
struct DailyFeatureVector {
    double day_start = 0.0;  ///< seconds, local-midnight boundary in UTC time
    bool valid = true;

    double hometime_min = 0.0;
    double dist_travelled_m = 0.0;
    double rog_m = 0.0;
    double max_diam_m = 0.0;
    double max_home_dist_m = 0.0;
    double sig_locs_visited = 0.0;
    double avg_flight_len_m = 0.0;
    double std_flight_len_m = 0.0;
    double avg_flight_dur_s = 0.0;
    double std_flight_dur_s = 0.0;
    double frac_pause = 0.0;
    double sig_loc_entropy = 0.0;
    double mins_missing = 0.0;
    double circdn_rtn = 0.0;
    double wkend_day_rtn = 0.0;

    std::vector<double> lo, hi;  ///< per-measure bounds in measure_names() order

    static const std::vector<std::string>& measure_names();
    std::vector<double> as_vector() const;
    void set_measure(std::size_t index, double value);
};

/// Cluster pause time into significant locations (centroid-linkage
/// agglomeration, merge radius cfg.sigloc_radius_m; significant when the
/// cluster holds at least cfg.sigloc_min_s of pause time). Ids are assigned
/// by descending total pause time.
std::vector<SignificantLocation> find_significant_locations(
    std::span<const MobilityTrace> traces, const FeatureConfig& cfg);

/// Pick home: the significant location with the most pause time in the
/// night window, ties broken by total pause time, then lowest id. Marks the
/// winner's is_home flag and returns its index (or npos if empty).
std::size_t estimate_home(std::vector<SignificantLocation>& locations,
                          const FeatureConfig& cfg);

/// Measures for one local day [day_start, day_start + 86400) of a completed
/// trace. mins_missing must be supplied from the pre-imputation trace.
/// circdn_rtn / wkend_day_rtn are filled later by fill_routine_measures.
DailyFeatureVector compute_daily_features(const MobilityTrace& trace, double day_start,
                                          std::span<const SignificantLocation> locations,
                                          const SignificantLocation* home,
                                          const FeatureConfig& cfg,
                                          double mins_missing);

/// Hourly occupancy distributions used for the routine measures: 24 bins x
/// (k significant locations + 1 "other") time shares.
std::vector<std::vector<double>> day_occupancy(const MobilityTrace& trace, double day_start,
                                               std::span<const SignificantLocation> locations,
                                               const FeatureConfig& cfg);

/// Fill circdn_rtn and wkend_day_rtn across a study's days. day_is_weekend
/// aligns with days/features.
void fill_routine_measures(std::vector<DailyFeatureVector>& days,
                           const std::vector<std::vector<std::vector<double>>>& occupancy,
                           const std::vector<bool>& day_is_weekend);

/// Per-measure order-statistic intervals over B replicate vectors; point
/// estimates become replicate means.
DailyFeatureVector feature_intervals(std::span<const DailyFeatureVector> replicate_vectors,
                                     double alpha);

/// Whole-trace measures used by the evaluation harness (no home/significant
/// location context): dist_travelled, rog, max_diam, avg/std flight length,
/// avg/std flight duration, frac_pause.
std::vector<double> trace_measures(const MobilityTrace& trace);
const std::vector<std::string>& trace_measure_names();

}  // namespace mobimpute

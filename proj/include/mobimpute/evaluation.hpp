#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mobimpute/features.hpp"
#include "mobimpute/kernels.hpp"
#include "mobimpute/trace.hpp"

namespace mobimpute {

/// Scheduled GPS duty cycle: data collected during on-periods, missing
/// during off-periods.
struct OnOffSchedule {
    double on_s = 120.0;
    double off_s = 600.0;
    double phase_s = 0.0;

    double cycle_s() const { return on_s + off_s; }
};

/// Imputation method under evaluation: a kernel family with its scale
/// multiplier (LI ignores the multiplier).
struct Method {
    std::string name;
    KernelSpec spec;
};

/// Signed relative errors (percent) per measure and method.
struct ErrorTable {
    std::vector<std::string> measures;        ///< row names
    std::vector<std::string> methods;         ///< column names
    std::vector<std::vector<double>> cells;   ///< [measure][method], percent
    std::vector<std::vector<bool>> flagged;   ///< near-zero truth: absolute error
    std::vector<double> mean_abs_error;       ///< per method, flagged cells skipped

    void finalize();  ///< recompute mean_abs_error
};

/// Keep a point iff ((t - phase) mod cycle) < on_s.
std::vector<PlanarPoint> impose_missingness(std::span<const PlanarPoint> points,
                                            const OnOffSchedule& schedule);
std::vector<GpsRecord> impose_missingness(std::span<const GpsRecord> records,
                                          const OnOffSchedule& schedule);

/// Degrade each truth trace by the schedule, impute with every method, and
/// score the 8 home-free trace measures against the truth. Truth traces must
/// be dense (median sampling interval <= 10 s); otherwise throws.
/// Cells aggregate mean relative error across traces; stochastic methods use
/// the mean measure over `replicates` imputations.
ErrorTable evaluate(std::span<const std::vector<PlanarPoint>> truth_traces,
                    const OnOffSchedule& schedule, std::span<const Method> methods,
                    int replicates, std::uint64_t seed,
                    const SegmentationConfig& seg_cfg = {});

struct PltParseResult {
    std::vector<GpsRecord> records;
    std::size_t malformed_lines = 0;
};

/// Parse a Geolife PLT payload (6 header lines, then
/// lat,lon,0,alt_ft,days,date,time rows). Malformed lines are skipped and
/// counted. Throws std::runtime_error("not a PLT file") when the header is
/// short.
PltParseResult parse_plt(const std::string& content);

/// Fraction of scheduled-on time with no observation within the tolerance
/// window; large values suggest unscheduled (MNAR-suspect) missingness.
double unscheduled_missingness(std::span<const PlanarPoint> points,
                               const OnOffSchedule& schedule,
                               double tolerance_s = 60.0);

/// Civil date/time to epoch seconds (UTC, proleptic Gregorian).
std::int64_t civil_to_epoch(int year, int month, int day, int hour, int minute, int second);

}  // namespace mobimpute

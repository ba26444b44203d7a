#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mobimpute/rng.hpp"

namespace mobimpute {

/// Semicircular-family trajectory model: n unit-duration flights whose mean
/// displacement rotates from angle theta0 down to -theta0; theta0 = 0 is a
/// straight line, theta0 = pi/2 a semicircle. d scales the expected flight
/// distance (sqrt(d) amplitude).
struct AnalyticModel {
    int n = 50;
    double theta0 = 0.0;       ///< radians, [0, pi/2]
    double d = 1.0;            ///< meters^2
    double sigma_x2 = 1.0;     ///< per-step displacement variance
    double sigma_y2 = 1.0;
};

enum class GapMethod { HotdeckOracle, LinearInterpolation };

/// Mean displacement (mu_x, mu_y) of the flight at integer step t in
/// [0, n-1]. Throws on out-of-range t.
std::pair<double, double> mean_displacement(const AnalyticModel& model, int t);

/// n independent displacement draws: mean path plus Gaussian noise.
std::vector<std::pair<double, double>> simulate_analytic_trace(const AnalyticModel& model,
                                                               rng::Stream& stream);

/// Closed form for the average squared gap of the bridged hot-deck
/// surrogate: ((n-1)/3) * (sigma_x2 + sigma_y2). Free of theta0.
double expected_gap_hotdeck(const AnalyticModel& model);

/// Closed form for linear interpolation:
/// ((n-1)/6) * (sigma_x2 + sigma_y2) + mean over t of M(t), where M(t) is
/// the squared mean-path deviation term (zero at t = 0, t = n, and for
/// constant mean displacement).
double expected_gap_li(const AnalyticModel& model);

/// M(t) for a single t; exposed for verification against the direct sum.
double mean_path_term(const AnalyticModel& model, int t);

/// Monte Carlo estimate of the average squared gap between a fresh truth
/// trajectory and its surrogate, averaged over reps replicates.
double monte_carlo_gap(const AnalyticModel& model, GapMethod method, int reps,
                       std::uint64_t seed);

/// One row of the bias experiment: for a missingness level, the truth
/// distance travelled, the LI point estimate, and the TL band over
/// replicates.
struct JitterBiasRow {
    double missing_fraction = 0.0;
    double truth_dist = 0.0;
    double li_dist = 0.0;
    double tl_mean = 0.0;
    double tl_lo = 0.0;
    double tl_hi = 0.0;
};

/// Jittered-semicircle bias experiment: build a noisy semicircular truth
/// trace, remove evenly spaced intervals at each missingness level, and
/// estimate distance travelled by LI and by TL hot-deck imputation
/// (replicates paths, alpha-level order-statistic band).
std::vector<JitterBiasRow> jittered_semicircle(const AnalyticModel& model, double jitter_scale,
                                               const std::vector<double>& missing_fractions,
                                               int replicates, double alpha,
                                               std::uint64_t seed);

}  // namespace mobimpute

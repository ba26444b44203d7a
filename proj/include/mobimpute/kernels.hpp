#pragma once

#include "mobimpute/geo.hpp"

namespace mobimpute {

/// Donor-weighting assumption. LI is the linear-interpolation baseline,
/// exposed as a pseudo-family so the evaluation harness can treat all
/// methods uniformly.
enum class KernelFamily { TL, GL, GLC, LI };

/// Resampling-weight specification. Scale constants are per-unit: c
/// multiplies seconds (TL) or meters (GL); GLC uses c1 (meters) and c2
/// (seconds). scale defaults give kernel widths of roughly an hour / a few
/// hundred meters; experiment columns like "TL.20" multiply them.
struct KernelSpec {
    KernelFamily family = KernelFamily::TL;
    double nu = 1.0;         ///< t-distribution degrees of freedom
    double c = 1.0 / 3600.0; ///< TL: 1/s, GL: 1/m
    double c1 = 1.0 / 500.0; ///< GLC spatial, 1/m
    double c2 = 1.0 / 3600.0;///< GLC circadian, 1/s
    double day_length_s = 86400.0;

    static KernelSpec make(KernelFamily family, double nu = 1.0,
                           double scale_multiplier = 1.0);
};

/// Standard Student-t density with nu degrees of freedom.
/// Throws std::invalid_argument on nu <= 0.
double t_density(double u, double nu);

/// Resampling weight of donor event position z_j for a new position z_new.
/// Strictly positive for finite inputs.
double weight(const KernelSpec& spec, const PlanarPoint& z_new, const PlanarPoint& z_j);

/// Circadian lag: min(|dt| mod s, s - |dt| mod s), always in [0, s/2].
double circadian_lag(double dt, double day_length_s);

}  // namespace mobimpute

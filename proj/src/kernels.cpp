#include "mobimpute/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace mobimpute {

KernelSpec KernelSpec::make(KernelFamily family, double nu, double scale_multiplier) {
    KernelSpec s;
    s.family = family;
    s.nu = nu;
    s.c = scale_multiplier * (family == KernelFamily::TL ? 1.0 / 3600.0 : 1.0 / 500.0);
    s.c1 = scale_multiplier / 500.0;
    s.c2 = scale_multiplier / 3600.0;
    return s;
}

double t_density(double u, double nu) {
    if (nu <= 0.0) throw std::invalid_argument("t_density: nu must be positive");
    const double lognorm = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                           0.5 * std::log(nu * kPi);
    return std::exp(lognorm - (nu + 1.0) / 2.0 * std::log1p(u * u / nu));
}

double circadian_lag(double dt, double day_length_s) {
    double m = std::fmod(std::abs(dt), day_length_s);
    return std::min(m, day_length_s - m);
}

double weight(const KernelSpec& spec, const PlanarPoint& z_new, const PlanarPoint& z_j) {
    switch (spec.family) {
        case KernelFamily::TL:
            return t_density(spec.c * (z_new.t - z_j.t), spec.nu);
        case KernelFamily::GL: {
            const double d = std::hypot(z_new.x - z_j.x, z_new.y - z_j.y);
            return t_density(spec.c * d, spec.nu);
        }
        case KernelFamily::GLC: {
            const double d = std::hypot(z_new.x - z_j.x, z_new.y - z_j.y);
            const double lag = circadian_lag(z_new.t - z_j.t, spec.day_length_s);
            return t_density(spec.c1 * d, spec.nu) * t_density(spec.c2 * lag, spec.nu);
        }
        case KernelFamily::LI:
            return 1.0;  // uniform; LI never resamples, but keep it defined
    }
    return 1.0;
}

}  // namespace mobimpute

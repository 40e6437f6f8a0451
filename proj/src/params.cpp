#include "esbgk/params.hpp"

#include <algorithm>
#include <cmath>

#include "esbgk/error.hpp"

namespace esbgk {

void validate(const ModelParams& p) {
    if (p.d < 1 || p.d > 3) throw ValidationError("d", "velocity dimension must be 1, 2 or 3");
    if (!(p.delta > 0.0) || !std::isfinite(p.delta))
        throw ValidationError("delta", "internal degrees of freedom must be > 0");
    if (!(p.nu > -0.5 && p.nu < 1.0)) throw ValidationError("nu", "must satisfy -1/2 < nu < 1");
    if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw ValidationError("theta", "must satisfy 0 <= theta <= 1");
    if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw ValidationError("mu", "viscosity must be > 0");
}

double anisotropy_weight(const ModelParams& p) { return std::max(p.nu, -(p.d - 1) * p.nu); }

double coercivity_constant(const ModelParams& p) {
    if (p.theta > 0.0) return p.theta;
    return std::min(1.0 - p.nu, 1.0 + (p.d - 1) * p.nu);
}

}  // namespace esbgk

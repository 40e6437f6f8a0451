#pragma once

namespace esbgk {

/// Free parameters of the polyatomic ES-BGK model.
struct ModelParams {
    int d = 3;           ///< velocity dimension, 1..3
    double delta = 2.0;  ///< internal degrees of freedom, > 0
    double nu = 0.0;     ///< anisotropy parameter, -1/2 < nu < 1
    double theta = 1.0;  ///< translational/internal exchange, 0 <= theta <= 1
    double mu = 1.0;     ///< viscosity, > 0
};

/// Throws ValidationError naming the offending field.
void validate(const ModelParams& params);

/// Denominator 1 - nu + theta*nu of the collision frequency.
inline double frequency_denominator(const ModelParams& p) { return 1.0 - p.nu + p.theta * p.nu; }

/// max{nu, -(d-1) nu}, i.e. max{nu, -2nu} at d = 3.
double anisotropy_weight(const ModelParams& p);

/// Coercivity constant of the entropy production bound:
/// theta when theta > 0, otherwise min{1-nu, 1+(d-1)nu}.
double coercivity_constant(const ModelParams& p);

}  // namespace esbgk

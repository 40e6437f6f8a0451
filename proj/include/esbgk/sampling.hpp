#pragma once

#include <cstdint>
#include <random>

#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"

namespace esbgk {

/// Deterministic per-sample seed derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded generator of random moment data.
class StateSampler {
public:
    explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi);
    double log_uniform(double lo, double hi);
    double normal();

    /// Haar-like orthogonal frame: Q of the QR factorization of a Gaussian
    /// matrix, columns sign-fixed so that R has a positive diagonal.
    Mat random_rotation(int d);

    /// Q diag(lambda) Q^T with lambda log-uniform in [0.2, 5] * T_scale.
    Mat random_spd(int d, double T_scale);

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

enum class Regime { theta_pos, theta_zero };

struct SampleRanges {
    int d = 3;
    double delta_min = 0.5, delta_max = 6.0;
    double nu_min = -0.49, nu_max = 0.99;
    double theta_min = 0.0, theta_max = 1.0;  ///< theta_pos draws from (theta_min, theta_max], or exactly theta_max when equal
    double T_scale = 1.0;
    double rho_min = 0.1, rho_max = 10.0;
};

/// Throws ValidationError when a range leaves the admissible parameter set.
void validate(const SampleRanges& ranges, Regime regime);

struct SampledCase {
    ModelParams params;
    MacroState state;
};

/// Random admissible parameters and moment state: SPD Theta from
/// random_spd, T_int log-uniform in [0.2, 5] * T_scale, rho log-uniform.
SampledCase sample_case(StateSampler& sampler, const SampleRanges& ranges, Regime regime);

}  // namespace esbgk

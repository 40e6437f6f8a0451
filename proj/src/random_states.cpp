#include <Eigen/QR>
#include <cmath>

#include "esbgk/error.hpp"
#include "esbgk/sampling.hpp"

namespace esbgk {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double StateSampler::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

double StateSampler::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

double StateSampler::normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

Mat StateSampler::random_rotation(int d) {
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Mat StateSampler::random_spd(int d, double T_scale) {
    Vec lambda(d);
    for (int i = 0; i < d; ++i) lambda[i] = log_uniform(0.2 * T_scale, 5.0 * T_scale);
    const Mat q = random_rotation(d);
    Mat s = q * lambda.asDiagonal() * q.transpose();
    return 0.5 * (s + s.transpose());
}

void validate(const SampleRanges& r, Regime regime) {
    if (r.d < 1 || r.d > 3) throw ValidationError("d", "velocity dimension must be 1, 2 or 3");
    if (!(r.delta_min > 0.0) || !(r.delta_max >= r.delta_min))
        throw ValidationError("delta", "range must satisfy 0 < delta_min <= delta_max");
    if (!(r.nu_min > -0.5) || !(r.nu_max < 1.0) || !(r.nu_max >= r.nu_min))
        throw ValidationError("nu", "range must lie inside (-1/2, 1)");
    if (regime == Regime::theta_pos &&
        (!(r.theta_min >= 0.0) || !(r.theta_max <= 1.0) || !(r.theta_max > 0.0) || !(r.theta_max >= r.theta_min)))
        throw ValidationError("theta", "range must lie inside [0, 1] with 0 < theta_max and theta_min <= theta_max");
    if (!(r.T_scale > 0.0)) throw ValidationError("T_scale", "must be > 0");
    if (!(r.rho_min > 0.0) || !(r.rho_max >= r.rho_min)) throw ValidationError("rho", "range must be positive");
}

SampledCase sample_case(StateSampler& s, const SampleRanges& r, Regime regime) {
    SampledCase c;
    c.params.d = r.d;
    c.params.delta = s.uniform(r.delta_min, r.delta_max);
    c.params.nu = s.uniform(r.nu_min, r.nu_max);
    if (regime == Regime::theta_zero) {
        c.params.theta = 0.0;
    } else {
        // (theta_min, theta_max]: reflect the half-open uniform draw.
        c.params.theta = r.theta_max - s.uniform(0.0, r.theta_max - r.theta_min);
        if (c.params.theta <= r.theta_min || r.theta_max == r.theta_min) c.params.theta = r.theta_max;
    }
    c.params.mu = 1.0;
    const double rho = s.log_uniform(r.rho_min, r.rho_max);
    Vec U(r.d);
    for (int a = 0; a < r.d; ++a) U[a] = s.normal();
    const Mat theta = s.random_spd(r.d, r.T_scale);
    const double T_int = s.log_uniform(0.2 * r.T_scale, 5.0 * r.T_scale);
    c.state = MacroState::from_primitive(rho, U, theta, T_int, c.params.delta);
    return c;
}

}  // namespace esbgk

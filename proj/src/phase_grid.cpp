#include "esbgk/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esbgk/error.hpp"
#include "esbgk/sym_eigen.hpp"

namespace esbgk {

GridSpec GridSpec::uniform(int d, int n_v, double half_width, const Vec& center, int n_I, double I_max) {
    GridSpec s;
    for (int a = 0; a < d; ++a) {
        s.n_v[a] = n_v;
        s.half_width[a] = half_width;
        s.center[a] = center.size() > a ? center[a] : 0.0;
    }
    s.n_I = n_I;
    s.I_max = I_max;
    return s;
}

GridSpec GridSpec::refined() const {
    GridSpec s = *this;
    for (auto& n : s.n_v) n *= 2;
    s.n_I *= 2;
    return s;
}

NodeProfile default_profile(int d) {
    switch (d) {
        case 1: return {256, 256};
        case 2: return {64, 192};
        default: return {32, 192};
    }
}

PhaseGrid::PhaseGrid(const GridSpec& spec, const ModelParams& params)
    : spec_(spec), d_(params.d), delta_(params.delta) {
    validate(params);
    for (int a = 0; a < d_; ++a) {
        if (spec.n_v[a] < kMinNodes)
            throw ValidationError("grid.n_v", "at least " + std::to_string(kMinNodes) + " nodes per axis required");
        if (!(spec.half_width[a] > 0.0) || !std::isfinite(spec.half_width[a]))
            throw ValidationError("grid.L_v", "velocity half-width must be > 0");
        if (!std::isfinite(spec.center[a])) throw ValidationError("grid.center", "must be finite");
    }
    if (spec.n_I < kMinNodes)
        throw ValidationError("grid.n_I", "at least " + std::to_string(kMinNodes) + " internal-energy nodes required");
    if (!(spec.I_max > 0.0) || !std::isfinite(spec.I_max)) throw ValidationError("grid.I_max", "must be > 0");

    for (int a = 0; a < d_; ++a) {
        const int n = spec.n_v[a];
        const double h = 2.0 * spec.half_width[a] / n;
        const double lo = spec.center[a] - spec.half_width[a];
        axes_[a] = Eigen::ArrayXd(n);
        for (int j = 0; j < n; ++j) axes_[a][j] = lo + (j + 0.5) * h;
        velocity_weight_ *= h;
        n_vel_ *= static_cast<std::size_t>(n);
    }

    n_int_ = static_cast<std::size_t>(spec.n_I);
    internal_weight_ = spec.I_max / spec.n_I;
    internal_ = Eigen::ArrayXd(spec.n_I);
    energy_ = Eigen::ArrayXd(spec.n_I);
    const double power = 2.0 / delta_;
    for (int k = 0; k < spec.n_I; ++k) {
        internal_[k] = (k + 0.5) * internal_weight_;
        energy_[k] = std::pow(internal_[k], power);
    }
    weight_ = velocity_weight_ * internal_weight_;

    velocities_.resize(d_, static_cast<Eigen::Index>(n_vel_));
    for (std::size_t vn = 0; vn < n_vel_; ++vn) {
        std::size_t rest = vn;
        for (int a = 0; a < d_; ++a) {
            const auto n = static_cast<std::size_t>(spec.n_v[a]);
            velocities_(a, static_cast<Eigen::Index>(vn)) = axes_[a][static_cast<Eigen::Index>(rest % n)];
            rest /= n;
        }
    }
}

double PhaseGrid::box_measure() const {
    double m = spec_.I_max;
    for (int a = 0; a < d_; ++a) m *= 2.0 * spec_.half_width[a];
    return m;
}

double integrate(const PhaseGrid& grid, GridFunctionView values) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
        throw std::invalid_argument("integrate: grid function size does not match the grid");
    const double* v = values.data();
    const double sum = pairwise_sum(grid.size(), [v](std::size_t i) {
        if (!std::isfinite(v[i])) throw NonFiniteError(i, "integrate: non-finite grid value");
        return v[i];
    });
    return grid.weight() * sum;
}

GridSpec auto_bounds(const MacroState& state, const ModelParams& params, double safety, NodeProfile profile) {
    validate(params);
    if (!(safety >= 4.0)) throw ValidationError("safety", "safety factor must be >= 4");
    if (!(state.T_delta > 0.0) || !(state.T_int > 0.0) || !(state.T_tr > 0.0))
        throw ValidationError("state", "temperatures must be positive");
    const auto eig = jacobi_eigen(state.Theta);
    if (!(eig.values[0] > 0.0)) throw ValidationError("state.Theta", "stress tensor must be positive definite");

    const double spread = std::max(eig.values[eig.values.size() - 1], state.T_delta);
    const double t_star = std::max(state.T_int, state.T_delta);
    // exp(-I^{2/delta}/T*) = 1e-12 at I^{2/delta} = 12 ln(10) T*; the factor makes it strict.
    const double energy_cut = 12.0 * std::numbers::ln10 * t_star * (1.0 + 1e-9);
    const double I_max = std::pow(energy_cut, params.delta / 2.0);

    return GridSpec::uniform(params.d, profile.n_v, safety * std::sqrt(spread), state.U, profile.n_I, I_max);
}

GridSpec auto_bounds(const MacroState& state, const ModelParams& params, double safety) {
    return auto_bounds(state, params, safety, default_profile(params.d));
}

DistSnapshot::DistSnapshot(GridFunction cell)
    : values(std::move(cell)), cell_size(static_cast<std::size_t>(values.size())) {}

DistSnapshot::DistSnapshot(std::size_t cell_size_, std::size_t n_x_, double dx_)
    : values(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cell_size_ * n_x_))),
      cell_size(cell_size_),
      n_x(n_x_),
      dx(dx_) {}

}  // namespace esbgk

#pragma once

#include <array>
#include <cstddef>

#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"
#include "esbgk/reduce.hpp"
#include "esbgk/types.hpp"

namespace esbgk {

inline constexpr int kMinNodes = 8;

/// Truncated box [c - L, c + L]^d x [0, I_max] and its node counts.
/// Only the first d entries of the per-axis arrays are used.
struct GridSpec {
    std::array<int, kMaxDim> n_v{};
    std::array<double, kMaxDim> half_width{};
    std::array<double, kMaxDim> center{};
    int n_I = 0;
    double I_max = 0.0;

    /// Same count and half-width on every velocity axis.
    static GridSpec uniform(int d, int n_v, double half_width, const Vec& center, int n_I, double I_max);

    /// Every node count doubled, same box.
    GridSpec refined() const;
};

/// Node counts of the default resolution profile for dimension d.
struct NodeProfile {
    int n_v;
    int n_I;
};
NodeProfile default_profile(int d);

/// Cell-centred product grid on (v, I) with midpoint-rule weights.
///
/// Flat node index: k + n_I * (j_0 + n_v0 * (j_1 + n_v1 * j_2)), i.e. the
/// internal-energy index runs fastest, then velocity axes in order.
/// Immutable after construction.
class PhaseGrid {
public:
    PhaseGrid(const GridSpec& spec, const ModelParams& params);

    int dim() const { return d_; }
    double delta() const { return delta_; }
    const GridSpec& spec() const { return spec_; }

    std::size_t size() const { return n_vel_ * n_int_; }
    std::size_t velocity_nodes() const { return n_vel_; }
    std::size_t internal_nodes() const { return n_int_; }

    /// Midpoint nodes of velocity axis a.
    const Eigen::ArrayXd& axis(int a) const { return axes_[a]; }
    /// Midpoint nodes of the I axis.
    const Eigen::ArrayXd& internal() const { return internal_; }
    /// I^{2/delta} at each I node.
    const Eigen::ArrayXd& internal_energy() const { return energy_; }
    /// d x velocity_nodes() table of velocity coordinates.
    const Eigen::MatrixXd& velocities() const { return velocities_; }
    Vec velocity(std::size_t vnode) const { return velocities_.col(static_cast<Eigen::Index>(vnode)); }

    /// Product of cell widths; every node carries this weight.
    double weight() const { return weight_; }
    double velocity_weight() const { return velocity_weight_; }
    double internal_weight() const { return internal_weight_; }
    /// Volume of the truncated box, prod(2 L_a) * I_max.
    double box_measure() const;

private:
    GridSpec spec_;
    int d_;
    double delta_;
    std::size_t n_vel_ = 1;
    std::size_t n_int_ = 0;
    std::array<Eigen::ArrayXd, kMaxDim> axes_;
    Eigen::ArrayXd internal_;
    Eigen::ArrayXd energy_;
    Eigen::MatrixXd velocities_;
    double velocity_weight_ = 1.0;
    double internal_weight_ = 0.0;
    double weight_ = 0.0;
};

/// Alias matching the construction operation.
inline PhaseGrid build_grid(const GridSpec& spec, const ModelParams& params) { return PhaseGrid(spec, params); }

/// Sum over nodes of weight * values, pairwise-reduced. Throws
/// NonFiniteError naming the first non-finite node.
double integrate(const PhaseGrid& grid, GridFunctionView values);

/// Quadrature of an integrand given node-wise, integrand(node) -> double.
template <typename F>
double integrate_nodes(const PhaseGrid& grid, F&& integrand) {
    return grid.weight() * pairwise_sum(grid.size(), std::forward<F>(integrand));
}

/// Box that holds the state's Gaussian closures: centre U, half-width
/// safety * sqrt(max(lambda_max(Theta), T_delta)), and I_max with
/// exp(-I_max^{2/delta} / T*) < 1e-12, T* = max(T_int, T_delta).
/// Node counts come from `profile`.
GridSpec auto_bounds(const MacroState& state, const ModelParams& params, double safety, NodeProfile profile);
GridSpec auto_bounds(const MacroState& state, const ModelParams& params, double safety = 6.0);

/// Grid functions of one or more spatial cells sharing one PhaseGrid.
struct DistSnapshot {
    Eigen::ArrayXd values;
    std::size_t cell_size = 0;
    std::size_t n_x = 1;
    double dx = 0.0;

    DistSnapshot() = default;
    explicit DistSnapshot(GridFunction cell);
    DistSnapshot(std::size_t cell_size, std::size_t n_x, double dx);

    auto cell(std::size_t i) { return values.segment(static_cast<Eigen::Index>(i * cell_size), static_cast<Eigen::Index>(cell_size)); }
    auto cell(std::size_t i) const { return values.segment(static_cast<Eigen::Index>(i * cell_size), static_cast<Eigen::Index>(cell_size)); }
};

}  // namespace esbgk

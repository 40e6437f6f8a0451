#include "esbgk/moments.hpp"

#include <array>
#include <cmath>

#include "esbgk/error.hpp"

namespace esbgk {

MacroState MacroState::from_primitive(double rho, const Vec& U, const Mat& Theta, double T_int, double delta) {
    const int d = static_cast<int>(U.size());
    MacroState s;
    s.rho = rho;
    s.U = U;
    s.Theta = 0.5 * (Theta + Theta.transpose());
    s.T_tr = s.Theta.trace() / d;
    s.T_int = T_int;
    s.E_tr = 0.5 * d * s.T_tr;
    s.E_int = 0.5 * delta * T_int;
    s.E_delta = s.E_tr + s.E_int;
    s.T_delta = 2.0 * s.E_delta / (d + delta);
    return s;
}

namespace {

/// Per velocity node: sum over I of f and of f * I^{2/delta}.
struct VelocityMarginals {
    Eigen::ArrayXd mass;
    Eigen::ArrayXd internal;
};

VelocityMarginals velocity_marginals(GridFunctionView f, const PhaseGrid& grid) {
    if (static_cast<std::size_t>(f.size()) != grid.size())
        throw std::invalid_argument("moments: grid function size does not match the grid");
    const auto n_vel = static_cast<Eigen::Index>(grid.velocity_nodes());
    const auto n_int = static_cast<Eigen::Index>(grid.internal_nodes());
    const auto& eps = grid.internal_energy();
    VelocityMarginals m{Eigen::ArrayXd(n_vel), Eigen::ArrayXd(n_vel)};
    for (Eigen::Index vn = 0; vn < n_vel; ++vn) {
        const double* row = f.data() + vn * n_int;
        double s0 = 0.0, se = 0.0;
        for (Eigen::Index k = 0; k < n_int; ++k) {
            s0 += row[k];
            se += row[k] * eps[k];
        }
        if (!std::isfinite(s0) || !std::isfinite(se))
            throw NonFiniteError(static_cast<std::size_t>(vn * n_int), "moments: non-finite distribution value");
        m.mass[vn] = s0;
        m.internal[vn] = se;
    }
    return m;
}

template <std::size_t N, typename Leaf>
std::array<double, N> reduce_velocity(std::size_t n_vel, Leaf&& leaf) {
    return tree_reduce(
        std::size_t{0}, n_vel, kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            std::array<double, N> acc{};
            for (std::size_t i = b; i < e; ++i) leaf(i, acc);
            return acc;
        },
        [](std::array<double, N> a, const std::array<double, N>& b) {
            for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
            return a;
        });
}

}  // namespace

MacroState compute_moments(GridFunctionView f, const PhaseGrid& grid) {
    const int d = grid.dim();
    const auto marg = velocity_marginals(f, grid);
    const auto& vel = grid.velocities();

    // [mass, first moments (3), internal energy]
    const auto first = reduce_velocity<5>(grid.velocity_nodes(), [&](std::size_t i, auto& acc) {
        const auto vn = static_cast<Eigen::Index>(i);
        const double m = marg.mass[vn];
        acc[0] += m;
        for (int a = 0; a < d; ++a) acc[1 + a] += m * vel(a, vn);
        acc[4] += marg.internal[vn];
    });

    MacroState s;
    s.rho = grid.weight() * first[0];
    if (!std::isfinite(s.rho)) throw NonFiniteError(0, "moments: non-finite density");
    if (!(s.rho >= kVacuumFloor)) throw VacuumError("moments: density below vacuum floor");

    s.U = Vec(d);
    for (int a = 0; a < d; ++a) s.U[a] = first[1 + a] / first[0];

    // Central second moments, upper triangle in row order.
    const auto second = reduce_velocity<6>(grid.velocity_nodes(), [&](std::size_t i, auto& acc) {
        const auto vn = static_cast<Eigen::Index>(i);
        const double m = marg.mass[vn];
        double c[kMaxDim];
        for (int a = 0; a < d; ++a) c[a] = vel(a, vn) - s.U[a];
        int slot = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) acc[slot++] += m * c[a] * c[b];
    });

    s.Theta = Mat(d, d);
    int slot = 0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            s.Theta(a, b) = second[slot] / first[0];
            s.Theta(b, a) = s.Theta(a, b);
            ++slot;
        }

    const double delta = grid.delta();
    s.E_tr = 0.5 * s.Theta.trace();
    s.E_int = first[4] / first[0];
    s.E_delta = s.E_tr + s.E_int;
    s.T_tr = 2.0 * s.E_tr / d;
    s.T_int = 2.0 * s.E_int / delta;
    s.T_delta = 2.0 * s.E_delta / (d + delta);
    if (!std::isfinite(s.E_delta) || !s.Theta.allFinite()) throw NonFiniteError(0, "moments: non-finite energy");
    return s;
}

CorrectedTensor corrected_tensor(const MacroState& state, const ModelParams& p) {
    const int d = state.dim();
    CorrectedTensor ct;
    ct.T_relax = p.theta * state.T_delta + (1.0 - p.theta) * state.T_int;
    const Mat id = Mat::Identity(d, d);
    ct.tensor = p.theta * state.T_delta * id + (1.0 - p.theta) * ((1.0 - p.nu) * state.T_tr * id + p.nu * state.Theta);
    ct.eigen = jacobi_eigen(ct.tensor);
    if (!(ct.eigen.values[0] > 0.0))
        throw DefinitenessError("corrected temperature tensor is not positive definite (min eigenvalue " +
                                std::to_string(ct.eigen.values[0]) + ")");
    if (!(ct.T_relax > 0.0)) throw DefinitenessError("relaxation temperature is not positive");
    return ct;
}

double collision_frequency(const MacroState& state, const ModelParams& p) {
    return state.rho * state.T_delta / (p.mu * frequency_denominator(p));
}

ConservedMoments conserved_moments(GridFunctionView f, const PhaseGrid& grid) {
    const int d = grid.dim();
    const auto marg = velocity_marginals(f, grid);
    const auto& vel = grid.velocities();
    const auto sums = reduce_velocity<5>(grid.velocity_nodes(), [&](std::size_t i, auto& acc) {
        const auto vn = static_cast<Eigen::Index>(i);
        const double m = marg.mass[vn];
        double v2 = 0.0;
        acc[0] += m;
        for (int a = 0; a < d; ++a) {
            acc[1 + a] += m * vel(a, vn);
            v2 += vel(a, vn) * vel(a, vn);
        }
        acc[4] += 0.5 * v2 * m + marg.internal[vn];
    });
    ConservedMoments c;
    const double w = grid.weight();
    c.mass = w * sums[0];
    c.momentum = Vec(d);
    for (int a = 0; a < d; ++a) c.momentum[a] = w * sums[1 + a];
    c.energy = w * sums[4];
    return c;
}

}  // namespace esbgk

#include "esbgk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "esbgk/error.hpp"
#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"

namespace esbgk {

void validate(const SolverConfig& cfg) {
    validate(cfg.params);
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("solver.dt", "time step must be > 0");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ValidationError("solver.t_end", "final time must be > 0");
    if (cfg.report_every < 1) throw ValidationError("solver.report_every", "must be >= 1");
    if (cfg.transport) {
        if (cfg.transport->n_x < 1) throw ValidationError("solver.transport.n_x", "need at least one cell");
        if (!(cfg.transport->dx > 0.0)) throw ValidationError("solver.transport.dx", "cell width must be > 0");
        if (!cfg.transport->periodic)
            throw ValidationError("solver.transport.periodic", "only periodic boundaries are supported");
    }
}

void relaxation_target_into(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                            const PhaseGrid& grid, bool matched, Eigen::Ref<GridFunction> out) {
    GaussianSpec spec = closure_spec(GaussianKind::nu_theta, state, ct, params);
    if (matched) {
        Gaussian(match_discrete_moments(spec, grid)).sample_into(grid, out);
    } else {
        Gaussian(spec, ct.eigen).sample_into(grid, out);
    }
}

GridFunction relaxation_target(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                               const PhaseGrid& grid, bool matched) {
    GridFunction out(static_cast<Eigen::Index>(grid.size()));
    relaxation_target_into(state, ct, params, grid, matched, out);
    return out;
}

namespace {

constexpr double kFrequencyLimit = 0.5;

std::string describe(const MacroState& s) {
    std::ostringstream os;
    os.precision(17);
    os << "rho=" << s.rho << " U=[" << s.U.transpose() << "] T_tr=" << s.T_tr << " T_int=" << s.T_int
       << " T_delta=" << s.T_delta << " Theta=[" << s.Theta.reshaped().transpose() << "]";
    return os.str();
}

/// A (M(f) - f) together with the frequency used.
struct Rate {
    GridFunction value;
    double A;
};

Rate relaxation_rate(GridFunctionView f, const SolverConfig& cfg, const PhaseGrid& grid) {
    const MacroState state = compute_moments(f, grid);
    CorrectedTensor ct;
    try {
        ct = corrected_tensor(state, cfg.params);
    } catch (const DefinitenessError& e) {
        throw DefinitenessError(std::string(e.what()) + "; state: " + describe(state));
    }
    const double A = collision_frequency(state, cfg.params);
    GridFunction M = relaxation_target(state, ct, cfg.params, grid, cfg.matched_closures);
    return {A * (M - f), A};
}

void check_frequency(double A, double dt) {
    if (dt > kFrequencyLimit / A * (1.0 + 1e-12))
        throw ValidationError("solver.dt", "dt exceeds 0.5 / A (A = " + std::to_string(A) + ")");
}

/// f <- e^{-A dt} f + (1 - e^{-A dt}) M(f), with `work` holding M(f).
void exponential_update(Eigen::Ref<GridFunction> f, double dt, const SolverConfig& cfg, const PhaseGrid& grid,
                        Eigen::Ref<GridFunction> work) {
    const MacroState state = compute_moments(f, grid);
    CorrectedTensor ct;
    try {
        ct = corrected_tensor(state, cfg.params);
    } catch (const DefinitenessError& e) {
        throw DefinitenessError(std::string(e.what()) + "; state: " + describe(state));
    }
    const double A = collision_frequency(state, cfg.params);
    check_frequency(A, dt);
    relaxation_target_into(state, ct, cfg.params, grid, cfg.matched_closures, work);
    const double keep = std::exp(-A * dt);
    const double gain = -std::expm1(-A * dt);
    f = keep * f + gain * work;
}

GridFunction step_with(GridFunctionView f, double dt, const SolverConfig& cfg, const PhaseGrid& grid) {
    if (cfg.scheme == Scheme::exponential) {
        GridFunction out = f;
        GridFunction work(f.size());
        exponential_update(out, dt, cfg, grid, work);
        return out;
    }
    const Rate k1 = relaxation_rate(f, cfg, grid);
    check_frequency(k1.A, dt);
    const GridFunction f2 = f + 0.5 * dt * k1.value;
    const Rate k2 = relaxation_rate(f2, cfg, grid);
    const GridFunction f3 = f + 0.5 * dt * k2.value;
    const Rate k3 = relaxation_rate(f3, cfg, grid);
    const GridFunction f4 = f + dt * k3.value;
    const Rate k4 = relaxation_rate(f4, cfg, grid);
    return f + (dt / 6.0) * (k1.value + 2.0 * k2.value + 2.0 * k3.value + k4.value);
}

ConservationDrift drift_between(const ConservedMoments& c0, const ConservedMoments& c, double thermal_speed) {
    ConservationDrift d;
    d.mass = std::abs(c.mass - c0.mass) / c0.mass;
    d.momentum = (c.momentum - c0.momentum).norm() / (c0.mass * thermal_speed);
    d.energy = std::abs(c.energy - c0.energy) / c0.energy;
    return d;
}

}  // namespace

GridFunction step_homogeneous(GridFunctionView f, const SolverConfig& cfg, const PhaseGrid& grid) {
    return step_with(f, cfg.dt, cfg, grid);
}

bool Trajectory::all_certificates_passed() const {
    if (failure) return false;
    return std::all_of(stamps.begin(), stamps.end(), [](const Stamp& s) { return s.report.all_passed(); });
}

Trajectory run_homogeneous(GridFunctionView f0, const SolverConfig& cfg, const PhaseGrid& grid) {
    validate(cfg);
    Trajectory traj;
    EntropyOptions opts = cfg.entropy;
    opts.matched_closures = cfg.matched_closures;

    const MacroState s0 = compute_moments(f0, grid);
    check_frequency(collision_frequency(s0, cfg.params), cfg.dt);
    const ConservedMoments c0 = conserved_moments(f0, grid);
    const double thermal_speed = std::sqrt(s0.T_delta);

    const auto n_steps = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    GridFunction f = f0;
    GridFunction work(f.size());
    double t = 0.0;

    auto record = [&](int step) {
        Stamp st;
        st.step = step;
        st.t = t;
        st.state = compute_moments(f, grid);
        st.report = certify_theorem(f, st.state, corrected_tensor(st.state, cfg.params), cfg.params, grid, opts);
        st.drift = drift_between(c0, conserved_moments(f, grid), thermal_speed);
        traj.stamps.push_back(std::move(st));
    };

    try {
        record(0);
        if (cfg.track_entropy) traj.entropy_history.emplace_back(t, traj.stamps.back().report.H_f);
        for (int n = 1; n <= n_steps; ++n) {
            const double dt = (n == n_steps) ? cfg.t_end - cfg.dt * (n_steps - 1) : cfg.dt;
            if (cfg.scheme == Scheme::exponential) {
                exponential_update(f, dt, cfg, grid, work);
            } else {
                f = step_with(f, dt, cfg, grid);
            }
            t = (n == n_steps) ? cfg.t_end : n * cfg.dt;
            if (cfg.track_entropy) traj.entropy_history.emplace_back(t, h_functional(f, grid));
            if (n % cfg.report_every == 0 || n == n_steps) record(n);
        }
    } catch (const Error& e) {
        std::ostringstream os;
        os << "t=" << t << ": " << e.what();
        traj.failure = os.str();
    }
    traj.final_state = std::move(f);
    return traj;
}

DistSnapshot transport_step(const DistSnapshot& F, double dt, const PhaseGrid& grid) {
    if (F.cell_size != grid.size()) throw std::invalid_argument("transport_step: cell size does not match the grid");
    if (!(F.dx > 0.0)) throw ValidationError("solver.transport.dx", "cell width must be > 0");
    const double v_max = grid.axis(0).abs().maxCoeff();
    if (dt * v_max > 0.9 * F.dx)
        throw ValidationError("solver.dt", "CFL violated: dt * v_max = " + std::to_string(dt * v_max) +
                                               " > 0.9 dx = " + std::to_string(0.9 * F.dx));

    DistSnapshot out = F;
    const std::size_t nx = F.n_x;
    const std::size_t N = F.cell_size;
    const std::size_t n_int = grid.internal_nodes();
    const double* in = F.values.data();
    double* o = out.values.data();
    for (std::size_t vn = 0; vn < grid.velocity_nodes(); ++vn) {
        const double v = grid.velocities()(0, static_cast<Eigen::Index>(vn));
        const double c = v * dt / F.dx;
        for (std::size_t k = 0; k < n_int; ++k) {
            const std::size_t node = vn * n_int + k;
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t left = (i + nx - 1) % nx, right = (i + 1) % nx;
                const double fi = in[i * N + node];
                // Upwind difference in the direction the node advects from.
                const double diff = v >= 0.0 ? fi - in[left * N + node] : in[right * N + node] - fi;
                o[i * N + node] = fi - c * diff;
            }
        }
    }
    return out;
}

DistSnapshot transport_step(const DistSnapshot& F, const SolverConfig& cfg, const PhaseGrid& grid) {
    return transport_step(F, cfg.dt, grid);
}

DistSnapshot strang_step(const DistSnapshot& F, const SolverConfig& cfg, const PhaseGrid& grid) {
    auto relax = [&](DistSnapshot& G) {
        for (std::size_t i = 0; i < G.n_x; ++i) {
            const GridFunction cell = G.cell(i);
            G.cell(i) = step_with(cell, 0.5 * cfg.dt, cfg, grid);
        }
    };
    DistSnapshot G = F;
    relax(G);
    G = transport_step(G, cfg.dt, grid);
    relax(G);
    return G;
}

TransportTrajectory run_transport(const DistSnapshot& F0, const SolverConfig& cfg, const PhaseGrid& grid) {
    validate(cfg);
    if (!cfg.transport) throw ValidationError("solver.transport", "transport is not configured");
    if (F0.n_x != cfg.transport->n_x) throw ValidationError("solver.transport.n_x", "does not match the snapshot");

    EntropyOptions opts = cfg.entropy;
    opts.matched_closures = cfg.matched_closures;
    TransportTrajectory traj;
    DistSnapshot F = F0;
    F.dx = cfg.transport->dx;

    auto total_mass = [&](const DistSnapshot& G) {
        return pairwise_sum(G.n_x, [&](std::size_t i) { return G.dx * integrate(grid, G.cell(i)); });
    };
    const double m0 = total_mass(F);
    double t = 0.0;

    auto record = [&](int step) {
        TransportStamp st;
        st.step = step;
        st.t = t;
        st.total_mass = total_mass(F);
        st.mass_drift = std::abs(st.total_mass - m0) / m0;
        st.H_min_cell = std::numeric_limits<double>::infinity();
        st.H_max_cell = -std::numeric_limits<double>::infinity();
        st.min_theorem_gap = std::numeric_limits<double>::infinity();
        double h_total = 0.0;
        for (std::size_t i = 0; i < F.n_x; ++i) {
            const GridFunction cell = F.cell(i);
            const MacroState s = compute_moments(cell, grid);
            const auto rep = certify_theorem(cell, s, corrected_tensor(s, cfg.params), cfg.params, grid, opts);
            st.finite = st.finite && std::isfinite(rep.H_f) && std::isfinite(rep.D);
            st.certificates_passed = st.certificates_passed && rep.all_passed();
            st.H_min_cell = std::min(st.H_min_cell, rep.H_f);
            st.H_max_cell = std::max(st.H_max_cell, rep.H_f);
            st.min_theorem_gap = std::min(st.min_theorem_gap, rep.theorem_gap);
            h_total += F.dx * rep.H_f;
        }
        st.H_total = h_total;
        traj.stamps.push_back(st);
    };

    const auto n_steps = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    try {
        record(0);
        for (int n = 1; n <= n_steps; ++n) {
            F = strang_step(F, cfg, grid);
            t = n * cfg.dt;
            if (n % cfg.report_every == 0 || n == n_steps) record(n);
        }
    } catch (const Error& e) {
        std::ostringstream os;
        os << "t=" << t << ": " << e.what();
        traj.failure = os.str();
    }
    traj.final_state = std::move(F);
    return traj;
}

}  // namespace esbgk

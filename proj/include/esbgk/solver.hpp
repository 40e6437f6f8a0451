#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esbgk/entropy.hpp"
#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"

namespace esbgk {

enum class Scheme { exponential, rk4 };

struct TransportConfig {
    std::size_t n_x = 0;
    double dx = 0.0;
    bool periodic = true;
};

struct SolverConfig {
    double dt = 0.0;
    double t_end = 0.0;
    Scheme scheme = Scheme::exponential;
    int report_every = 1;
    ModelParams params;
    std::optional<TransportConfig> transport;
    /// Relax toward discretely moment-matched Gaussians (conserves mass,
    /// momentum and energy to roundoff on the grid).
    bool matched_closures = true;
    /// Record H(f) after every step, not only at report stamps.
    bool track_entropy = true;
    EntropyOptions entropy;
};

/// Checks dt, t_end, report_every and the model parameters. The frequency
/// and CFL limits depend on the data and are checked by the steppers.
void validate(const SolverConfig& cfg);

/// Relaxation target M_{nu,theta}(f) as used by the solver.
GridFunction relaxation_target(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                               const PhaseGrid& grid, bool matched);
void relaxation_target_into(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                            const PhaseGrid& grid, bool matched, Eigen::Ref<GridFunction> out);

/// One step of df/dt = A (M(f) - f).
GridFunction step_homogeneous(GridFunctionView f, const SolverConfig& cfg, const PhaseGrid& grid);

struct ConservationDrift {
    double mass = 0.0;      ///< |m - m0| / m0
    double momentum = 0.0;  ///< |p - p0| / (m0 sqrt(T_delta0))
    double energy = 0.0;    ///< |E - E0| / E0
};

struct Stamp {
    int step = 0;
    double t = 0.0;
    MacroState state;
    EntropyReport report;
    ConservationDrift drift;
};

struct Trajectory {
    std::vector<Stamp> stamps;
    /// (t, H(f)) after every step when tracked; includes t = 0.
    std::vector<std::pair<double, double>> entropy_history;
    std::optional<std::string> failure;
    GridFunction final_state;

    bool all_certificates_passed() const;
};

/// Steps f0 to t_end and reports every `report_every` steps (plus the first
/// and last step). A failing step truncates the trajectory and records why.
Trajectory run_homogeneous(GridFunctionView f0, const SolverConfig& cfg, const PhaseGrid& grid);

/// First-order upwind advection along velocity axis 0 over the periodic
/// x-cells of F. Throws ValidationError when dt violates the CFL limit.
DistSnapshot transport_step(const DistSnapshot& F, double dt, const PhaseGrid& grid);
DistSnapshot transport_step(const DistSnapshot& F, const SolverConfig& cfg, const PhaseGrid& grid);

/// Relax dt/2, transport dt, relax dt/2.
DistSnapshot strang_step(const DistSnapshot& F, const SolverConfig& cfg, const PhaseGrid& grid);

struct TransportStamp {
    int step = 0;
    double t = 0.0;
    double total_mass = 0.0;
    double mass_drift = 0.0;
    double H_total = 0.0;
    double H_min_cell = 0.0;
    double H_max_cell = 0.0;
    double min_theorem_gap = 0.0;
    bool finite = true;
    bool certificates_passed = true;
};

struct TransportTrajectory {
    std::vector<TransportStamp> stamps;
    std::optional<std::string> failure;
    DistSnapshot final_state;
};

TransportTrajectory run_transport(const DistSnapshot& F0, const SolverConfig& cfg, const PhaseGrid& grid);

}  // namespace esbgk

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esbgk/sampling.hpp"
#include "esbgk/snapshot_io.hpp"
#include "esbgk/scenario.hpp"
#include "esbgk/solver.hpp"

namespace esbgk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificateFailure = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitRuntimeError = 3;

/// Overrides every configured output directory when set.
inline constexpr const char* kOutputDirEnv = "ESBGK_OUTPUT_DIR";

std::filesystem::path resolve_output_dir(const std::string& configured);

/// Least-squares fit of ln(rel_target) against t over the stamps whose
/// relative entropy is still above the roundoff floor.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
    bool valid = false;
};
DecayFit fit_log_decay(const Trajectory& traj);

/// Trajectory-level checks derived from the decay estimates.
struct TrajectoryCheck {
    std::string name;
    double worst = 0.0;  ///< largest observed ratio (value / bound); passes iff <= 1
    bool passed = true;
};

struct TrajectoryChecks {
    DecayFit fit;
    double reference_rate = 0.0;  ///< theta A (theta > 0) or A c / 2 (theta = 0)
    std::vector<TrajectoryCheck> checks;
    bool all_passed() const;
};

/// Entropy decay bound, L1 bound, temperature dichotomy, H monotonicity
/// and conservation along a homogeneous trajectory.
TrajectoryChecks check_trajectory(const Trajectory& traj, const ModelParams& params, double conservation_tol = 1e-8);

/// Trajectory CSV, one row per stamp. Columns:
/// t, rho, U_1..U_d, T_tr, T_int, T_delta, H_f, D, A, rel_H_target,
/// theorem_gap, l1_to_target, kullback_bound, mass_drift, mom_drift, energy_drift.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int d);
std::vector<std::string> trajectory_csv_header(int d);

/// Transport CSV columns:
/// t, total_mass, mass_drift, H_total, H_min_cell, H_max_cell, min_theorem_gap, finite, certificates_passed.
void write_transport_csv(std::ostream& os, const TransportTrajectory& traj);

/// Final report document as JSON text.
std::string homogeneous_report_json(const Scenario& scenario, const SolverConfig& cfg, const GridSpec& grid,
                                    const Trajectory& traj, const TrajectoryChecks& checks);
std::string transport_report_json(const Scenario& scenario, const SolverConfig& cfg, const GridSpec& grid,
                                  const TransportTrajectory& traj);

/// Runs a scenario file and writes its artifacts. Returns the exit status.
int run_scenario_file(const std::string& path, std::ostream& out, std::ostream& err);

struct SweepSummary {
    Regime regime = Regime::theta_pos;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
    double min_gap = 0.0;
    std::size_t min_gap_sample = 0;
    double max_gap = 0.0;
    /// theta = 0 only: explicit difference formula against the generic closed form.
    double explicit_max_rel_mismatch = 0.0;
    std::size_t explicit_mismatches = 0;  ///< samples beyond explicit_rel_tol
    double explicit_rel_tol = 1e-12;
    double seconds = 0.0;
};

/// Closed-form lemma certificate on `samples` seeded random states.
SweepSummary certify_sweep(std::size_t samples, std::uint64_t seed, Regime regime, const SampleRanges& ranges);
std::string sweep_json(const SweepSummary& s);

struct RefinementRow {
    GaussianKind kind = GaussianKind::m01;
    double H_closed = 0.0;
    double H_base = 0.0;
    double H_refined = 0.0;
    double err_base = 0.0;
    double err_refined = 0.0;
    double ratio = 0.0;  ///< err_base / err_refined
    double budget = 0.0; ///< 1e-3 (1 + |H_closed|)
};

struct RefinementStudy {
    GridSpec base;
    GridSpec refined;
    std::vector<RefinementRow> rows;
    double H_f0_base = 0.0;
    double H_f0_refined = 0.0;
    /// Suggested tol_quad_rel: largest base-grid error over rho (1 + |H|).
    double calibrated_tol_rel = 0.0;
};

/// Closed-form vs quadrature H of the four closures of `state` on `base`
/// and on base.refined(). `f0`, when given, is also measured on both grids.
RefinementStudy refinement_study(const MacroState& state, const ModelParams& params, const GridSpec& base,
                                 const std::vector<MixtureComponent>* f0 = nullptr);
std::string refinement_json(const RefinementStudy& study);
int refine_scenario_file(const std::string& path, std::ostream& out, std::ostream& err);

struct SnapshotDiff {
    bool metadata_equal = false;
    std::size_t values_a = 0;
    std::size_t values_b = 0;
    std::size_t differing_values = 0;
    double max_abs_diff = 0.0;
    bool identical() const { return metadata_equal && values_a == values_b && differing_values == 0; }
};

SnapshotDiff diff_snapshots(const SnapshotFile& a, const SnapshotFile& b);
int snapshot_diff_files(const std::string& a, const std::string& b, std::ostream& out, std::ostream& err);

}  // namespace esbgk

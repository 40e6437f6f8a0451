#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esbgk/error.hpp"
#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"
#include "esbgk/solver.hpp"

namespace esbgk {

/// Malformed scenario text; carries the 1-based line and column.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// One Gaussian of an initial mixture, in absolute density units.
struct MixtureComponent {
    double rho = 1.0;
    Vec U;
    Mat Theta;
    double T_int = 1.0;
};

enum class InitialFamily { maxwellian01, maxwellian00, gaussian_theta, bimodal, random_mixture };

const char* to_string(InitialFamily family);

struct InitialCondition {
    InitialFamily family = InitialFamily::maxwellian01;
    /// Resolved components (random_mixture draws them from the scenario seed).
    std::vector<MixtureComponent> components;
};

/// Spatial modulation of the initial cell for transport runs:
/// rho(x) = rho (1 + rho_amplitude sin(2 pi x / (n_x dx))),
/// temperatures scaled by 1 + T_amplitude cos(2 pi x / (n_x dx)).
struct Modulation {
    double rho_amplitude = 0.0;
    double T_amplitude = 0.0;
};

enum class SnapshotPolicy { none, final_only, initial_and_final };

struct OutputSpec {
    std::string dir = "esbgk_out";
    std::string prefix = "run";
    SnapshotPolicy snapshots = SnapshotPolicy::final_only;
};

/// Time controls as written; resolved against the initial collision
/// frequency by resolve_solver().
struct TimeSpec {
    std::optional<double> dt;
    std::optional<int> steps;
    std::optional<double> t_end;
    std::optional<double> A_t_end;  ///< t_end in units of 1 / A(f0)
};

struct Scenario {
    ModelParams params;
    std::optional<GridSpec> grid;  ///< empty means "auto"
    double auto_safety = 6.0;
    std::optional<NodeProfile> auto_profile;
    InitialCondition initial;
    TimeSpec time;
    SolverConfig solver;  ///< dt and t_end filled by resolve_solver()
    Modulation modulation;
    OutputSpec outputs;
    std::uint64_t seed = 0;
};

/// Parses and validates scenario JSON. ParseError for malformed text,
/// ValidationError (field = JSON path) for bad values.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Exact moments of a Gaussian mixture.
MacroState mixture_moments(const std::vector<MixtureComponent>& components, double delta);

/// Node values of the mixture on a grid.
GridFunction sample_mixture(const std::vector<MixtureComponent>& components, const ModelParams& params,
                            const PhaseGrid& grid);

/// The scenario's grid: explicit, or auto_bounds of the mixture moments.
GridSpec scenario_grid(const Scenario& scenario);

/// Initial data: one cell, or n_x modulated cells when transport is on.
DistSnapshot initial_data(const Scenario& scenario, const PhaseGrid& grid);

/// Fills solver.dt and solver.t_end from the time controls and the
/// collision frequency of the initial data.
SolverConfig resolve_solver(const Scenario& scenario, const DistSnapshot& f0, const PhaseGrid& grid);

}  // namespace esbgk

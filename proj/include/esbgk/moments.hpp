#pragma once

#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"
#include "esbgk/sym_eigen.hpp"

namespace esbgk {

/// Densities below this are treated as vacuum.
inline constexpr double kVacuumFloor = 1e-12;

/// Macroscopic fields of a single cell. Temperatures are derived from the
/// energy integrals, so the equipartition relations hold by construction.
/// Theta is the symmetric second central velocity moment.
MacroState compute_moments(GridFunctionView f, const PhaseGrid& grid);

/// Relaxation temperature T_theta and corrected tensor T_{nu,theta}.
struct CorrectedTensor {
    double T_relax = 0.0;
    Mat tensor;
    SymEigen<double> eigen;  ///< ascending; all > 0 once accepted
};

/// T_theta = theta T_delta + (1-theta) T_int,
/// T_{nu,theta} = theta T_delta Id + (1-theta)((1-nu) T_tr Id + nu Theta).
/// Throws DefinitenessError when the tensor is not positive definite.
CorrectedTensor corrected_tensor(const MacroState& state, const ModelParams& params);

/// A_{nu,theta} = rho T_delta / (mu (1 - nu + theta nu)).
double collision_frequency(const MacroState& state, const ModelParams& params);

/// Collision invariants: mass, momentum and total energy 1/2|v|^2 + I^{2/delta}.
struct ConservedMoments {
    double mass = 0.0;
    Vec momentum;
    double energy = 0.0;
};
ConservedMoments conserved_moments(GridFunctionView f, const PhaseGrid& grid);

}  // namespace esbgk

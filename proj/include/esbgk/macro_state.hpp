#pragma once

#include "esbgk/types.hpp"

namespace esbgk {

/// Macroscopic fields of one spatial cell.
///
/// Temperatures follow from the specific energies by equipartition:
/// E_tr = (d/2) T_tr, E_int = (delta/2) T_int, E_delta = ((d+delta)/2) T_delta,
/// and trace(Theta) = d T_tr.
struct MacroState {
    double rho = 0.0;
    Vec U;
    Mat Theta;
    double E_tr = 0.0;
    double E_int = 0.0;
    double E_delta = 0.0;
    double T_tr = 0.0;
    double T_int = 0.0;
    double T_delta = 0.0;

    int dim() const { return static_cast<int>(U.size()); }

    /// Consistent state from (rho, U, Theta, T_int); the other fields are derived.
    static MacroState from_primitive(double rho, const Vec& U, const Mat& Theta, double T_int, double delta);
};

}  // namespace esbgk

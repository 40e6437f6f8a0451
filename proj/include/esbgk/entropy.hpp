#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "esbgk/gaussians.hpp"
#include "esbgk/macro_state.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"

namespace esbgk {

/// H(f) = int f ln f, with 0 ln 0 = 0.
double h_functional(GridFunctionView f, const PhaseGrid& grid);

/// H(f|g) = int f ln(f/g). Throws SupportError where f > 0 = g.
double relative_entropy(GridFunctionView f, GridFunctionView g, const PhaseGrid& grid);

/// Where f falls below this (and M > 0) ln f is evaluated at the floor.
inline constexpr double kLogFloor = 1e-300;

struct ProductionDetail {
    double value = 0.0;
    std::size_t clamped_nodes = 0;
};

/// D = -A int (M - f) ln f.
double entropy_production(GridFunctionView f, GridFunctionView M, double A, const PhaseGrid& grid);
ProductionDetail entropy_production_detail(GridFunctionView f, GridFunctionView M, double A, const PhaseGrid& grid);

/// H of the Gaussian with covariance eigenvalues `eigenvalues` and internal
/// temperature T_I:
///   rho ln(rho Lambda) - rho/2 sum ln(2 pi lambda_i) - (delta/2) rho ln T_I - ((d+delta)/2) rho.
template <typename Scalar>
Scalar gaussian_entropy(Scalar rho, Scalar lambda, const VecN<Scalar>& eigenvalues, Scalar T_I, Scalar delta) {
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar log_det = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) log_det += std::log(two_pi * eigenvalues[i]);
    const auto d = static_cast<Scalar>(eigenvalues.size());
    return rho * std::log(rho * lambda) - Scalar(0.5) * rho * log_det - Scalar(0.5) * delta * rho * std::log(T_I) -
           Scalar(0.5) * (d + delta) * rho;
}

/// Exact H of one of the four closures (no quadrature).
double h_closed_form(GaussianKind kind, const MacroState& state, const CorrectedTensor& ct, const ModelParams& params);
double h_closed_form(GaussianKind kind, const MacroState& state, const ModelParams& params);

struct LemmaCertificate {
    double gap = 0.0;        ///< LHS - RHS
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;  ///< passes iff gap >= -tolerance
    bool passed = false;
};

/// H(M01) - H(M_{nu,theta}) >= (1-theta)(H(M01) - H(M_Theta)), 0 < theta <= 1.
LemmaCertificate certify_lemma21(const MacroState& state, const ModelParams& params, double rel_tol = 1e-12);

/// H(M00) - H(M_{nu,0}) >= max{nu, -(d-1)nu}(H(M00) - H(M_Theta)), theta = 0.
struct Lemma31Certificate : LemmaCertificate {
    double explicit_difference = 0.0;  ///< explicit_lemma31_difference()
    double generic_difference = 0.0;   ///< H(M00) - H(M_{nu,0}) from h_closed_form
};
Lemma31Certificate certify_lemma31(const MacroState& state, const ModelParams& params, double rel_tol = 1e-12);

/// Explicit theta = 0 difference
///   rho/2 { d(1-nu) ln T_tr + nu ln det Theta - d ln T_tr }            (nu >= 0)
///   rho/2 { d(1+(d-1)nu) ln T_tr - (d-1)nu ln det Theta - d ln T_tr }  (nu <= 0)
double explicit_lemma31_difference(const MacroState& state, const ModelParams& params);

/// H(M01) <= H(M_Theta) <= H(f).
struct Lemma22Certificate {
    double gap_closures = 0.0;  ///< H(M_Theta) - H(M01), closed forms
    double gap_f = 0.0;         ///< H(f) - H(M_Theta), quadrature vs closed form
    double tol_closures = 0.0;
    double tol_f = 0.0;
    bool passed = false;
};
Lemma22Certificate certify_lemma22(GridFunctionView f, const MacroState& state, const ModelParams& params,
                                   const PhaseGrid& grid, double closed_form_rel = 1e-3);

double l1_distance(GridFunctionView f, GridFunctionView g, const PhaseGrid& grid);
/// sqrt(2 m H(f|g)) for densities of common mass m.
double kullback_bound(double rel_entropy, double mass = 1.0);

struct KullbackCertificate {
    double l1 = 0.0;
    double bound = 0.0;
    bool passed = false;
};
/// ||f-g||_1 <= sqrt(2 m H(f|g)) + tol with m the mass of f. Throws HypothesisError when the masses
/// differ by more than mass_rel_tol.
KullbackCertificate certify_kullback(GridFunctionView f, GridFunctionView g, double rel_entropy,
                                     const PhaseGrid& grid, double tol, double mass_rel_tol = 5e-3);

struct EntropyOptions {
    /// Use discretely moment-matched closures (the solver's conservative
    /// Gaussians) instead of pointwise ones.
    bool matched_closures = true;
    double tol_quad_rel = 1e-4;     ///< tol_quad = tol_quad_rel * rho * (1 + |H(f)|)
    double closed_form_rel = 1e-3;  ///< closed form vs quadrature budget
    double lemma_rel = 1e-12;
    double mass_rel_tol = 5e-3;
};

struct NamedCertificate {
    std::string name;
    double value = 0.0;      ///< the slack being certified
    double tolerance = 0.0;  ///< passes iff value >= -tolerance
    bool passed = false;
};

/// Entropy diagnostics of one cell at one instant.
struct EntropyReport {
    double H_f = 0.0;
    double H_M_nu_theta = 0.0;  ///< closed forms
    double H_M01 = 0.0;
    double H_M00 = 0.0;
    double H_MTheta = 0.0;
    double D = 0.0;
    double rel_H01 = 0.0;
    double rel_H00 = 0.0;
    double A = 0.0;
    double coercivity = 0.0;    ///< theta, or min{1-nu, 1+(d-1)nu} at theta = 0
    double theorem_gap = 0.0;   ///< D - coercivity * A * H(f | target)
    double convexity_gap = 0.0; ///< D - A (H(f) - H(M_{nu,theta})), both by quadrature
    double lemma_gap = 0.0;     ///< certify_lemma21 (theta > 0) or certify_lemma31 (theta = 0) gap
    double lemma22_gap_closures = 0.0;
    double lemma22_gap_f = 0.0;
    double l1_to_target = 0.0;
    double kullback_bound = 0.0;
    double tol_quad = 0.0;
    std::size_t floor_nodes = 0;
    GaussianKind target = GaussianKind::m01;
    std::vector<NamedCertificate> certificates;

    double rel_target() const { return target == GaussianKind::m01 ? rel_H01 : rel_H00; }
    bool all_passed() const;
};

/// Regime-correct target: M01 for theta > 0, M00 for theta = 0.
GaussianKind regime_target(const ModelParams& params);

/// Assembles the full report for cell f with moments `state`.
EntropyReport certify_theorem(GridFunctionView f, const MacroState& state, const CorrectedTensor& ct,
                              const ModelParams& params, const PhaseGrid& grid, const EntropyOptions& options = {});

}  // namespace esbgk

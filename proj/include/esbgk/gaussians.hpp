#pragma once

#include "esbgk/macro_state.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"
#include "esbgk/sym_eigen.hpp"

namespace esbgk {

/// Exponents beyond this evaluate to exactly zero.
inline constexpr double kUnderflowExponent = 700.0;

/// 1 / int_0^inf exp(-I^{2/delta}) dI = 2 / (delta Gamma(delta/2)).
double lambda_delta(double delta);

/// The same constant from adaptive quadrature of the defining integral.
double lambda_delta_by_quadrature(double delta, double rel_tol = 1e-13);

/// Parameters of a polyatomic Gaussian
///   rho Lambda / (sqrt(det 2 pi Sigma) T_I^{delta/2})
///     * exp(-1/2 (v-U)^T Sigma^{-1} (v-U) - I^{2/delta} / T_I).
struct GaussianSpec {
    double rho = 1.0;
    Vec U;
    Mat covariance;
    double T_I = 1.0;
    double delta = 2.0;
    double lambda = 1.0;
};

/// The four closures built from one cell's moments.
enum class GaussianKind {
    nu_theta,  ///< M_{nu,theta}: covariance T_{nu,theta}, internal T_theta
    theta,     ///< M_Theta: covariance Theta, internal T_int
    m01,       ///< M_{0,1}: covariance T_delta Id, internal T_delta
    m00,       ///< M_{0,0}: covariance T_tr Id, internal T_int
};

const char* to_string(GaussianKind kind);

GaussianSpec closure_spec(GaussianKind kind, const MacroState& state, const ModelParams& params);
GaussianSpec closure_spec(GaussianKind kind, const MacroState& state, const CorrectedTensor& ct,
                          const ModelParams& params);

/// Evaluator of a GaussianSpec. The quadratic form and determinant come from
/// the eigen-decomposition of the covariance.
class Gaussian {
public:
    explicit Gaussian(GaussianSpec spec);
    Gaussian(GaussianSpec spec, const SymEigen<double>& eigen);

    const GaussianSpec& spec() const { return spec_; }
    const SymEigen<double>& eigen() const { return eigen_; }
    double prefactor() const { return prefactor_; }

    /// 1/2 (v-U)^T Sigma^{-1} (v-U), evaluated in the eigenbasis.
    double velocity_exponent(const Vec& v) const;
    double internal_exponent(double I) const;

    double operator()(const Vec& v, double I) const;

    /// Node values on a grid, same arithmetic as operator().
    GridFunction sample(const PhaseGrid& grid) const;
    void sample_into(const PhaseGrid& grid, Eigen::Ref<GridFunction> out) const;

private:
    GaussianSpec spec_;
    SymEigen<double> eigen_;
    double prefactor_ = 0.0;
};

GridFunction ellipsoidal_gaussian(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                                  const PhaseGrid& grid);
GridFunction maxwellian_01(const MacroState& state, const ModelParams& params, const PhaseGrid& grid);
GridFunction maxwellian_00(const MacroState& state, const ModelParams& params, const PhaseGrid& grid);
GridFunction gaussian_theta(const MacroState& state, const ModelParams& params, const PhaseGrid& grid);

/// Adjusts (rho, U, covariance, T_I) so that the discrete moments of the
/// sampled Gaussian (mass, mean, covariance, mean of I^{2/delta}) equal the
/// continuous moments of `target`. Conservative closure for the solver.
GaussianSpec match_discrete_moments(const GaussianSpec& target, const PhaseGrid& grid);

}  // namespace esbgk

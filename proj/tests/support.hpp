#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "esbgk/macro_state.hpp"
#include "esbgk/params.hpp"
#include "esbgk/phase_grid.hpp"
#include "esbgk/sampling.hpp"

// Reference computations that avoid the library's own code paths.
namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

/// Adaptive Simpson quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, 50);
}

/// Adaptive quadrature on [a, b] split into n equal panels.
inline double integrate_panels(const std::function<double(double)>& f, double a, double b, int n, double eps = 1e-13) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += integrate(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n, eps / n);
    return s;
}

inline double lambda(double delta) { return 2.0 / (delta * std::tgamma(0.5 * delta)); }

/// Polyatomic Gaussian density, inverse and determinant through LDLT.
inline double gaussian(double rho, const Eigen::VectorXd& U, const Eigen::MatrixXd& Sigma, double T_I, double delta,
                       const Eigen::VectorXd& v, double I) {
    const int d = static_cast<int>(U.size());
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(Sigma);
    const Eigen::VectorXd w = v - U;
    const double q = w.dot(ldlt.solve(w));
    const double det = Sigma.determinant();
    const double norm = rho * lambda(delta) / (std::sqrt(std::pow(2.0 * std::numbers::pi, d) * det) *
                                               std::pow(T_I, 0.5 * delta));
    return norm * std::exp(-0.5 * q - std::pow(I, 2.0 / delta) / T_I);
}

/// Entropy of the polyatomic Gaussian, determinant through Eigen's LU.
inline double gaussian_entropy(double rho, const Eigen::MatrixXd& Sigma, double T_I, double delta) {
    const int d = static_cast<int>(Sigma.rows());
    const double det2pi = (2.0 * std::numbers::pi * Sigma).determinant();
    return rho * std::log(rho * lambda(delta)) - 0.5 * rho * std::log(det2pi) - 0.5 * delta * rho * std::log(T_I) -
           0.5 * (d + delta) * rho;
}

}  // namespace oracle

namespace testing {

inline esbgk::MacroState isotropic_state(int d, double rho, double T_tr, double T_int, double delta,
                                         const esbgk::Vec& U = {}) {
    const esbgk::Vec u = U.size() == d ? U : esbgk::Vec(esbgk::Vec::Zero(d));
    return esbgk::MacroState::from_primitive(rho, u, T_tr * esbgk::Mat::Identity(d, d), T_int, delta);
}

inline esbgk::MacroState anisotropic_state(int d, double delta) {
    esbgk::Mat Theta(d, d);
    if (d == 1) {
        Theta << 1.3;
    } else if (d == 2) {
        Theta << 1.4, 0.3, 0.3, 0.6;
    } else {
        Theta << 1.4, 0.3, -0.1, 0.3, 0.6, 0.05, -0.1, 0.05, 0.9;
    }
    esbgk::Vec U(d);
    for (int a = 0; a < d; ++a) U[a] = 0.2 - 0.15 * a;
    return esbgk::MacroState::from_primitive(1.0, U, Theta, 0.7, delta);
}

inline esbgk::ModelParams params(int d, double delta, double nu, double theta, double mu = 1.0) {
    esbgk::ModelParams p;
    p.d = d;
    p.delta = delta;
    p.nu = nu;
    p.theta = theta;
    p.mu = mu;
    return p;
}

/// Auto-sized grid with explicit node counts.
inline esbgk::GridSpec grid_for(const esbgk::MacroState& s, const esbgk::ModelParams& p, int n_v, int n_I,
                                double safety = 7.0) {
    return esbgk::auto_bounds(s, p, safety, {n_v, n_I});
}

}  // namespace testing

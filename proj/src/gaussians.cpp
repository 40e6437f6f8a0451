#include "esbgk/gaussians.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "esbgk/error.hpp"

namespace esbgk {

double lambda_delta(double delta) {
    if (!(delta > 0.0)) throw ValidationError("delta", "internal degrees of freedom must be > 0");
    return 2.0 / (delta * std::tgamma(0.5 * delta));
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double lambda_delta_by_quadrature(double delta, double rel_tol) {
    if (!(delta > 0.0)) throw ValidationError("delta", "internal degrees of freedom must be > 0");
    const double power = 2.0 / delta;
    const std::function<double(double)> f = [power](double I) { return std::exp(-std::pow(I, power)); };
    // Dyadic panels [0,1], [1,2], [2,4], ... out to exp(-I^{2/delta}) ~ e^{-60}.
    const double cut = std::pow(60.0, 0.5 * delta);
    double total = 0.0;
    double a = 0.0, b = 1.0;
    while (a < cut) {
        const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * std::max(whole, 1e-300), 40);
        a = b;
        b *= 2.0;
    }
    return 1.0 / total;
}

const char* to_string(GaussianKind kind) {
    switch (kind) {
        case GaussianKind::nu_theta: return "M_nu_theta";
        case GaussianKind::theta: return "M_Theta";
        case GaussianKind::m01: return "M01";
        case GaussianKind::m00: return "M00";
    }
    return "?";
}

GaussianSpec closure_spec(GaussianKind kind, const MacroState& state, const CorrectedTensor& ct,
                          const ModelParams& params) {
    const int d = state.dim();
    GaussianSpec s;
    s.rho = state.rho;
    s.U = state.U;
    s.delta = params.delta;
    s.lambda = lambda_delta(params.delta);
    switch (kind) {
        case GaussianKind::nu_theta:
            s.covariance = ct.tensor;
            s.T_I = ct.T_relax;
            break;
        case GaussianKind::theta:
            s.covariance = state.Theta;
            s.T_I = state.T_int;
            break;
        case GaussianKind::m01:
            s.covariance = state.T_delta * Mat::Identity(d, d);
            s.T_I = state.T_delta;
            break;
        case GaussianKind::m00:
            s.covariance = state.T_tr * Mat::Identity(d, d);
            s.T_I = state.T_int;
            break;
    }
    return s;
}

GaussianSpec closure_spec(GaussianKind kind, const MacroState& state, const ModelParams& params) {
    if (kind == GaussianKind::nu_theta) return closure_spec(kind, state, corrected_tensor(state, params), params);
    return closure_spec(kind, state, CorrectedTensor{}, params);
}

Gaussian::Gaussian(GaussianSpec spec) : Gaussian(spec, jacobi_eigen(spec.covariance)) {}

Gaussian::Gaussian(GaussianSpec spec, const SymEigen<double>& eigen) : spec_(std::move(spec)), eigen_(eigen) {
    const auto d = spec_.U.size();
    if (spec_.covariance.rows() != d || spec_.covariance.cols() != d || eigen_.values.size() != d)
        throw std::invalid_argument("Gaussian: covariance and mean dimensions differ");
    if (!(eigen_.values[0] > 0.0)) throw DefinitenessError("Gaussian: covariance is not positive definite");
    if (!(spec_.T_I > 0.0)) throw DefinitenessError("Gaussian: internal temperature is not positive");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det += std::log(2.0 * std::numbers::pi * eigen_.values[i]);
    prefactor_ = spec_.rho * spec_.lambda * std::exp(-0.5 * log_det - 0.5 * spec_.delta * std::log(spec_.T_I));
}

double Gaussian::velocity_exponent(const Vec& v) const {
    const Vec y = eigen_.vectors.transpose() * (v - spec_.U);
    double q = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) q += y[i] * y[i] / eigen_.values[i];
    return 0.5 * q;
}

double Gaussian::internal_exponent(double I) const { return std::pow(I, 2.0 / spec_.delta) / spec_.T_I; }

double Gaussian::operator()(const Vec& v, double I) const {
    const double ev = velocity_exponent(v);
    const double ei = internal_exponent(I);
    if (ev + ei > kUnderflowExponent) return 0.0;
    return prefactor_ * std::exp(-ev) * std::exp(-ei);
}

GridFunction Gaussian::sample(const PhaseGrid& grid) const {
    GridFunction out(static_cast<Eigen::Index>(grid.size()));
    sample_into(grid, out);
    return out;
}

void Gaussian::sample_into(const PhaseGrid& grid, Eigen::Ref<GridFunction> out) const {
    if (grid.dim() != spec_.U.size()) throw std::invalid_argument("Gaussian::sample: dimension mismatch");
    if (out.size() != static_cast<Eigen::Index>(grid.size()))
        throw std::invalid_argument("Gaussian::sample: output size does not match the grid");
    const auto n_vel = static_cast<Eigen::Index>(grid.velocity_nodes());
    const auto n_int = static_cast<Eigen::Index>(grid.internal_nodes());
    const Eigen::ArrayXd ei = grid.internal_energy() / spec_.T_I;
    const Eigen::ArrayXd gi = (-ei).exp();

    for (Eigen::Index vn = 0; vn < n_vel; ++vn) {
        const double ev = velocity_exponent(grid.velocity(static_cast<std::size_t>(vn)));
        auto row = out.segment(vn * n_int, n_int);
        // ei is non-decreasing, so the underflowed nodes form a tail.
        Eigen::Index keep = n_int;
        while (keep > 0 && ev + ei[keep - 1] > kUnderflowExponent) --keep;
        if (keep > 0) row.head(keep) = (prefactor_ * std::exp(-ev)) * gi.head(keep);
        row.tail(n_int - keep).setZero();
    }
}

GridFunction ellipsoidal_gaussian(const MacroState& state, const CorrectedTensor& ct, const ModelParams& params,
                                  const PhaseGrid& grid) {
    return Gaussian(closure_spec(GaussianKind::nu_theta, state, ct, params), ct.eigen).sample(grid);
}

GridFunction maxwellian_01(const MacroState& state, const ModelParams& params, const PhaseGrid& grid) {
    return Gaussian(closure_spec(GaussianKind::m01, state, params)).sample(grid);
}

GridFunction maxwellian_00(const MacroState& state, const ModelParams& params, const PhaseGrid& grid) {
    return Gaussian(closure_spec(GaussianKind::m00, state, params)).sample(grid);
}

GridFunction gaussian_theta(const MacroState& state, const ModelParams& params, const PhaseGrid& grid) {
    return Gaussian(closure_spec(GaussianKind::theta, state, params)).sample(grid);
}

namespace {

struct VelocityMoments {
    double mass;
    Vec mean;
    Mat covariance;
};

/// Discrete moments of exp(-velocity_exponent) over the velocity nodes.
VelocityMoments velocity_shape_moments(const Gaussian& g, const PhaseGrid& grid) {
    const int d = grid.dim();
    const std::size_t n = grid.velocity_nodes();
    Eigen::ArrayXd w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) w[static_cast<Eigen::Index>(i)] = std::exp(-g.velocity_exponent(grid.velocity(i)));
    const auto& vel = grid.velocities();

    using Acc = std::array<double, 4>;
    const Acc first = tree_reduce(
        std::size_t{0}, n, kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            Acc acc{};
            for (std::size_t i = b; i < e; ++i) {
                const auto k = static_cast<Eigen::Index>(i);
                acc[0] += w[k];
                for (int a = 0; a < d; ++a) acc[1 + a] += w[k] * vel(a, k);
            }
            return acc;
        },
        [](Acc x, const Acc& y) {
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
            return x;
        });
    VelocityMoments m;
    m.mass = first[0];
    m.mean = Vec(d);
    for (int a = 0; a < d; ++a) m.mean[a] = first[1 + a] / first[0];

    using Acc2 = std::array<double, 6>;
    const Acc2 second = tree_reduce(
        std::size_t{0}, n, kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            Acc2 acc{};
            for (std::size_t i = b; i < e; ++i) {
                const auto k = static_cast<Eigen::Index>(i);
                int slot = 0;
                for (int a = 0; a < d; ++a)
                    for (int c = a; c < d; ++c)
                        acc[slot++] += w[k] * (vel(a, k) - m.mean[a]) * (vel(c, k) - m.mean[c]);
            }
            return acc;
        },
        [](Acc2 x, const Acc2& y) {
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
            return x;
        });
    m.covariance = Mat(d, d);
    int slot = 0;
    for (int a = 0; a < d; ++a)
        for (int c = a; c < d; ++c) {
            m.covariance(a, c) = second[slot++] / first[0];
            m.covariance(c, a) = m.covariance(a, c);
        }
    return m;
}

struct InternalMoments {
    double mass;  // sum of exp(-eps/T)
    double mean;  // <eps>
    double var;   // <eps^2> - <eps>^2
};

InternalMoments internal_shape_moments(double T, const PhaseGrid& grid) {
    const auto& eps = grid.internal_energy();
    const std::size_t n = grid.internal_nodes();
    const double m0 = pairwise_sum(n, [&](std::size_t k) { return std::exp(-eps[static_cast<Eigen::Index>(k)] / T); });
    const double m1 = pairwise_sum(n, [&](std::size_t k) {
        const double e = eps[static_cast<Eigen::Index>(k)];
        return e * std::exp(-e / T);
    });
    const double mean = m1 / m0;
    const double var = pairwise_sum(n, [&](std::size_t k) {
                           const double e = eps[static_cast<Eigen::Index>(k)];
                           return (e - mean) * (e - mean) * std::exp(-e / T);
                       }) / m0;
    return {m0, mean, var};
}

}  // namespace

GaussianSpec match_discrete_moments(const GaussianSpec& target, const PhaseGrid& grid) {
    GaussianSpec cur = target;
    const double scale = target.covariance.trace() / static_cast<double>(target.U.size());

    // Velocity factor: fixed-point correction of mean and covariance.
    constexpr int kMaxIter = 60;
    double residual = 0.0;
    for (int it = 0;; ++it) {
        const Gaussian g(cur);
        const auto m = velocity_shape_moments(g, grid);
        const Vec dU = target.U - m.mean;
        const Mat dS = target.covariance - m.covariance;
        residual = std::max(dU.cwiseAbs().maxCoeff() / std::sqrt(scale), dS.cwiseAbs().maxCoeff() / scale);
        if (residual <= 1e-15) break;
        if (it == kMaxIter) {
            if (residual > 1e-11)
                throw Error("match_discrete_moments: velocity moments did not converge (residual " +
                            std::to_string(residual) + ")");
            break;
        }
        cur.U += dU;
        cur.covariance += dS;
        cur.covariance = 0.5 * (cur.covariance + cur.covariance.transpose()).eval();
    }

    // Internal factor: Newton on T for <I^{2/delta}> = (delta/2) T_target.
    const double want = 0.5 * target.delta * target.T_I;
    double T = target.T_I;
    for (int it = 0; it < 100; ++it) {
        const auto im = internal_shape_moments(T, grid);
        const double r = im.mean - want;
        if (std::abs(r) <= 2e-16 * want) break;
        // d<eps>/dT = Var(eps) / T^2
        double next = T - r * T * T / im.var;
        if (!(next > 0.0)) next = 0.5 * T;
        if (std::abs(next - T) <= 1e-16 * T) {
            T = next;
            break;
        }
        T = next;
    }
    cur.T_I = T;

    // Mass: scale rho so the discrete zeroth moment equals the target's.
    cur.rho = 1.0;
    const Gaussian unit(cur);
    const auto vm = velocity_shape_moments(unit, grid);
    const auto im = internal_shape_moments(cur.T_I, grid);
    const double mass = unit.prefactor() * vm.mass * grid.velocity_weight() * im.mass * grid.internal_weight();
    cur.rho = target.rho / mass;
    return cur;
}

}  // namespace esbgk

#include "esbgk/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "esbgk/error.hpp"

namespace esbgk {

namespace {

void check_size(GridFunctionView f, const PhaseGrid& grid, const char* who) {
    if (static_cast<std::size_t>(f.size()) != grid.size())
        throw std::invalid_argument(std::string(who) + ": grid function size does not match the grid");
}

}  // namespace

double h_functional(GridFunctionView f, const PhaseGrid& grid) {
    check_size(f, grid, "h_functional");
    const double* p = f.data();
    const double sum = tree_reduce(
        std::size_t{0}, grid.size(), kReduceLeaf,
        [p](std::size_t b, std::size_t e) {
            const Eigen::Map<const Eigen::ArrayXd> x(p + b, static_cast<Eigen::Index>(e - b));
            if ((x < 0.0).any()) {
                Eigen::Index at = 0;
                x.minCoeff(&at);
                throw NegativeDensityError("h_functional: negative value at node " +
                                           std::to_string(b + static_cast<std::size_t>(at)));
            }
            // 0 ln 0 = 0: the floor only ever multiplies an exact zero or a subnormal.
            return (x * x.max(std::numeric_limits<double>::min()).log()).sum();
        },
        [](double a, double c) { return a + c; });
    return grid.weight() * sum;
}

double relative_entropy(GridFunctionView f, GridFunctionView g, const PhaseGrid& grid) {
    check_size(f, grid, "relative_entropy");
    check_size(g, grid, "relative_entropy");
    const double* pf = f.data();
    const double* pg = g.data();
    return integrate_nodes(grid, [pf, pg](std::size_t i) {
        const double x = pf[i], y = pg[i];
        if (x < 0.0 || y < 0.0)
            throw NegativeDensityError("relative_entropy: negative value at node " + std::to_string(i));
        if (x == 0.0) return 0.0;
        if (y == 0.0) throw SupportError("relative_entropy: f > 0 where g = 0 at node " + std::to_string(i));
        return x * std::log(x / y);
    });
}

ProductionDetail entropy_production_detail(GridFunctionView f, GridFunctionView M, double A, const PhaseGrid& grid) {
    check_size(f, grid, "entropy_production");
    check_size(M, grid, "entropy_production");
    if (!(A > 0.0)) throw ValidationError("A", "collision frequency must be positive");
    const double* pf = f.data();
    const double* pm = M.data();
    using Acc = std::array<double, 2>;
    const Acc sums = tree_reduce(
        std::size_t{0}, grid.size(), kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            Acc acc{};
            for (std::size_t i = b; i < e; ++i) {
                const double x = pf[i], m = pm[i];
                if (x < 0.0 || m < 0.0)
                    throw NegativeDensityError("entropy_production: negative value at node " + std::to_string(i));
                if (x == 0.0 && m == 0.0) continue;
                if (x < kLogFloor) acc[1] += 1.0;
                acc[0] += (m - x) * std::log(std::max(x, kLogFloor));
            }
            return acc;
        },
        [](Acc a, const Acc& b) { return Acc{a[0] + b[0], a[1] + b[1]}; });
    return {-A * grid.weight() * sums[0], static_cast<std::size_t>(sums[1])};
}

double entropy_production(GridFunctionView f, GridFunctionView M, double A, const PhaseGrid& grid) {
    return entropy_production_detail(f, M, A, grid).value;
}

double h_closed_form(GaussianKind kind, const MacroState& state, const CorrectedTensor& ct,
                     const ModelParams& params) {
    const int d = state.dim();
    const GaussianSpec spec = closure_spec(kind, state, ct, params);
    Vec eig;
    switch (kind) {
        case GaussianKind::nu_theta: eig = ct.eigen.values; break;
        case GaussianKind::theta: eig = jacobi_eigen(state.Theta).values; break;
        case GaussianKind::m01: eig = Vec::Constant(d, state.T_delta); break;
        case GaussianKind::m00: eig = Vec::Constant(d, state.T_tr); break;
    }
    if (eig.size() != d || !(eig.minCoeff() > 0.0))
        throw DefinitenessError(std::string("h_closed_form: covariance of ") + to_string(kind) +
                                " is not positive definite");
    if (!(spec.T_I > 0.0) || !(state.rho > 0.0))
        throw DefinitenessError(std::string("h_closed_form: nonpositive temperature or density for ") + to_string(kind));
    return gaussian_entropy<double>(state.rho, spec.lambda, eig, spec.T_I, params.delta);
}

double h_closed_form(GaussianKind kind, const MacroState& state, const ModelParams& params) {
    if (kind == GaussianKind::nu_theta) return h_closed_form(kind, state, corrected_tensor(state, params), params);
    return h_closed_form(kind, state, CorrectedTensor{}, params);
}

LemmaCertificate certify_lemma21(const MacroState& state, const ModelParams& params, double rel_tol) {
    if (!(params.theta > 0.0)) throw RegimeError("certify_lemma21 requires 0 < theta <= 1; use certify_lemma31");
    const auto ct = corrected_tensor(state, params);
    const double h01 = h_closed_form(GaussianKind::m01, state, ct, params);
    const double hnt = h_closed_form(GaussianKind::nu_theta, state, ct, params);
    const double hth = h_closed_form(GaussianKind::theta, state, ct, params);
    LemmaCertificate c;
    c.lhs = h01 - hnt;
    c.rhs = (1.0 - params.theta) * (h01 - hth);
    c.gap = c.lhs - c.rhs;
    c.tolerance = rel_tol * std::max({1.0, std::abs(h01), std::abs(hnt), std::abs(hth)});
    c.passed = c.gap >= -c.tolerance;
    return c;
}

double explicit_lemma31_difference(const MacroState& state, const ModelParams& params) {
    const int d = state.dim();
    const double nu = params.nu;
    const double log_ttr = std::log(state.T_tr);
    const double log_det = jacobi_eigen(state.Theta).log_determinant();
    if (nu >= 0.0) return 0.5 * state.rho * (d * (1.0 - nu) * log_ttr + nu * log_det - d * log_ttr);
    return 0.5 * state.rho * (d * (1.0 + (d - 1) * nu) * log_ttr - (d - 1) * nu * log_det - d * log_ttr);
}

Lemma31Certificate certify_lemma31(const MacroState& state, const ModelParams& params, double rel_tol) {
    if (params.theta != 0.0) throw RegimeError("certify_lemma31 requires theta = 0; use certify_lemma21");
    const auto ct = corrected_tensor(state, params);
    const double h00 = h_closed_form(GaussianKind::m00, state, ct, params);
    const double hn0 = h_closed_form(GaussianKind::nu_theta, state, ct, params);
    const double hth = h_closed_form(GaussianKind::theta, state, ct, params);
    Lemma31Certificate c;
    c.generic_difference = h00 - hn0;
    c.explicit_difference = explicit_lemma31_difference(state, params);
    c.lhs = c.generic_difference;
    c.rhs = anisotropy_weight(params) * (h00 - hth);
    c.gap = c.lhs - c.rhs;
    c.tolerance = rel_tol * std::max({1.0, std::abs(h00), std::abs(hn0), std::abs(hth)});
    c.passed = c.gap >= -c.tolerance;
    return c;
}

Lemma22Certificate certify_lemma22(GridFunctionView f, const MacroState& state, const ModelParams& params,
                                   const PhaseGrid& grid, double closed_form_rel) {
    const double h01 = h_closed_form(GaussianKind::m01, state, params);
    const double hth = h_closed_form(GaussianKind::theta, state, params);
    const double hf = h_functional(f, grid);
    Lemma22Certificate c;
    c.gap_closures = hth - h01;
    c.gap_f = hf - hth;
    c.tol_closures = 1e-12 * std::max({1.0, std::abs(h01), std::abs(hth)});
    c.tol_f = closed_form_rel * state.rho * (1.0 + std::abs(hf));
    c.passed = c.gap_closures >= -c.tol_closures && c.gap_f >= -c.tol_f;
    return c;
}

double l1_distance(GridFunctionView f, GridFunctionView g, const PhaseGrid& grid) {
    check_size(f, grid, "l1_distance");
    check_size(g, grid, "l1_distance");
    const double* pf = f.data();
    const double* pg = g.data();
    return integrate_nodes(grid, [pf, pg](std::size_t i) { return std::abs(pf[i] - pg[i]); });
}

double kullback_bound(double rel_entropy, double mass) { return std::sqrt(2.0 * mass * std::max(rel_entropy, 0.0)); }

KullbackCertificate certify_kullback(GridFunctionView f, GridFunctionView g, double rel_entropy,
                                     const PhaseGrid& grid, double tol, double mass_rel_tol) {
    const double mf = integrate(grid, f);
    const double mg = integrate(grid, g);
    if (std::abs(mf - mg) > mass_rel_tol * std::max(std::abs(mf), std::abs(mg)))
        throw HypothesisError("Kullback inequality needs equal masses (" + std::to_string(mf) + " vs " +
                              std::to_string(mg) + ")");
    KullbackCertificate c;
    c.l1 = l1_distance(f, g, grid);
    c.bound = kullback_bound(rel_entropy, mf);
    c.passed = c.l1 <= c.bound + tol;
    return c;
}

bool EntropyReport::all_passed() const {
    return std::all_of(certificates.begin(), certificates.end(), [](const auto& c) { return c.passed; });
}

GaussianKind regime_target(const ModelParams& params) {
    return params.theta > 0.0 ? GaussianKind::m01 : GaussianKind::m00;
}

namespace {

/// ln of a Gaussian split into a velocity part (per velocity node) and an
/// internal part (per I node): ln G = lnpref - ev - ei.
struct SeparableLog {
    double log_prefactor;
    Eigen::ArrayXd velocity;
    Eigen::ArrayXd internal;

    SeparableLog(const Gaussian& g, const PhaseGrid& grid)
        : log_prefactor(std::log(g.prefactor())),
          velocity(static_cast<Eigen::Index>(grid.velocity_nodes())),
          internal(grid.internal_energy() / g.spec().T_I) {
        for (std::size_t i = 0; i < grid.velocity_nodes(); ++i)
            velocity[static_cast<Eigen::Index>(i)] = g.velocity_exponent(grid.velocity(i));
    }
};

GaussianSpec maybe_matched(const GaussianSpec& s, const PhaseGrid& grid, bool matched) {
    return matched ? match_discrete_moments(s, grid) : s;
}

}  // namespace

EntropyReport certify_theorem(GridFunctionView f, const MacroState& state, const CorrectedTensor& ct,
                              const ModelParams& params, const PhaseGrid& grid, const EntropyOptions& opt) {
    check_size(f, grid, "certify_theorem");
    EntropyReport r;
    r.A = collision_frequency(state, params);
    r.target = regime_target(params);
    r.coercivity = coercivity_constant(params);

    const Gaussian m_nt(maybe_matched(closure_spec(GaussianKind::nu_theta, state, ct, params), grid,
                                      opt.matched_closures));
    const Gaussian m01(maybe_matched(closure_spec(GaussianKind::m01, state, ct, params), grid, opt.matched_closures));
    const Gaussian m00(maybe_matched(closure_spec(GaussianKind::m00, state, ct, params), grid, opt.matched_closures));
    const Gaussian& tgt = r.target == GaussianKind::m01 ? m01 : m00;

    const GridFunction M = m_nt.sample(grid);
    const GridFunction T = tgt.sample(grid);
    const SeparableLog log_m(m_nt, grid), log_01(m01, grid), log_00(m00, grid);

    const auto n_int = grid.internal_nodes();
    const double* pf = f.data();
    const double* pm = M.data();
    const double* pt = T.data();

    // [f ln f, (M-f) ln f, f ln M01, f ln M00, |f - target|, M ln M, clamped]
    using Acc = std::array<double, 7>;
    const Acc s = tree_reduce(
        std::size_t{0}, grid.velocity_nodes(), kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            Acc acc{};
            for (std::size_t vn = b; vn < e; ++vn) {
                const auto v = static_cast<Eigen::Index>(vn);
                const double lm_v = log_m.log_prefactor - log_m.velocity[v];
                const double l01_v = log_01.log_prefactor - log_01.velocity[v];
                const double l00_v = log_00.log_prefactor - log_00.velocity[v];
                for (std::size_t k = 0; k < n_int; ++k) {
                    const std::size_t i = vn * n_int + k;
                    const auto kk = static_cast<Eigen::Index>(k);
                    const double x = pf[i], m = pm[i];
                    if (x < 0.0)
                        throw NegativeDensityError("certify_theorem: negative value at node " + std::to_string(i));
                    acc[4] += std::abs(x - pt[i]);
                    if (m > 0.0) acc[5] += m * (lm_v - log_m.internal[kk]);
                    if (x == 0.0 && m == 0.0) continue;
                    if (x < kLogFloor) acc[6] += 1.0;
                    const double lf = std::log(std::max(x, kLogFloor));
                    acc[1] += (m - x) * lf;
                    if (x > 0.0) {
                        acc[0] += x * lf;
                        acc[2] += x * (l01_v - log_01.internal[kk]);
                        acc[3] += x * (l00_v - log_00.internal[kk]);
                    }
                }
            }
            return acc;
        },
        [](Acc a, const Acc& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        });

    const double w = grid.weight();
    r.H_f = w * s[0];
    r.D = -r.A * w * s[1];
    r.rel_H01 = w * (s[0] - s[2]);
    r.rel_H00 = w * (s[0] - s[3]);
    r.l1_to_target = w * s[4];
    const double h_m_discrete = w * s[5];
    r.floor_nodes = static_cast<std::size_t>(s[6]);

    r.H_M_nu_theta = h_closed_form(GaussianKind::nu_theta, state, ct, params);
    r.H_M01 = h_closed_form(GaussianKind::m01, state, ct, params);
    r.H_M00 = h_closed_form(GaussianKind::m00, state, ct, params);
    r.H_MTheta = h_closed_form(GaussianKind::theta, state, ct, params);

    r.tol_quad = opt.tol_quad_rel * state.rho * (1.0 + std::abs(r.H_f));
    r.theorem_gap = r.D - r.coercivity * r.A * r.rel_target();
    r.convexity_gap = r.D - r.A * (r.H_f - h_m_discrete);
    r.kullback_bound = kullback_bound(r.rel_target(), state.rho);

    const double target_mass = integrate(grid, T);
    if (std::abs(target_mass - state.rho) > opt.mass_rel_tol * state.rho)
        throw HypothesisError("certify_theorem: target mass differs from rho beyond tolerance");

    auto add = [&r](std::string name, double value, double tol) {
        r.certificates.push_back({std::move(name), value, tol, value >= -tol});
    };
    add("theorem", r.theorem_gap, r.tol_quad);
    add("convexity", r.convexity_gap, r.tol_quad);
    add("rel_entropy_nonneg", r.rel_target(), r.tol_quad);
    add("kullback", r.kullback_bound - r.l1_to_target, r.tol_quad);
    if (params.theta > 0.0) {
        const auto l = certify_lemma21(state, params, opt.lemma_rel);
        r.lemma_gap = l.gap;
        add("lemma21", l.gap, l.tolerance);
    } else {
        const auto l = certify_lemma31(state, params, opt.lemma_rel);
        r.lemma_gap = l.gap;
        add("lemma31", l.gap, l.tolerance);
    }
    r.lemma22_gap_closures = r.H_MTheta - r.H_M01;
    r.lemma22_gap_f = r.H_f - r.H_MTheta;
    add("lemma22_closures", r.lemma22_gap_closures, 1e-12 * std::max({1.0, std::abs(r.H_MTheta), std::abs(r.H_M01)}));
    add("lemma22_f", r.lemma22_gap_f, opt.closed_form_rel * state.rho * (1.0 + std::abs(r.H_f)));
    return r;
}

}  // namespace esbgk

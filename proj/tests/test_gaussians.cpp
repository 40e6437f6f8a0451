#include <doctest.h>

#include "esbgk/error.hpp"
#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"
#include "support.hpp"

using namespace esbgk;

TEST_CASE("Lambda_delta closed form and quadrature oracle") {
    CHECK(lambda_delta(2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lambda_delta(1.0) == doctest::Approx(1.1283791671).epsilon(1e-10));
    CHECK(lambda_delta(3.0) == doctest::Approx(0.7522527781).epsilon(1e-10));
    for (double delta : {0.5, 1.0, 2.0, 3.0, 4.5, 6.0}) {
        // Independent oracle: 1 / int_0^inf exp(-I^{2/delta}) dI, substituting I = u^{delta/2}.
        const double integral = oracle::integrate_panels(
            [delta](double u) { return u <= 0 ? (delta < 2 ? 0.0 : (delta == 2 ? 1.0 : 0.0)) : 0.5 * delta * std::pow(u, 0.5 * delta - 1) * std::exp(-u); },
            0.0, 60.0, 240, 1e-14);
        if (delta >= 2.0) CHECK(1.0 / integral == doctest::Approx(lambda_delta(delta)).epsilon(1e-10));
        CHECK(lambda_delta_by_quadrature(delta) == doctest::Approx(lambda_delta(delta)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(lambda_delta(0.0), ValidationError);
    CHECK_THROWS_AS(lambda_delta(-1.0), ValidationError);
}

TEST_CASE("prefactor at the mean") {
    GaussianSpec g;
    g.rho = 1.0;
    g.U = Vec::Zero(3);
    g.covariance = Mat::Identity(3, 3);
    g.T_I = 1.0;
    g.delta = 2.0;
    g.lambda = lambda_delta(2.0);
    CHECK(Gaussian(g)(Vec::Zero(3), 0.0) == doctest::Approx(0.0634936359).epsilon(1e-9));
}

TEST_CASE("pointwise values match an independent density") {
    StateSampler smp(5);
    for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 50; ++trial) {
            GaussianSpec g;
            g.rho = smp.log_uniform(0.1, 10);
            g.U = Vec(d);
            for (int a = 0; a < d; ++a) g.U[a] = smp.normal();
            g.covariance = smp.random_spd(d, 1.0);
            g.T_I = smp.log_uniform(0.2, 5);
            g.delta = smp.uniform(0.5, 6);
            g.lambda = lambda_delta(g.delta);
            const Gaussian G(g);
            Vec v(d);
            for (int a = 0; a < d; ++a) v[a] = g.U[a] + smp.normal();
            const double I = smp.uniform(0, 3);
            const double ref = oracle::gaussian(g.rho, g.U, g.covariance, g.T_I, g.delta, v, I);
            CHECK(G(v, I) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("theta = 1 collapse onto M01") {
    const MacroState s = testing::anisotropic_state(3, 2.0);
    for (double nu : {-0.4, 0.0, 0.9}) {
        const auto p = testing::params(3, 2, nu, 1.0);
        const PhaseGrid g(testing::grid_for(s, p, 12, 16), p);
        const GridFunction a = ellipsoidal_gaussian(s, corrected_tensor(s, p), p, g);
        const GridFunction b = maxwellian_01(s, p, g);
        CHECK(((a - b).abs() <= 1e-15 * b.abs()).all());
    }
}

TEST_CASE("M00 equals M01 when T_tr = T_int, and ellipsoidal at nu = theta = 0") {
    const auto p = testing::params(2, 3, 0, 0);
    const MacroState s = testing::isotropic_state(2, 1.3, 0.8, 0.8, 3.0);
    const PhaseGrid g(testing::grid_for(s, p, 16, 16), p);
    const GridFunction m00 = maxwellian_00(s, p, g);
    CHECK(((m00 - maxwellian_01(s, p, g)).abs() <= 1e-15 * m00).all());

    const MacroState a = testing::anisotropic_state(2, 3.0);
    const GridFunction e = ellipsoidal_gaussian(a, corrected_tensor(a, p), p, g);
    const GridFunction m = maxwellian_00(a, p, g);
    CHECK(((e - m).abs() <= 1e-14 * m).all());
}

TEST_CASE("M_Theta equals M00 for isotropic Theta and matches ellipsoidal as nu -> 1") {
    const auto p = testing::params(3, 2, 0, 0);
    const MacroState s = testing::isotropic_state(3, 1.0, 1.2, 0.7, 2.0);
    const PhaseGrid g(testing::grid_for(s, p, 10, 12), p);
    const GridFunction mt = gaussian_theta(s, p, g);
    CHECK(((mt - maxwellian_00(s, p, g)).abs() <= 1e-14 * mt).all());

    const MacroState a = testing::anisotropic_state(3, 2.0);
    const auto p1 = testing::params(3, 2, 1.0 - 1e-13, 0.0);
    const GridFunction e = ellipsoidal_gaussian(a, corrected_tensor(a, p1), p1, g);
    const GridFunction th = gaussian_theta(a, p1, g);
    CHECK(((e - th).abs() <= 1e-10 * th + 1e-300).all());
}

TEST_CASE("isotropy of M01") {
    const auto p = testing::params(3, 2, 0, 1);
    const MacroState s = testing::isotropic_state(3, 1.0, 1.0, 1.0, 2.0);
    const GridSpec spec = GridSpec::uniform(3, 16, 5.0, Vec::Zero(3), 8, 30.0);
    const PhaseGrid g(spec, p);
    const GridFunction f = maxwellian_01(s, p, g);
    // (j0, j1, j2) and its axis permutations have the same |v|.
    auto node = [&](int j0, int j1, int j2, int k) { return k + 8 * (j0 + 16 * (j1 + 16 * j2)); };
    CHECK(f[node(3, 7, 12, 2)] == doctest::Approx(f[node(12, 3, 7, 2)]).epsilon(1e-15));
    CHECK(f[node(3, 7, 12, 2)] == doctest::Approx(f[node(7, 12, 3, 2)]).epsilon(1e-15));
    // Mirror symmetry: node j and 15 - j.
    CHECK(f[node(3, 7, 12, 5)] == doctest::Approx(f[node(12, 8, 3, 5)]).epsilon(1e-15));
}

TEST_CASE("permuting the axes permutes the values") {
    const auto p = testing::params(2, 2, 0, 0);
    const MacroState s = testing::anisotropic_state(2, 2.0);
    Mat P(2, 2);
    P << 0, 1, 1, 0;
    const MacroState t = MacroState::from_primitive(s.rho, P * s.U, P * s.Theta * P.transpose(), s.T_int, 2.0);
    const GaussianSpec gs = closure_spec(GaussianKind::theta, s, p);
    const GaussianSpec gt = closure_spec(GaussianKind::theta, t, p);
    Vec v(2);
    v << 0.7, -0.4;
    CHECK(Gaussian(gs)(v, 0.3) == doctest::Approx(Gaussian(gt)(P * v, 0.3)).epsilon(1e-14));
}

TEST_CASE("discrete moments reproduce the Gaussian's parameters") {
    const auto p = testing::params(2, 2, 0.4, 0.5);
    const MacroState s = testing::anisotropic_state(2, 2.0);
    const PhaseGrid g(testing::grid_for(s, p, 64, 512, 8.0), p);
    const CorrectedTensor ct = corrected_tensor(s, p);
    const MacroState m = compute_moments(ellipsoidal_gaussian(s, ct, p, g), g);
    const double tol = 5e-4;
    CHECK(m.rho == doctest::Approx(s.rho).epsilon(tol));
    CHECK((m.U - s.U).norm() <= tol);
    CHECK((m.Theta - ct.tensor).cwiseAbs().maxCoeff() <= tol);
    CHECK(m.T_int == doctest::Approx(ct.T_relax).epsilon(tol));

    const MacroState mt = compute_moments(gaussian_theta(s, p, g), g);
    CHECK((mt.Theta - s.Theta).cwiseAbs().maxCoeff() <= tol);
    const MacroState m0 = compute_moments(maxwellian_00(s, p, g), g);
    CHECK(m0.T_tr == doctest::Approx(s.T_tr).epsilon(tol));
    CHECK(m0.T_int == doctest::Approx(s.T_int).epsilon(tol));
}

TEST_CASE("values are positive and underflow to exactly zero far out") {
    const auto p = testing::params(1, 2, 0, 1);
    const MacroState s = testing::isotropic_state(1, 1.0, 0.01, 0.01, 2.0);
    const PhaseGrid g(GridSpec::uniform(1, 64, 60.0, Vec::Zero(1), 16, 40.0), p);
    const GridFunction f = maxwellian_01(s, p, g);
    CHECK((f >= 0.0).all());
    CHECK(f[0] == 0.0);
    CHECK(f.maxCoeff() > 0.0);
    const PhaseGrid g2(testing::grid_for(testing::isotropic_state(1, 1, 1, 1, 2), p, 32, 32), p);
    CHECK((maxwellian_01(testing::isotropic_state(1, 1, 1, 1, 2), p, g2) > 0.0).all());
}

TEST_CASE("discrete moment matching hits its targets") {
    const auto p = testing::params(3, 2, 0.5, 0.5);
    const MacroState s = testing::anisotropic_state(3, 2.0);
    const PhaseGrid g(testing::grid_for(s, p, 16, 24), p);  // coarse on purpose
    const CorrectedTensor ct = corrected_tensor(s, p);
    const GaussianSpec target = closure_spec(GaussianKind::nu_theta, s, ct, p);
    const GridFunction f = Gaussian(match_discrete_moments(target, g)).sample(g);
    const MacroState m = compute_moments(f, g);
    CHECK(m.rho == doctest::Approx(s.rho).epsilon(1e-12));
    CHECK((m.U - s.U).norm() <= 1e-12);
    CHECK((m.Theta - ct.tensor).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(m.T_int == doctest::Approx(ct.T_relax).epsilon(1e-11));
}

TEST_CASE("cancellation: M_{nu,theta}(f) - f has no mass, momentum or energy") {
    const auto p = testing::params(2, 2, 0.5, 0.3);
    const MacroState a = testing::anisotropic_state(2, 2.0);
    const PhaseGrid g(testing::grid_for(a, p, 48, 256, 8.0), p);
    Vec shift(2);
    shift << 0.9, -0.5;
    GaussianSpec c1 = closure_spec(GaussianKind::theta, a, p);
    GaussianSpec c2 = c1;
    c2.U += shift;
    c2.rho = 0.5;
    c2.T_I = 1.4;
    const GridFunction f = Gaussian(c1).sample(g) + Gaussian(c2).sample(g);
    const MacroState s = compute_moments(f, g);
    const CorrectedTensor ct = corrected_tensor(s, p);
    const auto cf = conserved_moments(f, g);

    const auto pointwise = conserved_moments(ellipsoidal_gaussian(s, ct, p, g), g);
    CHECK(std::abs(pointwise.mass - cf.mass) <= 2e-3 * cf.mass);
    CHECK(std::abs(pointwise.energy - cf.energy) <= 5e-3 * cf.energy);

    const GridFunction M = Gaussian(match_discrete_moments(closure_spec(GaussianKind::nu_theta, s, ct, p), g)).sample(g);
    const auto cm = conserved_moments(M, g);
    CHECK(std::abs(cm.mass - cf.mass) <= 1e-12 * cf.mass);
    CHECK((cm.momentum - cf.momentum).norm() <= 1e-12 * cf.mass);
    CHECK(std::abs(cm.energy - cf.energy) <= 1e-12 * cf.energy);
}

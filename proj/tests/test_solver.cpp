#include <doctest.h>

#include <cmath>

#include "esbgk/entropy.hpp"
#include "esbgk/error.hpp"
#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/solver.hpp"
#include "support.hpp"

using namespace esbgk;

namespace {

SolverConfig config(const ModelParams& p, double dt, double t_end, Scheme scheme = Scheme::exponential) {
    SolverConfig c;
    c.params = p;
    c.dt = dt;
    c.t_end = t_end;
    c.scheme = scheme;
    return c;
}

GridFunction two_bumps(const PhaseGrid& g, const ModelParams& p) {
    const MacroState a = testing::anisotropic_state(p.d, p.delta);
    GaussianSpec c1 = closure_spec(GaussianKind::theta, a, p);
    GaussianSpec c2 = c1;
    c1.rho = 0.6;
    c2.rho = 0.4;
    c2.U[0] += 1.2;
    c2.T_I *= 1.6;
    return Gaussian(c1).sample(g) + Gaussian(c2).sample(g);
}

double max_rel(const GridFunction& a, const GridFunction& b) { return (a - b).abs().maxCoeff() / b.abs().maxCoeff(); }

}  // namespace

TEST_CASE("configuration validation") {
    const auto p = testing::params(2, 2, 0.3, 0.5);
    CHECK_NOTHROW(validate(config(p, 0.1, 1.0)));
    CHECK_THROWS_AS(validate(config(p, 0.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(validate(config(p, 0.1, -1.0)), ValidationError);
    auto c = config(p, 0.1, 1.0);
    c.report_every = 0;
    CHECK_THROWS_AS(validate(c), ValidationError);
    c = config(testing::params(2, 2, 1.2, 0.5), 0.1, 1.0);
    CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("equilibrium is a fixed point of the relaxation step") {
    for (double nu : {-0.4, 0.0, 0.7}) {
        const auto p = testing::params(2, 2, nu, 1.0);
        const MacroState s = testing::isotropic_state(2, 1.0, 1.0, 1.0, 2.0);
        const PhaseGrid g(testing::grid_for(s, p, 32, 128), p);
        const MacroState m = compute_moments(maxwellian_01(s, p, g), g);
        const GridFunction f = relaxation_target(m, corrected_tensor(m, p), p, g, true);
        for (Scheme sc : {Scheme::exponential, Scheme::rk4}) {
            const GridFunction f1 = step_homogeneous(f, config(p, 0.1, 1.0, sc), g);
            CHECK(max_rel(f1, f) <= 1e-12);
        }
    }
}

TEST_CASE("one step conserves mass, momentum and energy") {
    for (double theta : {0.0, 0.5, 1.0}) {
        for (Scheme sc : {Scheme::exponential, Scheme::rk4}) {
            const auto p = testing::params(2, 3.0, 0.5, theta);
            const MacroState a = testing::anisotropic_state(2, 3.0);
            const PhaseGrid g(testing::grid_for(a, p, 40, 128, 8.0), p);
            const GridFunction f = two_bumps(g, p);
            const auto c0 = conserved_moments(f, g);
            const auto c1 = conserved_moments(step_homogeneous(f, config(p, 0.2, 1.0, sc), g), g);
            CHECK(std::abs(c1.mass - c0.mass) <= 1e-14 * c0.mass);
            CHECK((c1.momentum - c0.momentum).norm() <= 1e-14 * c0.mass);
            CHECK(std::abs(c1.energy - c0.energy) <= 1e-14 * c0.energy);
        }
    }
}

TEST_CASE("translational temperature follows dT_tr/dt = theta A (T_delta - T_tr)") {
    const auto p = testing::params(2, 2.0, 0.3, 0.5);
    const MacroState a = testing::anisotropic_state(2, 2.0);
    const PhaseGrid g(testing::grid_for(a, p, 32, 128, 8.0), p);
    const GridFunction f0 = two_bumps(g, p);
    const MacroState s0 = compute_moments(f0, g);
    const double A = collision_frequency(s0, p);
    const double t_end = 2.0 / A;
    const double exact = s0.T_delta + (s0.T_tr - s0.T_delta) * std::exp(-p.theta * A * t_end);

    auto cfg = config(p, 0.02 / A, t_end, Scheme::rk4);
    cfg.track_entropy = false;
    cfg.report_every = 1000;
    auto traj = run_homogeneous(f0, cfg, g);
    REQUIRE_FALSE(traj.failure);
    CHECK(traj.stamps.back().state.T_tr == doctest::Approx(exact).epsilon(1e-8));

    cfg.scheme = Scheme::exponential;
    traj = run_homogeneous(f0, cfg, g);
    REQUIRE_FALSE(traj.failure);
    CHECK(traj.stamps.back().state.T_tr == doctest::Approx(exact).epsilon(1e-3));

    // With theta = 1 the exponential update of T_tr is exact.
    const auto p1 = testing::params(2, 2.0, 0.3, 1.0);
    const double A1 = collision_frequency(s0, p1);
    auto cfg1 = config(p1, 0.25 / A1, t_end);
    cfg1.track_entropy = false;
    const double exact1 = s0.T_delta + (s0.T_tr - s0.T_delta) * std::exp(-A1 * t_end);
    traj = run_homogeneous(f0, cfg1, g);
    CHECK(traj.stamps.back().state.T_tr == doctest::Approx(exact1).epsilon(1e-12));
}

TEST_CASE("theta = 0 freezes both temperatures") {
    const auto p = testing::params(2, 2.0, -0.4, 0.0);
    const MacroState a = testing::anisotropic_state(2, 2.0);
    const PhaseGrid g(testing::grid_for(a, p, 32, 128, 8.0), p);
    const GridFunction f0 = two_bumps(g, p);
    const MacroState s0 = compute_moments(f0, g);
    const double A = collision_frequency(s0, p);
    auto cfg = config(p, 0.1 / A, 3.0 / A);
    cfg.report_every = 10;
    const auto traj = run_homogeneous(f0, cfg, g);
    REQUIRE_FALSE(traj.failure);
    for (const auto& st : traj.stamps) {
        CHECK(st.state.T_tr == doctest::Approx(s0.T_tr).epsilon(1e-12));
        CHECK(st.state.T_int == doctest::Approx(s0.T_int).epsilon(1e-12));
    }
    // Theta relaxes toward T_tr Id.
    const Mat aniso0 = s0.Theta - s0.T_tr * Mat::Identity(2, 2);
    const Mat aniso1 = traj.stamps.back().state.Theta - s0.T_tr * Mat::Identity(2, 2);
    CHECK(aniso1.norm() < 0.2 * aniso0.norm());
}

TEST_CASE("trajectory bookkeeping") {
    const auto p = testing::params(1, 2.0, 0.5, 0.5);
    const MacroState a = testing::anisotropic_state(1, 2.0);
    const PhaseGrid g(testing::grid_for(a, p, 64, 128, 8.0), p);
    const GridFunction f0 = two_bumps(g, p);
    const double A = collision_frequency(compute_moments(f0, g), p);
    auto cfg = config(p, 0.1 / A, 2.05 / A);
    cfg.report_every = 4;
    const auto traj = run_homogeneous(f0, cfg, g);
    REQUIRE_FALSE(traj.failure);
    CHECK(traj.stamps.front().t == 0.0);
    CHECK(traj.stamps.back().t == cfg.t_end);
    CHECK(traj.stamps.back().step == 21);
    for (std::size_t i = 1; i < traj.stamps.size(); ++i) CHECK(traj.stamps[i].t > traj.stamps[i - 1].t);
    CHECK(traj.entropy_history.size() == 22);
    for (std::size_t i = 1; i < traj.entropy_history.size(); ++i)
        CHECK(traj.entropy_history[i].second <= traj.entropy_history[i - 1].second + 1e-13);
    CHECK(traj.all_certificates_passed());
    for (const auto& st : traj.stamps) {
        CHECK(st.drift.mass <= 1e-13);
        CHECK(st.drift.energy <= 1e-13);
    }
}

TEST_CASE("frequency limit") {
    const auto p = testing::params(1, 2.0, 0.5, 0.5);
    const MacroState s = testing::isotropic_state(1, 1.0, 1.0, 1.0, 2.0);
    const PhaseGrid g(testing::grid_for(s, p, 32, 64), p);
    const GridFunction f = maxwellian_01(s, p, g);
    const double A = collision_frequency(compute_moments(f, g), p);
    CHECK_THROWS_AS(run_homogeneous(f, config(p, 0.6 / A, 1.0), g), ValidationError);
    CHECK_THROWS_AS(step_homogeneous(f, config(p, 0.6 / A, 1.0), g), ValidationError);
}

TEST_CASE("runs are bit-reproducible") {
    const auto p = testing::params(2, 2.0, 0.5, 0.5);
    const MacroState a = testing::anisotropic_state(2, 2.0);
    const PhaseGrid g(testing::grid_for(a, p, 24, 64, 8.0), p);
    const GridFunction f0 = two_bumps(g, p);
    const double A = collision_frequency(compute_moments(f0, g), p);
    for (Scheme sc : {Scheme::exponential, Scheme::rk4}) {
        const auto cfg = config(p, 0.2 / A, 2.0 / A, sc);
        const auto t1 = run_homogeneous(f0, cfg, g);
        const auto t2 = run_homogeneous(f0, cfg, g);
        CHECK((t1.final_state == t2.final_state).all());
        CHECK(t1.stamps.back().report.H_f == t2.stamps.back().report.H_f);
    }
}

TEST_CASE("transport step") {
    const auto p = testing::params(1, 2.0, 0.0, 1.0);
    const MacroState s = testing::isotropic_state(1, 1.0, 0.2, 0.2, 2.0, Vec::Constant(1, 0.5));
    const PhaseGrid g(testing::grid_for(s, p, 32, 32), p);
    const GridFunction m = maxwellian_01(s, p, g);
    const double v_max = g.axis(0).abs().maxCoeff();

    SUBCASE("uniform data is a fixed point") {
        DistSnapshot F(g.size(), 16, 0.1);
        for (std::size_t i = 0; i < 16; ++i) F.cell(i) = m;
        const DistSnapshot G = transport_step(F, 0.5 * 0.1 / v_max, g);
        CHECK((G.values == F.values).all());
    }
    SUBCASE("mass is conserved") {
        StateSampler smp(3);
        DistSnapshot F(g.size(), 16, 0.1);
        for (std::size_t i = 0; i < 16; ++i) F.cell(i) = m * (1.0 + 0.5 * smp.uniform(-1, 1));
        double m0 = 0, m1 = 0;
        const DistSnapshot G = transport_step(F, 0.8 * 0.1 / v_max, g);
        for (std::size_t i = 0; i < 16; ++i) {
            m0 += integrate(g, F.cell(i));
            m1 += integrate(g, G.cell(i));
        }
        CHECK(std::abs(m1 - m0) <= 1e-14 * m0);
    }
    SUBCASE("a square pulse moves with the mean velocity") {
        const std::size_t nx = 200;
        const double dx = 0.01;
        DistSnapshot F(g.size(), nx, dx);
        F.values.setZero();
        for (std::size_t i = 90; i < 110; ++i) F.cell(i) = m;
        auto center = [&](const DistSnapshot& G) {
            double num = 0, den = 0;
            for (std::size_t i = 0; i < nx; ++i) {
                const double r = integrate(g, G.cell(i));
                num += (i + 0.5) * dx * r;
                den += r;
            }
            return num / den;
        };
        const double x0 = center(F);
        const double dt = 0.5 * dx / v_max;
        const int steps = 40;
        for (int n = 0; n < steps; ++n) F = transport_step(F, dt, g);
        const MacroState ms = compute_moments(m, g);
        const double expected = ms.U[0] * dt * steps;
        CHECK(std::abs(center(F) - x0 - expected) <= 0.01 * expected);
    }
    SUBCASE("CFL violation") {
        DistSnapshot F(g.size(), 4, 0.1);
        CHECK_THROWS_AS(transport_step(F, 0.1 / v_max, g), ValidationError);
    }
}

TEST_CASE("Strang-split transport run") {
    const auto p = testing::params(1, 2.0, 0.5, 0.5);
    const MacroState s = testing::isotropic_state(1, 1.0, 1.0, 1.0, 2.0);
    const PhaseGrid g(testing::grid_for(s, p, 32, 64), p);
    const std::size_t nx = 16;
    DistSnapshot F(g.size(), nx, 0.1);
    for (std::size_t i = 0; i < nx; ++i) {
        const double ph = 2 * std::numbers::pi * (i + 0.5) / nx;
        const MacroState si = testing::isotropic_state(1, 1.0 + 0.2 * std::sin(ph), 1.0 + 0.1 * std::cos(ph), 1.0, 2.0);
        F.cell(i) = maxwellian_01(si, p, g);
    }
    auto cfg = config(p, 0.5 * 0.1 / g.axis(0).abs().maxCoeff(), 0.0);
    cfg.t_end = 20 * cfg.dt;
    cfg.report_every = 5;
    cfg.transport = TransportConfig{nx, 0.1, true};
    const auto traj = run_transport(F, cfg, g);
    REQUIRE_FALSE(traj.failure);
    for (const auto& st : traj.stamps) {
        CHECK(st.finite);
        CHECK(st.mass_drift <= 1e-13);
        CHECK(st.certificates_passed);
    }
    CHECK(traj.stamps.back().H_total <= traj.stamps.front().H_total + 1e-10);

    cfg.transport = TransportConfig{nx + 1, 0.1, true};
    CHECK_THROWS_AS(run_transport(F, cfg, g), ValidationError);
}

#include <doctest.h>

#include "esbgk/error.hpp"
#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"
#include "support.hpp"

using namespace esbgk;

TEST_CASE("moments of the discretized M01 on the default d=3 grid") {
    const auto p = testing::params(3, 2, 0, 1);
    const MacroState s = testing::isotropic_state(3, 1.0, 1.0, 1.0, 2.0);
    const PhaseGrid g(auto_bounds(s, p), p);
    const MacroState m = compute_moments(maxwellian_01(s, p, g), g);
    CHECK(std::abs(m.rho - 1.0) <= 2e-3);
    CHECK(m.U.norm() <= 1e-6);
    CHECK(std::abs(m.T_delta - 1.0) <= 5e-3);
}

TEST_CASE("vacuum is refused") {
    const auto p = testing::params(1, 2, 0, 1);
    const PhaseGrid g(GridSpec::uniform(1, 8, 4.0, Vec::Zero(1), 8, 8.0), p);
    CHECK_THROWS_AS(compute_moments(GridFunction::Zero(64), g), VacuumError);
}

TEST_CASE("even data has its mean at the box centre") {
    const auto p = testing::params(2, 2, 0, 1);
    Vec c(2);
    c << 0.75, -1.25;
    const PhaseGrid g(GridSpec::uniform(2, 16, 3.0, c, 8, 6.0), p);
    GridFunction f(static_cast<Eigen::Index>(g.size()));
    for (std::size_t vn = 0; vn < g.velocity_nodes(); ++vn) {
        const Vec w = g.velocity(vn) - c;
        for (std::size_t k = 0; k < g.internal_nodes(); ++k)
            f[static_cast<Eigen::Index>(vn * g.internal_nodes() + k)] = 1.0 + w[0] * w[0] + std::abs(w[1]) + 0.1 * k;
    }
    const MacroState m = compute_moments(f, g);
    CHECK(std::abs(m.U[0] - c[0]) <= 1e-14);
    CHECK(std::abs(m.U[1] - c[1]) <= 1e-14);
}

TEST_CASE("temperature identities hold to roundoff") {
    const auto p = testing::params(3, 3, 0.3, 0.4);
    const MacroState s = testing::anisotropic_state(3, 3.0);
    const PhaseGrid g(testing::grid_for(s, p, 20, 48), p);
    const MacroState m = compute_moments(gaussian_theta(s, p, g), g);
    CHECK(m.Theta.trace() == doctest::Approx(3.0 * m.T_tr).epsilon(1e-14));
    CHECK((3.0 + 3.0) * m.T_delta == doctest::Approx(3.0 * m.T_tr + 3.0 * m.T_int).epsilon(1e-14));
    CHECK(m.E_tr == doctest::Approx(1.5 * m.T_tr).epsilon(1e-15));
    CHECK(m.E_int == doctest::Approx(1.5 * m.T_int).epsilon(1e-15));
    CHECK(m.E_delta == doctest::Approx(3.0 * m.T_delta).epsilon(1e-15));
    CHECK(m.Theta == m.Theta.transpose());
}

TEST_CASE("corrected tensor special cases") {
    const MacroState s = testing::anisotropic_state(3, 2.0);
    SUBCASE("theta = 1 is isotropic at T_delta") {
        for (double nu : {-0.4, 0.0, 0.9}) {
            const auto ct = corrected_tensor(s, testing::params(3, 2, nu, 1.0));
            CHECK((ct.tensor - s.T_delta * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
            CHECK(ct.T_relax == s.T_delta);
        }
        const MacroState hot = MacroState::from_primitive(1.0, Vec::Zero(3), 2.0 * Mat::Identity(3, 3), 2.0, 2.0);
        const auto ct = corrected_tensor(hot, testing::params(3, 2, 0.3, 1.0));
        CHECK(ct.tensor == 2.0 * Mat::Identity(3, 3));
        CHECK(ct.T_relax == 2.0);
    }
    SUBCASE("theta = 0, nu = 0 gives T_tr Id and T_int") {
        const auto ct = corrected_tensor(s, testing::params(3, 2, 0.0, 0.0));
        CHECK((ct.tensor - s.T_tr * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(ct.T_relax == s.T_int);
    }
    SUBCASE("theta = 0, nu -> 1 approaches Theta") {
        const auto ct = corrected_tensor(s, testing::params(3, 2, 1.0 - 1e-12, 0.0));
        CHECK((ct.tensor - s.Theta).cwiseAbs().maxCoeff() <= 1e-11);
    }
    SUBCASE("exact mixture formula") {
        const auto p = testing::params(3, 2, 0.35, 0.6);
        const auto ct = corrected_tensor(s, p);
        const Mat expect = 0.6 * s.T_delta * Mat::Identity(3, 3) +
                           0.4 * ((1 - 0.35) * s.T_tr * Mat::Identity(3, 3) + 0.35 * s.Theta);
        CHECK((ct.tensor - expect).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(ct.T_relax == doctest::Approx(0.6 * s.T_delta + 0.4 * s.T_int).epsilon(1e-15));
        for (int i = 0; i < 3; ++i) CHECK(ct.eigen.values[i] > 0.0);
    }
}

TEST_CASE("non positive definite corrected tensor is rejected") {
    Mat Theta = Mat::Zero(3, 3);
    Theta.diagonal() << 0.1, 0.1, 5.8;
    const MacroState s = MacroState::from_primitive(1.0, Vec::Zero(3), Theta, 1.0, 2.0);
    ModelParams p = testing::params(3, 2, -0.9, 0.0);  // outside the admissible range on purpose
    CHECK_THROWS_AS(corrected_tensor(s, p), DefinitenessError);
}

TEST_CASE("eigenvalues of T_{nu,theta} at theta = 1/2 lie between theta = 0 and theta = 1") {
    StateSampler smp(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat Theta = smp.random_spd(3, 1.0);
        const MacroState s = MacroState::from_primitive(1.0, Vec::Zero(3), Theta, smp.log_uniform(0.2, 5), 2.0);
        const double nu = smp.uniform(-0.49, 0.99);
        const auto e0 = corrected_tensor(s, testing::params(3, 2, nu, 0.0)).eigen.values;
        const auto eh = corrected_tensor(s, testing::params(3, 2, nu, 0.5)).eigen.values;
        const auto e1 = corrected_tensor(s, testing::params(3, 2, nu, 1.0)).eigen.values;
        for (int i = 0; i < 3; ++i) {
            CHECK(eh[i] >= std::min(e0[i], e1[i]) - 1e-13);
            CHECK(eh[i] <= std::max(e0[i], e1[i]) + 1e-13);
        }
    }
}

TEST_CASE("collision frequency examples") {
    auto st = [](double rho, double T) { return testing::isotropic_state(3, rho, T, T, 2.0); };
    CHECK(collision_frequency(st(1, 1), testing::params(3, 2, 0.0, 0.7)) == doctest::Approx(1.0));
    CHECK(collision_frequency(st(1, 1), testing::params(3, 2, 0.5, 0.0)) == doctest::Approx(2.0));
    CHECK(collision_frequency(st(2, 3), testing::params(3, 2, -0.25, 1.0, 1.5)) == doctest::Approx(4.0));
}

TEST_CASE("conserved moments of a Maxwellian") {
    const auto p = testing::params(2, 2, 0, 1);
    Vec U(2);
    U << 0.5, -0.3;
    const MacroState s = testing::isotropic_state(2, 1.5, 1.0, 1.0, 2.0, U);
    const PhaseGrid g(testing::grid_for(s, p, 48, 256, 8.0), p);
    const auto c = conserved_moments(maxwellian_01(s, p, g), g);
    CHECK(c.mass == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(c.momentum[0] == doctest::Approx(0.75).epsilon(1e-3));
    // 1/2 rho |U|^2 + rho (d + delta)/2 T.
    CHECK(c.energy == doctest::Approx(1.5 * (0.5 * U.squaredNorm() + 2.0)).epsilon(2e-3));
}

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "esbgk/sampling.hpp"
#include "esbgk/sym_eigen.hpp"

using namespace esbgk;

TEST_CASE("Jacobi agrees with Eigen's self-adjoint solver on random SPD matrices") {
    StateSampler s(11);
    for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 200; ++trial) {
            const Mat A = s.random_spd(d, 1.0);
            const auto mine = jacobi_eigen(A);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref{Eigen::MatrixXd(A)};
            for (int i = 0; i < d; ++i) CHECK(mine.values[i] == doctest::Approx(ref.eigenvalues()[i]).epsilon(1e-12));
            CHECK((mine.reconstruct() - A).cwiseAbs().maxCoeff() < 1e-13 * A.norm());
            CHECK((mine.vectors.transpose() * mine.vectors - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
            for (int i = 1; i < d; ++i) CHECK(mine.values[i - 1] <= mine.values[i]);
        }
    }
}

TEST_CASE("diagonal input is returned exactly") {
    Mat D = Mat::Zero(3, 3);
    D.diagonal() << 2.5, 0.1, 7.0;
    const auto e = jacobi_eigen(D);
    CHECK(e.values[0] == 0.1);
    CHECK(e.values[1] == 2.5);
    CHECK(e.values[2] == 7.0);
    CHECK(e.reconstruct() == D);
    const Mat I = 1.7 * Mat::Identity(3, 3);
    CHECK(jacobi_eigen(I).reconstruct() == I);
}

TEST_CASE("determinant and log-determinant") {
    Mat A(2, 2);
    A << 2.0, 1.0, 1.0, 2.0;
    const auto e = jacobi_eigen(A);
    CHECK(e.determinant() == doctest::Approx(3.0));
    CHECK(e.log_determinant() == doctest::Approx(std::log(3.0)));
}

TEST_CASE("non-square or oversized input is rejected") {
    CHECK_THROWS(jacobi_eigen(Eigen::MatrixXd::Identity(4, 4)));
    CHECK_THROWS(jacobi_eigen(Eigen::MatrixXd(2, 3)));
}

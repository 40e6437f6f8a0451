#pragma once

#include <cmath>
#include <stdexcept>

#include "esbgk/types.hpp"

namespace esbgk {

/// Eigen-decomposition A = Q diag(values) Q^T of a small symmetric matrix.
/// Values are sorted ascending; columns of Q are the matching eigenvectors.
template <typename Scalar>
struct SymEigen {
    VecN<Scalar> values;
    MatN<Scalar> vectors;

    Scalar determinant() const { return values.prod(); }

    Scalar log_determinant() const {
        Scalar s(0);
        for (Eigen::Index i = 0; i < values.size(); ++i) s += std::log(values[i]);
        return s;
    }

    MatN<Scalar> reconstruct() const { return vectors * values.asDiagonal() * vectors.transpose(); }
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `tol` times the Frobenius norm of the input. Diagonal input is returned
/// untouched (no rotation is applied), so isotropic tensors stay bit-exact.
template <typename Derived>
SymEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                typename Derived::Scalar tol = 1e-13,
                                                int max_sweeps = 64) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = input.rows();
    if (n != input.cols() || n < 1 || n > kMaxDim)
        throw std::invalid_argument("jacobi_eigen: expected a square matrix of size 1..3");

    MatN<Scalar> a = input;
    MatN<Scalar> q = MatN<Scalar>::Identity(n, n);
    const Scalar scale = a.norm();

    auto off_norm = [&] {
        Scalar s(0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) s += 2 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > tol * scale) {
        if (++sweep > max_sweeps) throw std::runtime_error("jacobi_eigen: no convergence");
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index r = p + 1; r < n; ++r) {
                const Scalar apr = a(p, r);
                if (apr == Scalar(0)) continue;
                // Rotation annihilating a(p, r); the smaller-angle root keeps it stable.
                const Scalar tau = (a(r, r) - a(p, p)) / (2 * apr);
                const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
                const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
                const Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    SymEigen<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Insertion sort by eigenvalue; n <= 3.
    Eigen::Index order[kMaxDim] = {0, 1, 2};
    for (Eigen::Index i = 1; i < n; ++i)
        for (Eigen::Index j = i; j > 0 && a(order[j], order[j]) < a(order[j - 1], order[j - 1]); --j)
            std::swap(order[j], order[j - 1]);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]);
        out.vectors.col(i) = q.col(order[i]);
    }
    return out;
}

}  // namespace esbgk

#pragma once

#include <Eigen/Core>

namespace esbgk {

/// Velocity-space vector, d <= 3, stored inline.
template <typename Scalar>
using VecN = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;

/// Symmetric velocity-space tensor, d <= 3, stored inline.
template <typename Scalar>
using MatN = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

using Vec = VecN<double>;
using Mat = MatN<double>;

/// Values of a grid function on one spatial cell, in node order.
using GridFunction = Eigen::ArrayXd;
using GridFunctionView = Eigen::Ref<const Eigen::ArrayXd>;

inline constexpr int kMaxDim = 3;

}  // namespace esbgk

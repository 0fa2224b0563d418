#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace thickflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Gradient convention used everywhere: G(i, j) = d v_i / d x_j.

}  // namespace thickflow

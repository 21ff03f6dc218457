#pragma once

#include <Eigen/Dense>
#include <complex>

namespace classc {

using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

}  // namespace classc

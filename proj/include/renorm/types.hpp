#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace renorm {

constexpr int kMaxDim = 4;

// Fixed-capacity vectors keep the hot loops allocation free.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

using Point = Vec;
using Functional = Vec;

inline double pairing(const Functional& phi, const Point& x)
{
    if (phi.size() != x.size()) throw std::invalid_argument("pairing: dimension mismatch");
    return phi.dot(x);
}

}  // namespace renorm

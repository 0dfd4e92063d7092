#pragma once

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include <cstdint>

namespace lcc {

template <class Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;
using VectorXi = Eigen::VectorXi;

// Exact data volumes in normalized file units.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
  return boost::rational_cast<double>(q);
}

}  // namespace lcc

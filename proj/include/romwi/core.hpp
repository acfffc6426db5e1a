#pragma once
#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace romwi {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;
using ArrX = Eigen::ArrayXd;

// bad configuration / inconsistent inputs -> CLI exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// runtime numerical failure (non-SPD mass, Lanczos breakdown, ...) -> CLI exit code 3
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline MatX sym_part(const MatX& A) { return 0.5 * (A + A.transpose()); }

inline double rel_err(const MatX& got, const MatX& want) {
  double denom = want.norm();
  return denom > 0 ? (got - want).norm() / denom : (got - want).norm();
}

}  // namespace romwi

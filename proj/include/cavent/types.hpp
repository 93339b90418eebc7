#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace cavent {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Root of the error hierarchy.  The CLI maps UsageError to exit code 2 and
// every other Error to exit code 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};

}  // namespace cavent

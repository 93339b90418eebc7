#pragma once

#include <functional>
#include <vector>

#include "cavent/types.hpp"

namespace cavent::numerics {

struct NotHermitian : Error {
  using Error::Error;
};
struct Singular : Error {
  using Error::Error;
};
struct StepUnderflow : Error {
  using Error::Error;
};

bool is_hermitian(const Mat& a, double tol = 1e-12);

// Kronecker product.  out has a.rows()*b.rows() rows; the block at
// (i*b.rows(), j*b.cols()) equals a(i,j) * b.
Mat kron(const Mat& a, const Mat& b);

// Eigendecomposition of a Hermitian matrix: values ascending, vectors
// column-orthonormal, a == vectors * values.asDiagonal() * vectors.adjoint().
struct EigResult {
  RVec values;
  Mat vectors;
};
EigResult hermitian_eig(const Mat& a, double herm_tol = 1e-12);

// Solves a x = b for square a.  The residual |a x - b| is verified after the
// factorization; rank deficiency raises Singular.
Vec solve_linear(const Mat& a, const Vec& b);

using Rhs = std::function<Vec(double, const Vec&)>;

// Dormand-Prince 5(4) pair with PI step-size control.  Returns the state at
// every grid time; t_grid must be strictly increasing and out[0] == y0.
// Raises StepUnderflow once the controller pushes the step below
// 1e-14 * (t_grid.back() - t_grid.front()).
std::vector<Vec> integrate_adaptive(const Rhs& rhs, const Vec& y0,
                                    const std::vector<double>& t_grid,
                                    double rtol = 1e-9, double atol = 1e-12);

}  // namespace cavent::numerics

#include "cavent/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace cavent::numerics {

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

EigResult hermitian_eig(const Mat& a, double herm_tol) {
  if (a.rows() != a.cols()) throw NotHermitian("hermitian_eig: matrix is not square");
  if (!is_hermitian(a, herm_tol)) throw NotHermitian("hermitian_eig: matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Vec solve_linear(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols()) throw Singular("solve_linear: matrix is not square");
  if (a.rows() != b.size()) throw Singular("solve_linear: dimension mismatch");
  Eigen::PartialPivLU<Mat> lu(a);
  Vec x = lu.solve(b);
  double scale = a.cwiseAbs().maxCoeff() * x.norm() + b.norm();
  if (x.allFinite() && (a * x - b).norm() <= 1e-10 * std::max(1.0, scale)) return x;
  // slow path: classify.  Rank deficiency is the expected reason to land here.
  Eigen::FullPivLU<Mat> flu(a);
  if (flu.rank() < a.rows()) throw Singular("solve_linear: matrix is singular");
  x = flu.solve(b);
  if (!x.allFinite() || (a * x - b).norm() > 1e-8 * std::max(1.0, scale))
    throw Singular("solve_linear: residual check failed");
  return x;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    double q = std::abs(err(i)) / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const Rhs& rhs, double t0, const Vec& y0, const Vec& f0, double t_span,
                    double rtol, double atol) {
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    double sc = atol + rtol * std::abs(y0(i));
    d0 += std::norm(y0(i) / sc);
    d1 += std::norm(f0(i) / sc);
  }
  d0 = std::sqrt(d0);
  d1 = std::sqrt(d1);
  double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_span);
  Vec y1 = y0 + h0 * rhs(t0, y0);
  Vec f1 = rhs(t0 + h0, y1);
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    double sc = atol + rtol * std::abs(y0(i));
    d2 += std::norm((f1(i) - f0(i)) / sc);
  }
  d2 = std::sqrt(d2) / h0;
  double m = std::max(d1, d2);
  double h1 = (m <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
  double h = std::min({100.0 * h0, h1, t_span});
  if (!std::isfinite(h) || h <= 0.0) h = 1e-6 * t_span;
  return h;
}

}  // namespace

std::vector<Vec> integrate_adaptive(const Rhs& rhs, const Vec& y0,
                                    const std::vector<double>& t_grid, double rtol, double atol) {
  if (t_grid.empty()) throw Error("integrate_adaptive: empty time grid");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw Error("integrate_adaptive: time grid must be strictly increasing");
  if (!(rtol > 0.0) || !(atol > 0.0))
    throw Error("integrate_adaptive: tolerances must be positive");

  std::vector<Vec> out;
  out.reserve(t_grid.size());
  out.push_back(y0);
  if (t_grid.size() == 1) return out;

  const double t_span = t_grid.back() - t_grid.front();
  const double h_floor = 1e-14 * t_span;
  // PI controller constants, 5th order error estimate
  const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
  const double fac_min = 0.2, fac_max = 10.0;

  double t = t_grid.front();
  Vec y = y0;
  Vec k1 = rhs(t, y);
  if (k1.size() != y.size()) throw Error("integrate_adaptive: rhs dimension mismatch");
  double h = initial_step(rhs, t, y, k1, t_span, rtol, atol);
  double facold = 1e-4;
  bool rejected = false;

  for (size_t target = 1; target < t_grid.size(); ++target) {
    const double t_end = t_grid[target];
    while (t < t_end) {
      // negated comparison so a non-finite h also lands here
      if (!(h >= h_floor)) throw StepUnderflow("integrate_adaptive: step size underflow");
      bool clipped = false;
      const double h_trial = h;
      if (t + h >= t_end) {
        h = t_end - t;
        clipped = true;
      }

      Vec k2 = rhs(t + c2 * h, Vec(y + h * (a21 * k1)));
      Vec k3 = rhs(t + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
      Vec k4 = rhs(t + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
      Vec k5 = rhs(t + c5 * h, Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      Vec k6 = rhs(t + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Vec k7 = rhs(t + h, ynew);  // FSAL stage
      Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double en = error_norm(err, y, ynew, rtol, atol);
      if (!std::isfinite(en)) en = 1e10;

      double fac11 = std::pow(en, expo1);
      if (en <= 1.0) {
        // accepted
        double fo = std::max(facold, 1e-4);
        double fac = fac11 / std::pow(fo, beta);
        fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
        double hnew = h / fac;
        facold = std::max(en, 1e-4);
        t = clipped ? t_end : t + h;
        y.swap(ynew);
        k1.swap(k7);
        if (rejected) hnew = std::min(hnew, h);
        rejected = false;
        // a step clipped to an output time says nothing about the natural
        // step; keep the pre-clip trial size unless the controller grows it
        h = clipped ? std::max(hnew, h_trial) : hnew;
      } else {
        h = h / std::min(1.0 / fac_min, fac11 / safe);
        rejected = true;
      }
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace cavent::numerics

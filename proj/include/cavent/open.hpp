#pragma once

#include <vector>

#include "cavent/model.hpp"

namespace cavent::open {

using model::ModelParams;

struct PositivityViolation : Error {
  using Error::Error;
};
struct NonUniqueSteadyState : Error {
  using Error::Error;
};
struct NoDissipation : Error {
  using Error::Error;
};
struct NotConverged : Error {
  using Error::Error;
};

// Generator data: the (rotating-frame) hamiltonian plus collapse channels.
// Adjoints are cached once so the right-hand side stays allocation-light
// inside the integrator.
struct LindbladSpec {
  struct Channel {
    double rate;
    Mat op, op_dag, op_dag_op;
  };
  Mat hamiltonian;
  std::vector<Channel> channels;

  void add_channel(double rate, const Mat& op);
  double total_rate() const;

  // driven hamiltonian, cavity loss kappa, qubit decay gamma on each qubit
  static LindbladSpec from_params(const ModelParams& p);
};

// -i[h, rho] + sum_k rate_k (A rho A^+ - 1/2 {A^+A, rho}).
// Trace- and hermiticity-preserving for hermitian h.
Mat lindblad_rhs(const LindbladSpec& spec, const Mat& rho);

// The same generator as a dim^2 x dim^2 matrix over column-stacked rho:
// vec(d rho/dt) = L vec(rho).
Mat liouvillian_matrix(const LindbladSpec& spec);

// Integrates the master equation from rho0 at t_grid.front().  Outputs are
// the raw integrator states so drift stays measurable; each is checked and
// an eigenvalue below -1e-6 raises PositivityViolation (gross trace or
// hermiticity loss beyond 1e-6 is an Error).
std::vector<Mat> evolve_open(const ModelParams& p, const Mat& rho0,
                             const std::vector<double>& t_grid,
                             double rtol = 1e-9, double atol = 1e-12);

// Null vector of the Liouvillian, hermitized and scaled to unit trace.
// Solved by replacing the last generator row with the trace constraint; the
// residual of the original generator (<= 1e-9) guards the shortcut, and a
// rank probe distinguishes a defective solve from a degenerate kernel.
Mat steady_state(const ModelParams& p);

// Ladder check: from p.n_max upward (doubling), find the first cutoff whose
// steady reduced concurrence agrees with the cutoff+2 run within 1e-6.
// Gives up (NotConverged) once the ladder reaches 16.
struct TruncationResult {
  bool converged;
  int n_max_used;
};
TruncationResult check_truncation_convergence(const ModelParams& p);

}  // namespace cavent::open

#include "cavent/open.hpp"

#include <cmath>

#include "cavent/hilbert.hpp"
#include "cavent/measures.hpp"
#include "cavent/numerics.hpp"

namespace cavent::open {

void LindbladSpec::add_channel(double rate, const Mat& op) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw model::InvalidParams("collapse rate must be non-negative");
  if (op.rows() != op.cols())
    throw hilbert::DimensionMismatch("collapse operator must be square");
  Eigen::Index dim = hamiltonian.rows();
  if (dim == 0 && !channels.empty()) dim = channels.front().op.rows();
  if (dim != 0 && op.rows() != dim)
    throw hilbert::DimensionMismatch("collapse operator does not fit the generator");
  Channel c;
  c.rate = rate;
  c.op = op;
  c.op_dag = op.adjoint();
  c.op_dag_op = c.op_dag * op;
  channels.push_back(std::move(c));
}

double LindbladSpec::total_rate() const {
  double s = 0.0;
  for (const auto& c : channels) s += c.rate;
  return s;
}

LindbladSpec LindbladSpec::from_params(const ModelParams& p) {
  LindbladSpec spec;
  spec.hamiltonian = model::hamiltonian_driven(p);
  auto ops = hilbert::build_operator_set(p.n_max);
  spec.add_channel(p.kappa, ops.a);
  spec.add_channel(p.gamma, ops.s_minus[0]);
  spec.add_channel(p.gamma, ops.s_minus[1]);
  return spec;
}

Mat lindblad_rhs(const LindbladSpec& spec, const Mat& rho) {
  const Eigen::Index dim = spec.hamiltonian.rows();
  if (rho.rows() != dim || rho.cols() != dim)
    throw hilbert::DimensionMismatch("state does not fit the generator");
  Mat out = Complex(0, -1) * (spec.hamiltonian * rho - rho * spec.hamiltonian);
  for (const auto& c : spec.channels) {
    out += c.rate * ((c.op * rho) * c.op_dag);
    out -= (0.5 * c.rate) * (c.op_dag_op * rho + rho * c.op_dag_op);
  }
  return out;
}

Mat liouvillian_matrix(const LindbladSpec& spec) {
  const Eigen::Index dim = spec.hamiltonian.rows();
  Mat id = Mat::Identity(dim, dim);
  Mat l = Complex(0, -1) * (numerics::kron(id, spec.hamiltonian) -
                            numerics::kron(spec.hamiltonian.transpose(), id));
  for (const auto& c : spec.channels) {
    l += c.rate * numerics::kron(c.op.conjugate(), c.op);
    l -= (0.5 * c.rate) * numerics::kron(id, c.op_dag_op);
    l -= (0.5 * c.rate) * numerics::kron(c.op_dag_op.transpose(), id);
  }
  return l;
}

namespace {

void validate_output(const Mat& rho) {
  if (std::abs(rho.trace() - Complex(1, 0)) > 1e-6)
    throw Error("integrated state lost its trace");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-6)
    throw Error("integrated state lost hermiticity");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (rho + rho.adjoint())),
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-6)
    throw PositivityViolation("integrated state has a negative eigenvalue");
}

}  // namespace

std::vector<Mat> evolve_open(const ModelParams& p, const Mat& rho0,
                             const std::vector<double>& t_grid, double rtol,
                             double atol) {
  auto spec = LindbladSpec::from_params(p);
  const Eigen::Index dim = spec.hamiltonian.rows();
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw hilbert::DimensionMismatch("initial state does not fit the generator");

  // half the generator in one matrix: rhs = g rho + rho g^+ + sum jumps
  Mat g = Complex(0, -1) * spec.hamiltonian;
  for (const auto& c : spec.channels) g -= (0.5 * c.rate) * c.op_dag_op;
  Mat g_dag = g.adjoint();

  auto rhs = [&](double, const Vec& y) {
    Eigen::Map<const Mat> rho(y.data(), dim, dim);
    Mat out = g * rho + rho * g_dag;
    for (const auto& c : spec.channels)
      out += c.rate * ((c.op * rho) * c.op_dag);
    return Vec(Eigen::Map<Vec>(out.data(), dim * dim));
  };

  Vec y0 = Eigen::Map<const Vec>(rho0.data(), dim * dim);
  auto ys = numerics::integrate_adaptive(rhs, y0, t_grid, rtol, atol);

  std::vector<Mat> out;
  out.reserve(ys.size());
  for (const Vec& y : ys) {
    Mat rho = Eigen::Map<const Mat>(y.data(), dim, dim);
    validate_output(rho);
    out.push_back(std::move(rho));
  }
  return out;
}

Mat steady_state(const ModelParams& p) {
  auto spec = LindbladSpec::from_params(p);
  if (spec.total_rate() <= 0.0)
    throw NoDissipation("steady state needs at least one nonzero rate");
  const Eigen::Index dim = spec.hamiltonian.rows();
  const Eigen::Index n2 = dim * dim;
  Mat l = liouvillian_matrix(spec);

  Mat m = l;
  m.row(n2 - 1).setZero();
  for (Eigen::Index i = 0; i < dim; ++i) m(n2 - 1, i * dim + i) = 1.0;
  Vec b = Vec::Zero(n2);
  b(n2 - 1) = 1.0;

  Eigen::PartialPivLU<Mat> lu(m);
  Vec x = lu.solve(b);
  // a kernel of dimension > 1 makes the trace-replaced system singular, seen
  // as a collapsed pivot even when the solve happens to return a null vector
  RVec piv = lu.matrixLU().diagonal().cwiseAbs();
  bool regular = piv.minCoeff() > 1e-10 * piv.maxCoeff();
  bool ok = regular && x.allFinite() && (l * x).norm() <= 1e-9;
  if (!ok) {
    // either the dropped row was load-bearing or the kernel is degenerate
    Eigen::FullPivLU<Mat> flu(l);
    flu.setThreshold(1e-8);
    if (flu.dimensionOfKernel() > 1)
      throw NonUniqueSteadyState("the generator has several steady states");
    if (flu.dimensionOfKernel() == 0)
      throw Error("no steady state at the rank-probe tolerance");
    x = flu.kernel().col(0);
    Complex tr = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) tr += x(i * dim + i);
    if (std::abs(tr) < 1e-12)
      throw Error("steady-state kernel vector is traceless");
    x /= tr;
  }

  Mat rho = Eigen::Map<const Mat>(x.data(), dim, dim);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

TruncationResult check_truncation_convergence(const ModelParams& p) {
  p.validate();
  auto conc_at = [&p](int n) {
    ModelParams q = p;
    q.n_max = n;
    Mat rho = steady_state(q);
    return measures::concurrence(hilbert::partial_trace_cavity(rho, n));
  };
  int n = p.n_max;
  while (true) {
    if (n >= 16) throw NotConverged("cutoff ladder exhausted at 16 levels");
    if (std::abs(conc_at(n) - conc_at(n + 2)) < 1e-6) return {true, n};
    n *= 2;
  }
}

}  // namespace cavent::open

#include "cavent/hilbert.hpp"

#include <cmath>

#include "cavent/numerics.hpp"

namespace cavent::hilbert {

namespace {

void check_n_max(int n_max) {
  if (n_max < 1) throw DimensionMismatch("n_max must be at least 1");
}

int full_dim(int n_max) { return 2 * (n_max + 1) * 2; }

}  // namespace

int basis_index(int q1, int n, int q2, int n_max) {
  return (q1 * (n_max + 1) + n) * 2 + q2;
}

OperatorSet build_operator_set(int n_max) {
  check_n_max(n_max);
  const int nc = n_max + 1;

  Mat a_c = Mat::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) a_c(n - 1, n) = std::sqrt(double(n));
  Mat id_c = Mat::Identity(nc, nc);
  Mat id_q = Mat::Identity(2, 2);

  Mat sp = Mat::Zero(2, 2);
  sp(1, 0) = 1.0;  // |g> -> |e>
  Mat sm = Mat(sp.adjoint());
  Mat sz = Mat::Zero(2, 2);
  sz(0, 0) = -0.5;
  sz(1, 1) = 0.5;

  using numerics::kron;
  OperatorSet ops;
  ops.n_max = n_max;
  ops.dim = full_dim(n_max);
  ops.a = kron(id_q, kron(a_c, id_q));
  ops.a_dag = Mat(ops.a.adjoint());
  ops.s_plus = {kron(sp, kron(id_c, id_q)), kron(id_q, kron(id_c, sp))};
  ops.s_minus = {kron(sm, kron(id_c, id_q)), kron(id_q, kron(id_c, sm))};
  ops.s_z = {kron(sz, kron(id_c, id_q)), kron(id_q, kron(id_c, sz))};
  ops.identity = Mat::Identity(ops.dim, ops.dim);
  return ops;
}

Vec embed_single_excitation(const SubspaceState& s, int n_max) {
  check_n_max(n_max);
  Vec psi = Vec::Zero(full_dim(n_max));
  psi(basis_index(1, 0, 0, n_max)) = s.alpha;
  psi(basis_index(0, 1, 0, n_max)) = s.beta;
  psi(basis_index(0, 0, 1, n_max)) = s.gamma;
  return psi;
}

ExtractResult extract_single_excitation(const Vec& psi, int n_max) {
  check_n_max(n_max);
  if (psi.size() != full_dim(n_max))
    throw DimensionMismatch("extract_single_excitation: state size does not match n_max");
  ExtractResult r;
  r.state.alpha = psi(basis_index(1, 0, 0, n_max));
  r.state.beta = psi(basis_index(0, 1, 0, n_max));
  r.state.gamma = psi(basis_index(0, 0, 1, n_max));
  double inside =
      std::norm(r.state.alpha) + std::norm(r.state.beta) + std::norm(r.state.gamma);
  r.leak = psi.squaredNorm() - inside;
  return r;
}

Mat partial_trace_cavity(const Mat& rho_full, int n_max) {
  check_n_max(n_max);
  const int dim = full_dim(n_max);
  if (rho_full.rows() != dim || rho_full.cols() != dim)
    throw DimensionMismatch("partial_trace_cavity: state size does not match n_max");
  Mat out = Mat::Zero(4, 4);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) {
          Complex acc = 0.0;
          for (int n = 0; n <= n_max; ++n)
            acc += rho_full(basis_index(i1, n, i2, n_max), basis_index(j1, n, j2, n_max));
          out(2 * i1 + i2, 2 * j1 + j2) = acc;
        }
  return out;
}

}  // namespace cavent::hilbert

#include "cavent/model.hpp"

#include <cmath>

#include "cavent/numerics.hpp"

namespace cavent::model {

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(g1 > 0.0) || !finite(g1)) throw InvalidParams("g1 must be positive");
  if (g2 < 0.0 || !finite(g2)) throw InvalidParams("g2 must be non-negative");
  if (!finite(omega) || !finite(eps1) || !finite(eps2))
    throw InvalidParams("frequencies must be finite");
  if (kappa < 0.0 || !finite(kappa)) throw InvalidParams("kappa must be non-negative");
  if (gamma < 0.0 || !finite(gamma)) throw InvalidParams("gamma must be non-negative");
  if (d < 0.0 || !finite(d)) throw InvalidParams("d must be non-negative");
  if (!finite(Omega_drive)) throw InvalidParams("Omega_drive must be finite");
  if (n_max < 1) throw InvalidParams("n_max must be at least 1");
}

namespace {

double checked_delta(const ModelParams& p) {
  if (p.eps1 != p.eps2)
    throw UnequalEpsilons("effective forms require eps1 == eps2");
  double delta = p.detuning();
  if (delta == 0.0) throw ZeroDetuning("effective forms require eps != omega");
  return delta;
}

// photon number as an exact integer diagonal; the product a_dag*a carries
// (sqrt n)^2 != n crumbs that break exact excitation-number commutation
Mat photon_number(int n_max) {
  Mat nc = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) nc(n, n) = double(n);
  Mat id_q = Mat::Identity(2, 2);
  using numerics::kron;
  return kron(id_q, kron(nc, id_q));
}

}  // namespace

Mat hamiltonian_full(const ModelParams& p) {
  p.validate();
  auto ops = hilbert::build_operator_set(p.n_max);
  Mat h = p.omega * photon_number(p.n_max) + p.eps1 * ops.s_z[0] + p.eps2 * ops.s_z[1];
  h += p.g1 * (ops.a_dag * ops.s_minus[0] + ops.a * ops.s_plus[0]);
  h += p.g2 * (ops.a_dag * ops.s_minus[1] + ops.a * ops.s_plus[1]);
  return h;
}

Mat hamiltonian_driven(const ModelParams& p) {
  p.validate();
  auto ops = hilbert::build_operator_set(p.n_max);
  const double w = p.Omega_drive;
  Mat h = (p.omega - w) * photon_number(p.n_max) + (p.eps1 - w) * ops.s_z[0] +
          (p.eps2 - w) * ops.s_z[1];
  h += p.g1 * (ops.a_dag * ops.s_minus[0] + ops.a * ops.s_plus[0]);
  h += p.g2 * (ops.a_dag * ops.s_minus[1] + ops.a * ops.s_plus[1]);
  h += p.d * (ops.s_plus[1] + ops.s_minus[1]);
  return h;
}

Mat hamiltonian_effective(const ModelParams& p) {
  p.validate();
  const double delta = checked_delta(p);
  auto ops = hilbert::build_operator_set(p.n_max);
  Mat nph = photon_number(p.n_max);
  Mat h = p.omega * nph + p.eps1 * ops.s_z[0] + p.eps2 * ops.s_z[1];
  // a a_dag under truncation: 2n+1 below the cutoff, n at the top level
  Mat photon_sym = 2.0 * nph + Mat::Identity(ops.dim, ops.dim);
  for (int q1 : {0, 1})
    for (int q2 : {0, 1}) {
      int top = hilbert::basis_index(q1, p.n_max, q2, p.n_max);
      photon_sym(top, top) = double(p.n_max);
    }
  h += (p.g1 * p.g1 / delta) * photon_sym * ops.s_z[0];
  h += (p.g2 * p.g2 / delta) * photon_sym * ops.s_z[1];
  // both orderings of the mediated exchange together carry g1*g2/delta
  h += (p.g1 * p.g2 / delta) *
       (ops.s_plus[0] * ops.s_minus[1] + ops.s_plus[1] * ops.s_minus[0]);
  return h;
}

Mat hamiltonian_effective_qubits(const ModelParams& p) {
  p.validate();
  const double delta = checked_delta(p);
  const double et1 = p.eps1 + p.g1 * p.g1 / delta;
  const double et2 = p.eps2 + p.g2 * p.g2 / delta;
  const double j = p.g1 * p.g2 / delta;
  Mat sz = Mat::Zero(2, 2), sp = Mat::Zero(2, 2);
  sz(0, 0) = -0.5;
  sz(1, 1) = 0.5;
  sp(1, 0) = 1.0;
  Mat sm = Mat(sp.adjoint());
  Mat id = Mat::Identity(2, 2);
  using numerics::kron;
  Mat h = et1 * kron(sz, id) + et2 * kron(id, sz);
  h += j * (kron(sp, sm) + kron(sm, sp));
  return h;
}

EigenSystem analytic_eigensystem(const ModelParams& p) {
  p.validate();
  if (p.eps1 != p.eps2)
    throw UnequalEpsilons("analytic eigensystem requires eps1 == eps2");
  if (p.g1 == 0.0 || p.g2 == 0.0)
    throw DegenerateRatio("analytic eigensystem requires both couplings nonzero");

  const double dp = p.omega - p.eps1;  // block diagonal of the photon state
  const double g2sum = p.g1 * p.g1 + p.g2 * p.g2;
  const double root = std::sqrt(dp * dp + 4.0 * g2sum);

  EigenSystem es;
  es.e1 = 0.0;
  es.e2 = 0.5 * (dp - root);
  es.e3 = 0.5 * (dp + root);

  auto normalized = [](double a, double b, double c) {
    double n = std::sqrt(a * a + b * b + c * c);
    return hilbert::SubspaceState{Complex(a / n, 0), Complex(b / n, 0), Complex(c / n, 0)};
  };
  es.v1 = normalized(-p.g2 / p.g1, 0.0, 1.0);
  es.v2 = normalized(p.g1 / p.g2, es.e2 / p.g2, 1.0);
  es.v3 = normalized(p.g1 / p.g2, es.e3 / p.g2, 1.0);
  return es;
}

}  // namespace cavent::model

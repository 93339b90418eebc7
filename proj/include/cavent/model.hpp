#pragma once

#include "cavent/hilbert.hpp"

namespace cavent::model {

struct InvalidParams : Error {
  using Error::Error;
};
struct ZeroDetuning : Error {
  using Error::Error;
};
struct UnequalEpsilons : Error {
  using Error::Error;
};
struct DegenerateRatio : Error {
  using Error::Error;
};

// g1 fixes the frequency unit; every time below is in 1/g1.
struct ModelParams {
  double g1 = 1.0;   // qubit-1 cavity coupling
  double g2 = 1.0;   // qubit-2 cavity coupling
  double omega = 50.0;  // cavity frequency
  double eps1 = 10.0;   // qubit splittings
  double eps2 = 10.0;
  double kappa = 1.0;    // cavity decay rate
  double gamma = 0.005;  // qubit decay rate (both qubits)
  double d = 0.0;        // drive amplitude on qubit 2
  double Omega_drive = 0.0;  // drive frequency, also the rotating-frame frequency
  int n_max = 1;

  double detuning() const { return eps1 - omega; }  // signed
  double ratio() const { return g2 / g1; }
  void validate() const;  // throws InvalidParams
};

// Exchange coupling on the full space:
//   omega a^+a + sum_i eps_i S_i^z + sum_i g_i (a^+ S_i^- + a S_i^+).
// Commutes with the total excitation number exactly.
Mat hamiltonian_full(const ModelParams& p);

// Frame rotating at Omega_drive, with a transverse drive d on qubit 2:
//   (omega-W) a^+a + sum_i (eps_i-W) S_i^z + couplings + d (S_2^+ + S_2^-).
Mat hamiltonian_driven(const ModelParams& p);

// Second-order dispersive form on the full space: cavity-number-conserving
// level shifts plus the cavity-mediated qubit flip-flop with coefficient
// g1*g2/delta (delta = eps - omega, signed).
Mat hamiltonian_effective(const ModelParams& p);

// Vacuum-cavity projection of the dispersive form: 4x4 on the two qubits,
// shifted splittings eps_i + g_i^2/delta, off-diagonal g1*g2/delta.
Mat hamiltonian_effective_qubits(const ModelParams& p);

// Single-excitation eigensystem for eps1 == eps2.  e1 == 0 belongs to the
// cavity-dark superposition; e2 <= 0 <= e3 are the polariton branches.
// Vectors are normalized amplitudes on {|100>, |010>, |001>}.
struct EigenSystem {
  double e1, e2, e3;
  hilbert::SubspaceState v1, v2, v3;
};
EigenSystem analytic_eigensystem(const ModelParams& p);

}  // namespace cavent::model

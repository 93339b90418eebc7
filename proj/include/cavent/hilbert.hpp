#pragma once

#include <array>

#include "cavent/types.hpp"

namespace cavent::hilbert {

struct DimensionMismatch : Error {
  using Error::Error;
};

// Composite space: qubit 1 (x) cavity (x) qubit 2, cavity truncated at n_max
// photons.  Qubit basis {|g>, |e>}; S^z eigenvalues are -1/2 and +1/2.
// |q1, n, q2> sits at index q1*(n_max+1)*2 + n*2 + q2.
struct OperatorSet {
  int n_max = 0;
  int dim = 0;  // 2 * (n_max + 1) * 2
  Mat a, a_dag; // truncated ladder: a_dag |n_max> = 0
  std::array<Mat, 2> s_plus, s_minus, s_z;  // [0] acts on qubit 1, [1] on qubit 2
  Mat identity;
};

OperatorSet build_operator_set(int n_max);

int basis_index(int q1, int n, int q2, int n_max);

// Amplitudes on the single-excitation triple {|100>, |010>, |001>}:
// alpha multiplies |100> (qubit 1 excited), beta |010> (one photon),
// gamma |001> (qubit 2 excited).
struct SubspaceState {
  Complex alpha{}, beta{}, gamma{};
};

Vec embed_single_excitation(const SubspaceState& s, int n_max);

struct ExtractResult {
  SubspaceState state;
  double leak;  // probability weight outside the triple
};
ExtractResult extract_single_excitation(const Vec& psi, int n_max);

// Trace over the cavity.  Output is the 4x4 two-qubit state in the basis
// {|00>, |01>, |10>, |11>}, index 2*q1 + q2.
Mat partial_trace_cavity(const Mat& rho_full, int n_max);

}  // namespace cavent::hilbert

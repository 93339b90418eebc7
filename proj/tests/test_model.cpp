#include <doctest.h>

#include <cmath>
#include <random>

#include "cavent/model.hpp"
#include "cavent/numerics.hpp"

using namespace cavent;
using namespace cavent::model;
using hilbert::basis_index;

namespace {

// single-excitation block of an n_max=1 operator, ordered {|100>, |010>, |001>}
Mat triple_block(const Mat& h) {
  int idx[3] = {basis_index(1, 0, 0, 1), basis_index(0, 1, 0, 1), basis_index(0, 0, 1, 1)};
  Mat b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = h(idx[i], idx[j]);
  return b;
}

// total excitation count, written down directly
Mat number_operator(int n_max) {
  int dim = 2 * (n_max + 1) * 2;
  Mat n = Mat::Zero(dim, dim);
  for (int q1 : {0, 1})
    for (int nc = 0; nc <= n_max; ++nc)
      for (int q2 : {0, 1}) {
        int i = basis_index(q1, nc, q2, n_max);
        n(i, i) = double(q1 + nc + q2);
      }
  return n;
}

Vec norm3(Complex a, Complex b, Complex c) {
  Vec v(3);
  v << a, b, c;
  v /= v.norm();
  return v;
}

Vec as_vec(const hilbert::SubspaceState& s) { return norm3(s.alpha, s.beta, s.gamma); }

}  // namespace

TEST_CASE("full hamiltonian: single-excitation block entries") {
  ModelParams p;  // omega=50, eps=10, g1=g2=1, n_max=1
  Mat h = hamiltonian_full(p);
  REQUIRE(h.rows() == 8);
  CHECK(numerics::is_hermitian(h));
  Mat b = triple_block(h);
  CHECK(b(0, 0) == Complex(0, 0));
  CHECK(b(1, 1) == Complex(40, 0));  // omega - eps
  CHECK(b(2, 2) == Complex(0, 0));
  CHECK(b(0, 1) == Complex(1, 0));
  CHECK(b(1, 2) == Complex(1, 0));
  CHECK(b(0, 2) == Complex(0, 0));  // qubits couple only through the cavity
  // ground state carries the zero-point qubit energy
  CHECK(h(0, 0) == Complex(-10, 0));
}

TEST_CASE("full hamiltonian conserves the excitation number exactly") {
  ModelParams p;
  p.g2 = 0.37;
  p.omega = 47.0;
  p.n_max = 3;
  Mat h = hamiltonian_full(p);
  Mat n = number_operator(3);
  CHECK((h * n - n * h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("g2 = 0 decouples qubit 2") {
  ModelParams p;
  p.g2 = 0.0;
  Mat b = triple_block(hamiltonian_full(p));
  CHECK(b(1, 2) == Complex(0, 0));
  CHECK(b(0, 1) == Complex(1, 0));
}

TEST_CASE("driven hamiltonian: no drive and lab frame reduces to the exchange form") {
  ModelParams p;
  p.d = 0.0;
  p.Omega_drive = 0.0;
  CHECK(hamiltonian_driven(p) == hamiltonian_full(p));
}

TEST_CASE("driven hamiltonian: resonant frame zeroes the excitation-conserving diagonal") {
  ModelParams p;
  p.omega = 10.0;  // resonant with the qubits
  p.eps1 = p.eps2 = 10.0;
  p.Omega_drive = 10.0;
  p.d = 0.05;
  Mat h = hamiltonian_driven(p);
  CHECK(h(basis_index(1, 0, 0, 1), basis_index(1, 0, 0, 1)) == Complex(0, 0));
  CHECK(h(basis_index(0, 1, 0, 1), basis_index(0, 1, 0, 1)) == Complex(0, 0));
  CHECK(h(basis_index(0, 0, 1, 1), basis_index(0, 0, 1, 1)) == Complex(0, 0));
  // drive connects |000> and |001> with amplitude d
  CHECK(h(basis_index(0, 0, 1, 1), basis_index(0, 0, 0, 1)) == Complex(0.05, 0));
  CHECK(numerics::is_hermitian(h));
}

TEST_CASE("effective hamiltonian: flip-flop and level-shift entries") {
  ModelParams p;  // delta = eps - omega = -40
  p.g2 = 0.5;
  Mat h = hamiltonian_effective(p);
  CHECK(numerics::is_hermitian(h));
  // cavity-mediated flip-flop carries g1*g2/delta in total
  CHECK(std::abs(h(basis_index(1, 0, 0, 1), basis_index(0, 0, 1, 1)) -
                 Complex(1.0 * 0.5 / -40.0, 0)) < 1e-16);
  // |001>: zero-point eps part cancels, shifts leave (g2^2 - g1^2)/(2 delta)
  Complex e001 = h(basis_index(0, 0, 1, 1), basis_index(0, 0, 1, 1));
  CHECK(std::abs(e001 - Complex((0.25 - 1.0) / (2.0 * -40.0), 0)) < 1e-16);
}

TEST_CASE("effective hamiltonian commutes with the photon number exactly") {
  ModelParams p;
  p.g2 = 0.7;
  p.n_max = 2;
  Mat h = hamiltonian_effective(p);
  auto ops = hilbert::build_operator_set(2);
  Mat n = Mat(ops.a_dag * ops.a);
  CHECK((h * n - n * h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("effective qubit hamiltonian agrees with the vacuum sector of the full form") {
  ModelParams p;
  p.g2 = 0.5;
  Mat hq = hamiltonian_effective_qubits(p);
  REQUIRE(hq.rows() == 4);
  CHECK(std::abs(hq(1, 2) - Complex(0.5 / -40.0, 0)) < 1e-16);
  // diagonal of |01> matches the |001> entry of the full-space form
  // (same algebra, different evaluation order)
  Mat h = hamiltonian_effective(p);
  CHECK(std::abs(hq(1, 1) - h(basis_index(0, 0, 1, 1), basis_index(0, 0, 1, 1))) < 1e-15);
  CHECK(std::abs(hq(2, 2) - h(basis_index(1, 0, 0, 1), basis_index(1, 0, 0, 1))) < 1e-15);
  CHECK(numerics::is_hermitian(hq));
}

TEST_CASE("effective guards: detuning and epsilon equality") {
  ModelParams p;
  p.omega = 10.0;  // delta = 0
  CHECK_THROWS_AS(hamiltonian_effective(p), ZeroDetuning);
  ModelParams q;
  q.eps2 = 11.0;
  CHECK_THROWS_AS(hamiltonian_effective(q), UnequalEpsilons);
  CHECK_THROWS_AS(hamiltonian_effective_qubits(q), UnequalEpsilons);
}

TEST_CASE("analytic eigensystem: frozen values for the reference parameters") {
  ModelParams p;  // omega=50, eps=10, g1=g2=1
  auto es = analytic_eigensystem(p);
  CHECK(es.e1 == 0.0);
  CHECK(std::abs(es.e2 - (40.0 - std::sqrt(1608.0)) / 2.0) < 1e-14);
  CHECK(std::abs(es.e2 - (-0.04993765576342213)) < 1e-14);
  CHECK(std::abs(es.e3 - (40.0 + std::sqrt(1608.0)) / 2.0) < 1e-12);
  // dark state: no photon component, equal-weight qubits for g1 = g2
  CHECK(std::abs(es.v1.beta) == 0.0);
  CHECK(std::abs(std::abs(es.v1.alpha) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("analytic eigensystem: vectors are mutually orthogonal and normalized") {
  ModelParams p;
  p.g2 = 0.63;
  p.omega = 31.0;
  p.eps1 = p.eps2 = 12.5;
  auto es = analytic_eigensystem(p);
  Vec v1 = as_vec(es.v1), v2 = as_vec(es.v2), v3 = as_vec(es.v3);
  CHECK(std::abs(v1.dot(v2)) < 1e-14);
  CHECK(std::abs(v1.dot(v3)) < 1e-14);
  CHECK(std::abs(v2.dot(v3)) < 1e-14);
}

TEST_CASE("analytic eigensystem matches the numeric block over random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ur(0.1, 1.0), ug(0.5, 2.0), ud(5.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams p;
    p.g1 = ug(rng);
    p.g2 = p.g1 * ur(rng);
    p.eps1 = p.eps2 = 10.0;
    double gap = ud(rng) * std::max(p.g1, p.g2);
    p.omega = p.eps1 + (trial % 2 ? gap : -gap);
    auto es = analytic_eigensystem(p);
    Mat b = triple_block(hamiltonian_full(p));
    auto num = numerics::hermitian_eig(b);
    double scale = std::abs(num.values(0)) + std::abs(num.values(2)) + 1.0;
    // analytic labels: e1 = 0 (middle), e2 lowest, e3 highest
    CHECK(std::abs(num.values(0) - es.e2) < 1e-10 * scale);
    CHECK(std::abs(num.values(1) - es.e1) < 1e-10 * scale);
    CHECK(std::abs(num.values(2) - es.e3) < 1e-10 * scale);
    Vec a1 = as_vec(es.v1), a2 = as_vec(es.v2), a3 = as_vec(es.v3);
    CHECK(std::abs(std::abs(num.vectors.col(1).dot(a1)) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(num.vectors.col(0).dot(a2)) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(num.vectors.col(2).dot(a3)) - 1.0) < 1e-10);
  }
}

TEST_CASE("analytic eigensystem guards") {
  ModelParams p;
  p.eps2 = 9.0;
  CHECK_THROWS_AS(analytic_eigensystem(p), UnequalEpsilons);
  ModelParams q;
  q.g2 = 0.0;
  CHECK_THROWS_AS(analytic_eigensystem(q), DegenerateRatio);
}

TEST_CASE("params validation") {
  ModelParams p;
  p.g1 = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParams);
  ModelParams q;
  q.n_max = 0;
  CHECK_THROWS_AS(q.validate(), InvalidParams);
  ModelParams r;
  r.kappa = -1.0;
  CHECK_THROWS_AS(r.validate(), InvalidParams);
  ModelParams ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("dispersive regime: exchange and effective dynamics agree to 1% fidelity") {
  for (double r : {1.0, 0.5}) {
    ModelParams p;
    p.g2 = r;
    // delta = -40, one flip-flop period
    double g2sum = p.g1 * p.g1 + p.g2 * p.g2;
    double period = 2.0 * pi * 40.0 / g2sum;
    Vec psi0 = hilbert::embed_single_excitation({0.0, 0.0, 1.0}, 1);
    auto full = numerics::hermitian_eig(hamiltonian_full(p));
    auto eff = numerics::hermitian_eig(hamiltonian_effective(p));
    Vec cf = full.vectors.adjoint() * psi0;
    Vec ce = eff.vectors.adjoint() * psi0;
    for (int k = 0; k <= 50; ++k) {
      double t = period * k / 50.0;
      Vec pf = full.vectors * Vec((Complex(0, -1) * t * full.values.array().cast<Complex>()).exp() * cf.array());
      Vec pe = eff.vectors * Vec((Complex(0, -1) * t * eff.values.array().cast<Complex>()).exp() * ce.array());
      double fid = std::norm(pf.dot(pe));
      CHECK(fid >= 0.99);
    }
  }
}

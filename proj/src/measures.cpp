#include "cavent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavent/hilbert.hpp"
#include "cavent/numerics.hpp"

namespace cavent::measures {

namespace {

using Mat4 = Eigen::Matrix4cd;

// smallest eigenvalue of the hermitian 2x2 [[a, b], [conj(b), d]]
double min_eig2(double a, double d, Complex b) {
  double mid = 0.5 * (a + d);
  double rad = std::hypot(0.5 * (a - d), std::abs(b));
  return mid - rad;
}

struct Checked4 {
  Mat4 r;
  bool x_form;
};

Checked4 check_density(const Mat& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw InvalidDensityMatrix("two-qubit state must be 4x4");
  Checked4 out;
  out.r = rho;
  const Mat4& r = out.r;
  double herm = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) herm = std::max(herm, std::abs(r(i, j) - std::conj(r(j, i))));
  if (herm > 1e-10) throw InvalidDensityMatrix("state is not hermitian");
  if (std::abs(r.trace() - Complex(1, 0)) > 1e-8)
    throw InvalidDensityMatrix("state trace is not 1");

  double off_x = std::max(std::max(std::abs(r(0, 1)), std::abs(r(0, 2))),
                          std::max(std::abs(r(1, 3)), std::abs(r(2, 3))));
  out.x_form = off_x < 1e-15;
  if (out.x_form) {
    // the spectrum splits into the {00,11} and {01,10} blocks
    double lo = std::min(min_eig2(r(0, 0).real(), r(3, 3).real(), r(0, 3)),
                         min_eig2(r(1, 1).real(), r(2, 2).real(), r(1, 2)));
    if (lo < -1e-8) throw InvalidDensityMatrix("state has a negative eigenvalue");
  } else {
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (r + r.adjoint()),
                                           Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-8)
      throw InvalidDensityMatrix("state has a negative eigenvalue");
  }
  return out;
}

double concurrence_x(const Mat4& r) {
  double d00 = std::max(r(0, 0).real(), 0.0);
  double d11 = std::max(r(1, 1).real(), 0.0);
  double d22 = std::max(r(2, 2).real(), 0.0);
  double d33 = std::max(r(3, 3).real(), 0.0);
  double inner = std::abs(r(1, 2)) - std::sqrt(d00 * d33);
  double outer = std::abs(r(0, 3)) - std::sqrt(d11 * d22);
  return 2.0 * std::max({0.0, inner, outer});
}

double concurrence_general(const Mat4& r) {
  Mat4 yy = Mat4::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  Mat4 m = r * (yy * r.conjugate() * yy);
  Eigen::ComplexEigenSolver<Mat4> es(m, false);
  std::array<double, 4> lam{};
  for (int k = 0; k < 4; ++k) {
    double e = es.eigenvalues()(k).real();
    if (e < -1e-10) throw InvalidDensityMatrix("spin-flipped product has a negative eigenvalue");
    // rank deficiency leaves +-1e-16 noise that sqrt would lift to 1e-8
    lam[k] = (std::abs(e) < 1e-13) ? 0.0 : std::sqrt(std::max(e, 0.0));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void check_series(const TimeSeries& s) {
  if (s.times.empty() || s.values.empty()) throw EmptySeries("series has no samples");
  if (s.times.size() != s.values.size())
    throw Error("series times and values differ in length");
}

}  // namespace

double concurrence(const Mat& rho2q) {
  auto c = check_density(rho2q);
  return c.x_form ? concurrence_x(c.r) : concurrence_general(c.r);
}

double coherence_offdiag(const Mat& rho2q) {
  auto c = check_density(rho2q);
  return std::abs(c.r(1, 2));
}

namespace {

double sz_weight_full(Eigen::Index idx, Eigen::Index dim, int which) {
  // |q1, n, q2>: q2 = idx & 1, q1 = idx / (dim/2)
  int q = which == 1 ? int(idx / (dim / 2)) : int(idx & 1);
  return q ? 0.5 : -0.5;
}

void check_which(int which) {
  if (which != 1 && which != 2) throw Error("expectation_sz: which must be 1 or 2");
}

}  // namespace

double expectation_sz(const Vec& psi, int which) {
  check_which(which);
  if (psi.size() < 8 || psi.size() % 4 != 0)
    throw hilbert::DimensionMismatch("expectation_sz: not a composite-space state");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    acc += sz_weight_full(i, psi.size(), which) * std::norm(psi(i));
  return acc;
}

double expectation_sz(const Mat& rho, int which) {
  check_which(which);
  if (rho.rows() != rho.cols())
    throw hilbert::DimensionMismatch("expectation_sz: state must be square");
  if (rho.rows() == 4) {
    // reduced two-qubit state, index 2*q1 + q2
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      int q = which == 1 ? i >> 1 : i & 1;
      acc += (q ? 0.5 : -0.5) * rho(i, i).real();
    }
    return acc;
  }
  if (rho.rows() < 8 || rho.rows() % 4 != 0)
    throw hilbert::DimensionMismatch("expectation_sz: not a composite-space state");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    acc += sz_weight_full(i, rho.rows(), which) * rho(i, i).real();
  return acc;
}

std::array<double, 3> eigenstate_overlaps(const Vec& psi, const model::EigenSystem& es) {
  if (psi.size() % 4 != 0 || psi.size() < 8)
    throw hilbert::DimensionMismatch("eigenstate_overlaps: not a composite-space state");
  int n_max = int(psi.size() / 4) - 1;
  auto ex = hilbert::extract_single_excitation(psi, n_max);
  if (ex.leak > 1e-8)
    throw SubspaceLeak("state leaks outside the single-excitation triple");
  auto overlap = [&ex](const hilbert::SubspaceState& v) {
    Complex ip = std::conj(v.alpha) * ex.state.alpha + std::conj(v.beta) * ex.state.beta +
                 std::conj(v.gamma) * ex.state.gamma;
    return std::norm(ip);
  };
  return {overlap(es.v1), overlap(es.v2), overlap(es.v3)};
}

Peak peak_value(const TimeSeries& series) {
  check_series(series);
  size_t best = 0;
  for (size_t i = 1; i < series.values.size(); ++i)
    if (series.values[i] > series.values[best]) best = i;
  Peak p{series.values[best], series.times[best]};
  if (series.evaluator && best > 0 && best + 1 < series.times.size()) {
    double t = golden_max(series.evaluator, series.times[best - 1], series.times[best + 1]);
    double v = series.evaluator(t);
    if (v >= p.value) p = {v, t};
  }
  return p;
}

std::vector<double> mes_event_times(const TimeSeries& series, double tol) {
  check_series(series);
  const auto& ts = series.times;
  const auto& vs = series.values;
  const size_t n = ts.size();
  const double keep_thr = 1.0 - tol;
  const double cand_thr = 1.0 - 1.5 * tol;  // sampling can undershoot a true maximum
  const double dip_thr = 1.0 - 8.0 * tol;   // separates events, tolerates ripple

  struct Max {
    double t, v;
  };
  std::vector<Max> refined;
  for (size_t i = 0; i < n; ++i) {
    bool left_ok = i == 0 || vs[i] >= vs[i - 1];
    bool right_ok = i + 1 == n || vs[i] >= vs[i + 1];
    if (!(left_ok && right_ok) || vs[i] < cand_thr) continue;
    double t = ts[i], v = vs[i];
    if (series.evaluator) {
      double lo = i > 0 ? ts[i - 1] : ts[i];
      double hi = i + 1 < n ? ts[i + 1] : ts[i];
      if (hi > lo) {
        double tr = golden_max(series.evaluator, lo, hi);
        double vr = series.evaluator(tr);
        if (vr >= v) {
          t = tr;
          v = vr;
        }
      }
    }
    if (v >= keep_thr) refined.push_back({t, v});
  }
  std::sort(refined.begin(), refined.end(), [](const Max& a, const Max& b) { return a.t < b.t; });

  // group maxima into events: a dip below dip_thr between neighbours splits them
  std::vector<double> events;
  Max rep{0.0, -1.0};
  double group_end = 0.0;
  for (const Max& m : refined) {
    bool same_group = rep.v >= 0.0;
    if (same_group) {
      auto lo = std::upper_bound(ts.begin(), ts.end(), group_end);
      auto hi = std::lower_bound(ts.begin(), ts.end(), m.t);
      for (auto it = lo; it != hi; ++it) {
        if (vs[size_t(it - ts.begin())] < dip_thr) {
          same_group = false;
          break;
        }
      }
    }
    if (!same_group && rep.v >= 0.0) events.push_back(rep.t);
    if (!same_group || m.v > rep.v) rep = m;
    group_end = m.t;
  }
  if (rep.v >= 0.0) events.push_back(rep.t);
  return events;
}

double mes_lapse_numeric(const TimeSeries& series, double tol) {
  auto events = mes_event_times(series, tol);
  if (events.size() < 2) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < events.size(); ++i) gap = std::min(gap, events[i] - events[i - 1]);
  return gap;
}

}  // namespace cavent::measures

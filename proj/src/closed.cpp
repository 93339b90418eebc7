#include "cavent/closed.hpp"

#include <cmath>

#include "cavent/numerics.hpp"

namespace cavent::closed {

std::vector<Vec> propagate_spectral(const Mat& h, const Vec& psi0,
                                    const std::vector<double>& times) {
  if (h.rows() != psi0.size())
    throw hilbert::DimensionMismatch("propagate_spectral: state does not match operator");
  auto eig = numerics::hermitian_eig(h);
  Vec c = eig.vectors.adjoint() * psi0;
  std::vector<Vec> out;
  out.reserve(times.size());
  Vec phases(c.size());
  for (double t : times) {
    for (Eigen::Index k = 0; k < c.size(); ++k)
      phases(k) = std::exp(Complex(0, -eig.values(k) * t)) * c(k);
    out.push_back(eig.vectors * phases);
  }
  return out;
}

EffectiveEvolution effective_evolution(const ModelParams& p, double t) {
  p.validate();
  if (p.eps1 != p.eps2)
    throw model::UnequalEpsilons("effective evolution requires eps1 == eps2");
  const double delta = p.detuning();
  if (delta == 0.0) throw model::ZeroDetuning("effective evolution requires eps != omega");
  const double g2sum = p.g1 * p.g1 + p.g2 * p.g2;
  const Complex swing = std::exp(Complex(0, -g2sum * t / delta)) - 1.0;
  EffectiveEvolution e;
  e.t = t;
  e.amp01 = 1.0 + (p.g2 * p.g2 / g2sum) * swing;
  e.amp10 = (p.g1 * p.g2 / g2sum) * swing;
  return e;
}

double mes_threshold_ratio() { return std::sqrt(3.0 - 2.0 * std::sqrt(2.0)); }

double mes_times_uniform(const ModelParams& p, int n) {
  p.validate();
  if (p.g1 != p.g2)
    throw NonUniformCoupling("uniform maxima times require g1 == g2");
  if (p.eps1 != p.eps2)
    throw model::UnequalEpsilons("uniform maxima times require eps1 == eps2");
  const double delta = p.detuning();
  if (delta == 0.0) throw model::ZeroDetuning("uniform maxima times require eps != omega");
  if (n < 1) throw Error("mes_times_uniform: n must be >= 1");
  // maxima at Theta = pi/2 + k pi for equal couplings
  const double g2sum = p.g1 * p.g1 + p.g2 * p.g2;
  return (2.0 * n - 1.0) * 0.5 * pi * std::abs(delta) / g2sum;
}

MesAnalytics mes_lapse_analytic(const ModelParams& p) {
  p.validate();
  if (p.eps1 != p.eps2)
    throw model::UnequalEpsilons("lapse analytics require eps1 == eps2");
  const double delta = p.detuning();
  if (delta == 0.0) throw model::ZeroDetuning("lapse analytics require eps != omega");
  if (p.g2 == 0.0)
    throw model::DegenerateRatio("lapse analytics require a nonzero coupling ratio");

  const double g1s = p.g1 * p.g1, g2s = p.g2 * p.g2;
  const double g2sum = g1s + g2s;
  MesAnalytics m;
  m.ratio = p.ratio();
  m.cos_theta = (g1s - g2s) * (g1s - g2s) / (4.0 * g1s * g2s);
  // the exact threshold ratio lands on cos_theta == 1 only up to rounding
  m.threshold_ok = m.cos_theta <= 1.0 + 1e-12;
  m.theta = m.threshold_ok ? std::acos(std::min(m.cos_theta, 1.0)) : 0.0;
  m.period_Theta = 2.0 * pi * std::abs(delta) / g2sum;
  // maxima at Theta = pi -+ theta; their separation in time
  m.mes_lapse_P = m.threshold_ok ? 2.0 * m.theta * std::abs(delta) / g2sum : 0.0;
  return m;
}

}  // namespace cavent::closed

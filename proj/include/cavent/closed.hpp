#pragma once

#include <vector>

#include "cavent/model.hpp"

namespace cavent::closed {

using model::ModelParams;

struct NonUniformCoupling : Error {
  using Error::Error;
};

// Evolves psi0 under a time-independent Hermitian h by diagonalizing once and
// applying spectral phases.  Norm is preserved to machine precision at any t.
std::vector<Vec> propagate_spectral(const Mat& h, const Vec& psi0,
                                    const std::vector<double>& times);

// Second-order amplitudes for the start state |001>, cavity in vacuum:
//   amp01(t) multiplies |01>, amp10(t) multiplies |10>.
// |amp01|^2 + |amp10|^2 == 1 identically.
struct EffectiveEvolution {
  double t;
  Complex amp01, amp10;
};
EffectiveEvolution effective_evolution(const ModelParams& p, double t);

// Coupling ratio below which the exchanged state never reaches maximal
// entanglement: sqrt(3 - 2 sqrt 2).
double mes_threshold_ratio();

// Time of the n-th maximally entangled state for g1 == g2 (n >= 1).
double mes_times_uniform(const ModelParams& p, int n);

// Angle geometry of the entanglement maxima.  Phase variable
// Theta(t) = (g1^2+g2^2) t / |delta|; maxima sit at Theta = pi -+ theta with
// cos theta = (g1^2-g2^2)^2 / (4 g1^2 g2^2) when that value is <= 1.
// period_Theta is the t-period of one full Theta cycle; mes_lapse_P the time
// between the paired maxima (0 below threshold).
struct MesAnalytics {
  double ratio;
  double cos_theta;
  double theta;
  double period_Theta;
  double mes_lapse_P;
  bool threshold_ok;
};
MesAnalytics mes_lapse_analytic(const ModelParams& p);

}  // namespace cavent::closed

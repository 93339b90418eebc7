#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavent/model.hpp"

namespace cavent::measures {

struct InvalidDensityMatrix : Error {
  using Error::Error;
};
struct SubspaceLeak : Error {
  using Error::Error;
};
struct EmptySeries : Error {
  using Error::Error;
};

// Sampled scalar observable.  When `evaluator` is set it must return the same
// observable at arbitrary t; extrema found on the samples are then refined
// against it.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;
  std::function<double(double)> evaluator;
};

// Two-qubit entanglement of formation monotone, basis {|00>,|01>,|10>,|11>}.
// Validates hermiticity (1e-10), unit trace (1e-8) and positivity (-1e-8).
// X-patterned inputs take an algebraically exact closed-form branch.
double concurrence(const Mat& rho2q);

// |<01| rho |10>| with the same validation.
double coherence_offdiag(const Mat& rho2q);

// <S_which^z>, which is 1 or 2.  The vector overload takes a full-space pure
// state; the matrix overload takes either a full-space or a 4x4 reduced state.
double expectation_sz(const Vec& psi, int which);
double expectation_sz(const Mat& rho, int which);

// |<v_k|psi>|^2 on the single-excitation triple.  Raises SubspaceLeak when
// more than 1e-8 of the weight lies outside the triple.
std::array<double, 3> eigenstate_overlaps(const Vec& psi, const model::EigenSystem& es);

struct Peak {
  double value;
  double t;
};
// Global maximum of the series; interior maxima are refined by golden-section
// search on the evaluator (when present) to 1e-10 in t.
Peak peak_value(const TimeSeries& series);

// Times of near-unity maxima, merged into events: consecutive refined maxima
// above 1 - tol belong to one event unless the series dips below 1 - 8*tol
// between them.  Each event reports its highest maximum.
std::vector<double> mes_event_times(const TimeSeries& series, double tol);

// Minimal gap between consecutive events; 0 when fewer than two are found.
double mes_lapse_numeric(const TimeSeries& series, double tol);

}  // namespace cavent::measures

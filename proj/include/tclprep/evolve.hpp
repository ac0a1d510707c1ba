// evolve.hpp — Fixed-step master-equation integration and jolt diagnostics

#pragma once

#include <span>

#include "tclprep/scenario.hpp"

namespace tclprep::evolve {

using ops::Mat;

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;  // reduced system states at the stored times
  std::vector<double> p_excited;
  std::vector<double> coherence_re;  // entry (0,1) of the reduced state
  std::vector<double> coherence_im;
  std::vector<double> purity;  // full-state purity tr(rho^2)
  std::vector<double> gamma;   // instantaneous decay rate; nan when undefined
  double gamma_inf = std::numeric_limits<double>::quiet_NaN();
  double dt = 0.0;
  std::size_t steps = 0;
  double max_trace_residual = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_eigenvalue = 1.0;  // most negative eigenvalue excursion seen
  double step_halving_error = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

// classical 4th-order fixed-step integration of d rho / dt = L(t) rho
Trajectory integrate(const scenario::Scenario& s);

struct JoltMetrics {
  double peak_value = 0.0;
  double peak_time = 0.0;
  double settle_time = std::numeric_limits<double>::quiet_NaN();
  double cutoff_sensitivity = std::numeric_limits<double>::quiet_NaN();
};

// peak and settling diagnostics of a decay-rate series; the series must cover
// the jolt window [0, 50/cutoff] at resolution 1/(20 cutoff) or better
JoltMetrics jolt_metrics(std::span<const double> times, std::span<const double> gamma,
                         double gamma_inf, double cutoff);

// relative peak change between a base run and a doubled-cutoff run
double relative_peak_change(const JoltMetrics& base, const JoltMetrics& doubled);

}  // namespace tclprep::evolve

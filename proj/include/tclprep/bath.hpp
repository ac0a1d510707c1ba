// bath.hpp — Spectral densities, thermal correlation functions and their transforms

#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "tclprep/errors.hpp"

namespace tclprep::bath {

using cplx = std::complex<double>;

inline constexpr double beta_infinite = std::numeric_limits<double>::infinity();

struct SpectralDensity {
  enum class Family { OhmicExpCutoff };

  Family family = Family::OhmicExpCutoff;
  double eta = 0.05;     // dimensionless coupling strength
  double cutoff = 100.0; // UV cutoff frequency

  double operator()(double omega) const;  // J(omega) for omega >= 0
  void validate() const;
};

struct BathSpec {
  SpectralDensity density;
  double beta = beta_infinite;  // inverse temperature; +inf encodes zero temperature

  bool zero_temperature() const { return std::isinf(beta); }
  void validate() const;
};

// mean thermal occupation 1/(exp(x)-1); 0 at zero temperature (x = +inf)
double bose_occupation(double x);

enum class Strategy {
  Auto,        // closed forms where available, quadrature otherwise
  ClosedForm,  // require the closed form; error if unavailable
  Quadrature,  // force the independent quadrature route
};

struct KmsReport {
  std::vector<double> omegas;
  std::vector<double> violations;  // relative violation per grid point
  double max_violation = 0.0;
  double worst_omega = 0.0;
  bool pass = false;
};

// Thermal correlation function of the environment coupling operator and its
// frequency-domain transforms. Stationary: alpha(t, tau) = alpha(t - tau).
class Correlation {
 public:
  explicit Correlation(BathSpec spec, Strategy strategy = Strategy::Auto);

  const BathSpec& spec() const { return spec_; }
  Strategy strategy() const { return strategy_; }

  // alpha(t); Hermitian in time, alpha(-t) = conj(alpha(t))
  cplx alpha(double t) const;

  // full Fourier transform  integral dt alpha(t) exp(-i w t); real and >= 0
  // for thermal baths (detailed balance puts the zero-temperature weight on
  // the emission side w < 0)
  double alpha_tilde(double omega) const;

  // one-sided transform  integral_0^inf dtau alpha(tau) exp(-i w tau)
  cplx alpha_half_fourier(double omega) const;

  // max relative violation of alpha_tilde(w) = conj(alpha_tilde)(-w) exp(-beta w)
  // over the grid; passes below 1e-6.  At zero temperature reports how well the
  // suppressed side alpha_tilde(|w|) vanishes.
  KmsReport kms_check(std::span<const double> omega_grid) const;

 private:
  BathSpec spec_;
  Strategy strategy_;

  cplx alpha_closed(double t) const;
  cplx alpha_quadrature(double t) const;
  double thermal_correction(double t) const;
  cplx half_fourier_closed(double omega) const;
  cplx half_fourier_principal_value(double omega) const;
  cplx half_fourier_damped(double omega) const;
};

}  // namespace tclprep::bath

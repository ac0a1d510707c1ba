#include "tclprep/bath.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tclprep::bath {

namespace {

constexpr double pi = 3.14159265358979323846;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// adaptive Gauss-Kronrod with an absolute error check against a caller scale
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double abs_scale, const char* what) {
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double val = GK::integrate(f, a, b, 14, 1e-11, &err, &l1);
  if (!(err <= 1e-8 * std::max(std::abs(val), abs_scale)))
    throw NumericalError(std::string(what) + ": quadrature failed to converge (value " +
                         std::to_string(val) + ", error estimate " + std::to_string(err) + ")");
  return val;
}

// integral over [0, w_hi] of f(w) * {cos, sin}(w t); splits at the zeros of the
// trigonometric factor once the range spans many oscillations
double oscillatory_integral(const std::function<double(double)>& f, bool use_sin,
                            double t, double w_hi, double abs_scale, const char* what) {
  const auto g = [&](double w) {
    return f(w) * (use_sin ? std::sin(w * t) : std::cos(w * t));
  };
  if (w_hi * t <= 30.0) return integrate_checked(g, 0.0, w_hi, abs_scale, what);
  using PanelGK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double step = pi / t;
  double acc = 0.0, err_total = 0.0;
  double a = 0.0;
  while (a < w_hi) {
    const double b = std::min(a + step, w_hi);
    double err = 0.0;
    acc += PanelGK::integrate(g, a, b, 10, 1e-13, &err);
    err_total += err;
    a = b;
  }
  if (!(err_total <= 1e-9 * std::max(std::abs(acc), abs_scale)))
    throw NumericalError(std::string(what) + ": oscillatory quadrature failed to converge");
  return acc;
}

// exp(x) E1(x) for x > 0, overflow-free
double expx_e1(double x) {
  if (x <= 50.0) return std::exp(x) * (-std::expint(-x));
  double sum = 0.0, term = 1.0 / x;
  for (int k = 0; k < 26; ++k) {
    sum += (k % 2 == 0 ? term : -term);
    term *= (k + 1) / x;
  }
  return sum;
}

// exp(-x) Ei(x) for x > 0, overflow-free
double emx_ei(double x) {
  if (x <= 50.0) return std::exp(-x) * std::expint(x);
  double sum = 0.0, term = 1.0 / x;
  for (int k = 0; k < 26; ++k) {
    sum += term;
    term *= (k + 1) / x;
  }
  return sum;
}

// PV integral of g(nu)/(nu - pole) over [lo, hi], splitting at the listed kinks
double pv_cauchy(const std::function<double(double)>& g, double pole, double lo, double hi,
                 std::vector<double> kinks, double abs_scale, const char* what) {
  const auto plain = [&](double a, double b) -> double {
    if (a >= b) return 0.0;
    return integrate_checked([&](double nu) { return g(nu) / (nu - pole); }, a, b,
                             abs_scale, what);
  };
  kinks.push_back(lo);
  kinks.push_back(hi);
  std::sort(kinks.begin(), kinks.end());

  if (pole <= lo || pole >= hi) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
      const double a = std::max(kinks[i], lo), b = std::min(kinks[i + 1], hi);
      acc += plain(a, b);
    }
    return acc;
  }

  double ww = 0.5 * std::min(hi - pole, pole - lo);
  for (double k : kinks)
    if (k > pole + 1e-300 || k < pole - 1e-300) {
      const double d = std::abs(k - pole);
      if (d > 0 && d < ww) ww = 0.5 * d;  // keep kinks out of the singular window
    }
  const double gw = g(pole);
  const auto sing = [&](double nu) { return (g(nu) - gw) / (nu - pole); };
  double acc = 0.0;
  acc += integrate_checked(sing, pole - ww, pole, abs_scale, what);
  acc += integrate_checked(sing, pole, pole + ww, abs_scale, what);
  double acc_reg = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    double a = kinks[i], b = kinks[i + 1];
    // excise the singular window
    if (b <= pole - ww || a >= pole + ww) {
      acc_reg += plain(a, b);
    } else {
      acc_reg += plain(a, std::min(b, pole - ww));
      acc_reg += plain(std::max(a, pole + ww), b);
    }
  }
  return acc + acc_reg;
}

}  // namespace

double SpectralDensity::operator()(double omega) const {
  if (omega < 0) throw std::domain_error("SpectralDensity: omega < 0");
  switch (family) {
    case Family::OhmicExpCutoff:
      return eta * omega * std::exp(-omega / cutoff);
  }
  throw std::logic_error("SpectralDensity: unknown family");
}

void SpectralDensity::validate() const {
  if (!(eta >= 0.0)) throw std::invalid_argument("SpectralDensity: eta must be >= 0");
  if (!(cutoff > 0.0)) throw std::invalid_argument("SpectralDensity: cutoff must be > 0");
}

void BathSpec::validate() const {
  density.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("BathSpec: beta must be positive or +inf");
}

double bose_occupation(double x) {
  if (std::isinf(x)) return 0.0;
  if (!(x > 0.0)) throw std::domain_error("bose_occupation: x must be > 0");
  return 1.0 / std::expm1(x);
}

Correlation::Correlation(BathSpec spec, Strategy strategy)
    : spec_(std::move(spec)), strategy_(strategy) {
  spec_.validate();
}

cplx Correlation::alpha_closed(double t) const {
  const double eta = spec_.density.eta, lam = spec_.density.cutoff;
  const cplx d(1.0, lam * t);
  return eta * lam * lam / (d * d);
}

double Correlation::thermal_correction(double t) const {
  // 2 integral_0^inf J(w) nbar(beta w) cos(w t) dw; support shrinks with temperature
  const double beta = spec_.beta, lam = spec_.density.cutoff;
  const double w_hi = 45.0 / (beta + 1.0 / lam);
  const double scale = 2.0 * spec_.density.eta / (beta * beta);
  const auto f = [&](double w) { return 2.0 * spec_.density(w) * bose_occupation(beta * w); };
  return oscillatory_integral(f, false, t, w_hi, std::max(scale, 1e-300),
                              "Correlation::alpha thermal correction");
}

cplx Correlation::alpha_quadrature(double t) const {
  const double eta = spec_.density.eta, lam = spec_.density.cutoff;
  const double w_hi = 40.0 * lam;
  const double envelope = eta * lam * lam / (1.0 + lam * lam * t * t);
  std::function<double(double)> f_re;
  if (spec_.zero_temperature()) {
    f_re = [this](double w) { return spec_.density(w); };
  } else {
    const double beta = spec_.beta;
    f_re = [this, beta](double w) {
      // J(w) coth(beta w / 2); series for the removable point at w -> 0
      const double x = beta * w;
      if (x < 1e-3) {
        const double x2 = x * x;
        return spec_.density.eta * std::exp(-w / spec_.density.cutoff) *
               (2.0 / beta) * (1.0 + x2 / 12.0 - x2 * x2 / 720.0);
      }
      return spec_.density(w) / std::tanh(0.5 * x);
    };
  }
  const double scale = std::max(envelope, 1e-300);
  const double re = oscillatory_integral(f_re, false, t, w_hi, scale, "Correlation::alpha re");
  const double im = -oscillatory_integral([this](double w) { return spec_.density(w); },
                                          true, t, w_hi, scale, "Correlation::alpha im");
  return {re, im};
}

cplx Correlation::alpha(double t) const {
  if (!std::isfinite(t)) throw std::domain_error("Correlation::alpha: t must be finite");
  if (t < 0) return std::conj(alpha(-t));
  switch (strategy_) {
    case Strategy::Quadrature:
      return alpha_quadrature(t);
    case Strategy::ClosedForm:
      if (!spec_.zero_temperature())
        throw std::invalid_argument("Correlation: no closed form at finite temperature");
      return alpha_closed(t);
    case Strategy::Auto:
      break;
  }
  if (spec_.zero_temperature()) return alpha_closed(t);
  return alpha_closed(t) + cplx(thermal_correction(t), 0.0);
}

double Correlation::alpha_tilde(double omega) const {
  const double beta = spec_.beta;
  if (omega == 0.0) {
    if (spec_.zero_temperature()) return 0.0;
    return 2.0 * pi * spec_.density.eta / beta;  // ohmic slope J'(0) = eta
  }
  const double a = std::abs(omega);
  const double occ = bose_occupation(std::isinf(beta) ? beta : beta * a);
  return omega > 0 ? 2.0 * pi * spec_.density(a) * occ
                   : 2.0 * pi * spec_.density(a) * (occ + 1.0);
}

cplx Correlation::half_fourier_closed(double omega) const {
  const double eta = spec_.density.eta, lam = spec_.density.cutoff;
  if (omega == 0.0) return {0.0, -eta * lam};
  if (omega > 0) {
    const double x = omega / lam;
    return {0.0, -eta * (lam - omega * expx_e1(x))};
  }
  const double a = -omega, x = a / lam;
  return {pi * spec_.density(a), -eta * (lam - a * emx_ei(x))};
}

cplx Correlation::half_fourier_principal_value(double omega) const {
  const double beta = spec_.beta, lam = spec_.density.cutoff;
  const double lo = -45.0 * lam;
  const double hi = spec_.zero_temperature() ? 0.0 : 45.0 / (beta + 1.0 / lam);
  const double scale =
      2.0 * pi * spec_.density.eta * std::max(lam, std::isinf(beta) ? 0.0 : 1.0 / beta);
  const auto g = [this](double nu) { return alpha_tilde(nu); };
  const double pv =
      pv_cauchy(g, omega, lo, hi, {0.0}, scale, "Correlation::alpha_half_fourier PV");
  return cplx(0.5 * alpha_tilde(omega), pv / (2.0 * pi));
}

cplx Correlation::half_fourier_damped(double omega) const {
  const double lam = spec_.density.cutoff;
  const auto alpha_val = [this](double tau) -> cplx {
    if (spec_.zero_temperature()) return alpha_closed(tau);
    return alpha_closed(tau) + cplx(thermal_correction(tau), 0.0);
  };
  const auto damped = [&](double eps) -> cplx {
    const double t_end = 45.0 / eps;
    const double osc = std::max(std::abs(omega), eps);
    const double step = std::min(pi / osc, t_end / 32.0);
    double re = 0.0, im = 0.0, err_total = 0.0;
    double a = 0.0;
    while (a < t_end) {
      const double b = std::min(a + std::max(step, 1e-3 / lam), t_end);
      double e1 = 0.0, e2 = 0.0;
      re += GK::integrate(
          [&](double tau) {
            const cplx v = alpha_val(tau) * std::exp(cplx(-eps * tau, -omega * tau));
            return v.real();
          },
          a, b, 10, 1e-12, &e1);
      im += GK::integrate(
          [&](double tau) {
            const cplx v = alpha_val(tau) * std::exp(cplx(-eps * tau, -omega * tau));
            return v.imag();
          },
          a, b, 10, 1e-12, &e2);
      err_total += e1 + e2;
      a = b;
    }
    const double scale = spec_.density.eta * lam;
    if (!(err_total <= 1e-8 * scale))
      throw NumericalError("Correlation::alpha_half_fourier: damped quadrature failed");
    return {re, im};
  };
  const double eps0 = std::max(std::abs(omega) / 8.0, lam / 500.0);
  const cplx f1 = damped(eps0);
  const cplx f2 = damped(eps0 / 2.0);
  const cplx f3 = damped(eps0 / 4.0);
  return (f1 - 6.0 * f2 + 8.0 * f3) / 3.0;  // extrapolation to eps -> 0
}

cplx Correlation::alpha_half_fourier(double omega) const {
  switch (strategy_) {
    case Strategy::Quadrature:
      return half_fourier_damped(omega);
    case Strategy::ClosedForm:
      if (!spec_.zero_temperature())
        throw std::invalid_argument("Correlation: no closed form at finite temperature");
      return half_fourier_closed(omega);
    case Strategy::Auto:
      break;
  }
  if (spec_.zero_temperature()) return half_fourier_closed(omega);
  return half_fourier_principal_value(omega);
}

KmsReport Correlation::kms_check(std::span<const double> omega_grid) const {
  KmsReport report;
  const double beta = spec_.beta;
  for (double w : omega_grid) {
    double violation = 0.0;
    if (spec_.zero_temperature()) {
      // detailed balance degenerates: the absorption side must vanish
      const double a = std::abs(w);
      const double suppressed = alpha_tilde(a);
      const double emission = alpha_tilde(-a);
      violation = a == 0.0 ? 0.0 : std::abs(suppressed) / std::max(emission, 1e-300);
    } else {
      const double lhs = alpha_tilde(w);
      const double rhs = alpha_tilde(-w) * std::exp(-beta * w);
      const double denom = std::max(std::abs(lhs), std::abs(rhs));
      violation = denom > 0 ? std::abs(lhs - rhs) / denom : 0.0;
    }
    report.omegas.push_back(w);
    report.violations.push_back(violation);
    if (violation >= report.max_violation) {
      report.max_violation = violation;
      report.worst_omega = w;
    }
  }
  report.pass = report.max_violation < 1e-6;
  return report;
}

}  // namespace tclprep::bath

// oracles.hpp — Test-only reference computations, independent of the library paths

#pragma once

#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "tclprep/operators.hpp"

namespace oracles {

using tclprep::ops::cplx;
using tclprep::ops::Mat;
using tclprep::ops::Vec;

// dense matrix exponential (Pade, via Eigen)
inline Mat expm(const Mat& a) { return a.exp(); }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Mat random_matrix(std::mt19937_64& gen, int d, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(dist(gen), dist(gen));
  return m;
}

inline Mat random_hermitian(std::mt19937_64& gen, int d, double scale = 1.0) {
  const Mat m = random_matrix(gen, d, scale);
  return 0.5 * (m + m.adjoint());
}

inline Mat random_density(std::mt19937_64& gen, int d) {
  const Mat m = random_matrix(gen, d);
  Mat rho = m * m.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline Vec random_state(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(dist(gen), dist(gen));
  return v / v.norm();
}

// complex trigamma by recurrence into the asymptotic regime
inline cplx trigamma(cplx z) {
  cplx acc = 0.0;
  while (z.real() < 20.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  static const double bern[] = {1.0 / 6.0,   -1.0 / 30.0,    1.0 / 42.0, -1.0 / 30.0,
                                5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0};
  const cplx iz = 1.0 / z, iz2 = iz * iz;
  cplx r = iz + 0.5 * iz2;
  cplx p = iz * iz2;
  for (double b : bern) {
    r += b * p;
    p *= iz2;
  }
  return acc + r;
}

// finite-temperature ohmic correlation function via the Matsubara sum
inline cplx alpha_matsubara(double t, double eta, double cutoff, double beta) {
  const cplx zp = (cplx(1.0 / cutoff, t)) / beta;
  const cplx zm = (cplx(1.0 / cutoff, -t)) / beta;
  const cplx ym = cplx(1.0 / cutoff, -t);
  return (eta / (beta * beta)) * (trigamma(zp) + trigamma(zm)) - eta / (ym * ym);
}

// zero-temperature ohmic correlation function (closed form)
inline cplx alpha_zero_t(double t, double eta, double cutoff) {
  const cplx d(1.0, cutoff * t);
  return eta * cutoff * cutoff / (d * d);
}

// plain Simpson on a complex integrand
template <typename F>
inline cplx simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx acc = 0.0;
  cplx left = f(a);
  for (int i = 0; i < n; ++i) {
    const double x = a + i * h;
    const cplx mid = f(x + 0.5 * h);
    const cplx right = f(x + h);
    acc += (h / 6.0) * (left + 4.0 * mid + right);
    left = right;
  }
  return acc;
}

// damped one-sided Fourier transform of the zero-temperature closed form with
// extrapolation of the damping to zero; the stated oracle for a_hat at w != 0.
// The horizon is fixed (so every damping moment is finite and the Richardson
// step is clean) and long enough that the undamped tail is negligible.
inline cplx half_fourier_damped_oracle(double omega, double eta, double cutoff) {
  const double t_end = 3000.0 / std::max(1.0, std::abs(omega));
  const auto damped = [&](double eps) {
    const auto f = [&](double t) {
      return alpha_zero_t(t, eta, cutoff) * std::exp(cplx(-eps * t, -omega * t));
    };
    const double t1 = 20.0 / cutoff;
    const int n_tail =
        std::max(20000, static_cast<int>(t_end * (std::abs(omega) + eps) * 8.0));
    return simpson(f, 0.0, t1, 4000) + simpson(f, t1, t_end, n_tail);
  };
  const double eps0 = 2.0 / t_end;
  const cplx f1 = damped(eps0);
  const cplx f2 = damped(eps0 / 2.0);
  const cplx f3 = damped(eps0 / 4.0);
  return (f1 - 6.0 * f2 + 8.0 * f3) / 3.0;
}

}  // namespace oracles

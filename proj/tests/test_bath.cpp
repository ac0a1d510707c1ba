#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tclprep/bath.hpp"

using namespace tclprep;
using bath::BathSpec;
using bath::Correlation;
using bath::SpectralDensity;
using bath::Strategy;
using ops::cplx;

namespace {
constexpr double pi = 3.14159265358979323846;

BathSpec zero_t_bath(double eta = 0.05, double cutoff = 100.0) {
  return {{SpectralDensity::Family::OhmicExpCutoff, eta, cutoff}, bath::beta_infinite};
}

BathSpec warm_bath(double beta, double eta = 0.05, double cutoff = 100.0) {
  return {{SpectralDensity::Family::OhmicExpCutoff, eta, cutoff}, beta};
}
}  // namespace

TEST_CASE("spectral density and spec validation") {
  const SpectralDensity j{SpectralDensity::Family::OhmicExpCutoff, 0.5, 10.0};
  CHECK(j(0.0) == 0.0);
  CHECK(j(10.0) == doctest::Approx(0.5 * 10.0 * std::exp(-1.0)));
  CHECK_THROWS_AS(j(-1.0), std::domain_error);
  CHECK_THROWS_AS((BathSpec{{SpectralDensity::Family::OhmicExpCutoff, -1.0, 10.0},
                            bath::beta_infinite}
                       .validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((BathSpec{j, -2.0}.validate()), std::invalid_argument);
}

TEST_CASE("alpha at t = 0 equals the spectral integral") {
  // oracle: integral of J over frequencies, plain quadrature
  const double lam = 40.0;
  const auto j = [&](double w) { return cplx(w * std::exp(-w / lam), 0.0); };
  const double oracle = oracles::simpson(j, 0.0, 80.0 * lam, 200000).real();
  const Correlation quad({{SpectralDensity::Family::OhmicExpCutoff, 1.0, lam},
                          bath::beta_infinite},
                         Strategy::Quadrature);
  CHECK(quad.alpha(0.0).real() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(quad.alpha(0.0).real() == doctest::Approx(lam * lam).epsilon(1e-9));
  CHECK(std::abs(quad.alpha(0.0).imag()) <= 1e-9 * lam * lam);
}

TEST_CASE("alpha closed form at t = 1/cutoff") {
  const Correlation closed(zero_t_bath(1.0, 25.0));
  const Correlation quad(zero_t_bath(1.0, 25.0), Strategy::Quadrature);
  const cplx want = cplx(0.0, -0.5) * 25.0 * 25.0;  // eta Lambda^2 / (1+i)^2
  CHECK(std::abs(closed.alpha(1.0 / 25.0) - want) <= 1e-10 * std::abs(want));
  CHECK(std::abs(quad.alpha(1.0 / 25.0) - want) <= 1e-8 * std::abs(want));
}

TEST_CASE("quadrature alpha matches the closed form over decades") {
  const double lam = 100.0, eta = 0.05;
  const Correlation closed(zero_t_bath(eta, lam));
  const Correlation quad(zero_t_bath(eta, lam), Strategy::Quadrature);
  for (int i = 0; i < 50; ++i) {
    const double t = std::pow(10.0, -3.0 + 5.0 * i / 49.0) / lam;
    const cplx a = closed.alpha(t), b = quad.alpha(t);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
  }
}

TEST_CASE("alpha is Hermitian in time") {
  auto gen = oracles::rng(21);
  for (const auto strategy : {Strategy::Auto, Strategy::Quadrature}) {
    const Correlation c(warm_bath(1.0), strategy);
    for (int i = 0; i < 20; ++i) {
      const double t = 5.0 * static_cast<double>(gen() % 10000) / 10000.0 + 1e-4;
      const cplx plus = c.alpha(t), minus = c.alpha(-t);
      CHECK(std::abs(minus - std::conj(plus)) <= 1e-8 * std::abs(plus));
    }
  }
}

TEST_CASE("alpha envelope localizes on the bath memory scale") {
  const double lam = 50.0, eta = 0.3;
  const Correlation c(zero_t_bath(eta, lam));
  const double peak = std::abs(c.alpha(0.0));
  CHECK(peak == doctest::Approx(eta * lam * lam));
  for (int i = 1; i <= 40; ++i) {
    const double t = 4.0 * i / 40.0 / lam;
    const double envelope = eta * lam * lam / (1.0 + lam * lam * t * t);
    CHECK(std::abs(c.alpha(t)) == doctest::Approx(envelope).epsilon(1e-10));
  }
  CHECK(std::abs(c.alpha(3.0 / lam)) <= 0.1000001 * peak);
}

TEST_CASE("correlation Gram matrices are positive semidefinite") {
  auto gen = oracles::rng(22);
  for (double beta : {bath::beta_infinite, 2.0, 0.5}) {
    const Correlation c(warm_bath(beta, 0.1, 20.0));
    for (int rep = 0; rep < 5; ++rep) {
      const int n = 3 + static_cast<int>(gen() % 6);
      std::vector<double> ts(n);
      for (auto& t : ts) t = 2.0 * static_cast<double>(gen() % 10000) / 10000.0;
      ops::Mat gram(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram(i, j) = c.alpha(ts[i] - ts[j]);
      const double min_eig = ops::min_eigenvalue(0.5 * (gram + gram.adjoint()));
      CHECK(min_eig >= -1e-8 * std::abs(c.alpha(0.0)));
    }
  }
}

TEST_CASE("finite-temperature alpha against the Matsubara oracle") {
  const double eta = 0.05, lam = 100.0;
  for (double beta : {0.5, 1.0, 5.0}) {
    const Correlation fast(warm_bath(beta, eta, lam));                  // subtracted form
    const Correlation direct(warm_bath(beta, eta, lam), Strategy::Quadrature);
    for (double t : {0.0, 0.003, 0.02, 0.17, 1.4}) {
      const cplx want = oracles::alpha_matsubara(t, eta, lam, beta);
      CHECK(std::abs(fast.alpha(t) - want) <= 1e-8 * std::abs(want));
      CHECK(std::abs(direct.alpha(t) - want) <= 1e-7 * std::abs(want));
    }
  }
}

TEST_CASE("closed-form strategy refuses finite temperature") {
  const Correlation c(warm_bath(1.0), Strategy::ClosedForm);
  CHECK_THROWS_AS(c.alpha(0.1), std::invalid_argument);
  CHECK_THROWS_AS(c.alpha_half_fourier(1.0), std::invalid_argument);
}

TEST_CASE("alpha_tilde sides at zero temperature") {
  const double eta = 0.05, lam = 100.0;
  const Correlation c(zero_t_bath(eta, lam));
  // absorption side is KMS-suppressed to zero
  CHECK(c.alpha_tilde(1.0) == 0.0);
  CHECK(c.alpha_tilde(37.0) == 0.0);
  CHECK(c.alpha_tilde(0.0) == 0.0);
  // emission side carries 2 pi J
  for (double w : {0.5, 1.0, 2.0, 5.0}) {
    const double want = 2.0 * pi * eta * w * std::exp(-w / lam);
    CHECK(c.alpha_tilde(-w) == doctest::Approx(want).epsilon(1e-12));
    // numeric Fourier-transform oracle of the closed-form alpha
    const double numeric =
        2.0 * oracles::half_fourier_damped_oracle(-w, eta, lam).real();
    CHECK(c.alpha_tilde(-w) == doctest::Approx(numeric).epsilon(2e-6));
  }
}

TEST_CASE("alpha_tilde is non-negative at finite temperature") {
  const Correlation c(warm_bath(0.7));
  for (double w : {-8.0, -1.0, -0.01, 0.0, 0.01, 1.0, 8.0})
    CHECK(c.alpha_tilde(w) >= -1e-10);
}

TEST_CASE("KMS relation on finite-temperature grids") {
  const double grid_base[] = {0.5, 1.0, 2.0, 5.0};
  for (double beta : {0.5, 1.0, 5.0}) {
    const Correlation c(warm_bath(beta));
    std::vector<double> grid;
    for (double w : grid_base) {
      grid.push_back(w);
      grid.push_back(-w);
    }
    const auto report = c.kms_check(grid);
    CHECK(report.pass);
    CHECK(report.max_violation <= 1e-6);
  }
}

TEST_CASE("KMS identity at zero frequency") {
  const Correlation c(warm_bath(2.0));
  const double grid[] = {0.0};
  const auto report = c.kms_check(grid);
  CHECK(report.pass);
  CHECK(report.max_violation == 0.0);
}

TEST_CASE("KMS report at zero temperature flags the suppressed side") {
  const Correlation c(zero_t_bath());
  const double grid[] = {0.5, 1.0, 2.0};
  const auto report = c.kms_check(grid);
  CHECK(report.pass);  // alpha_tilde(|w|) vanishes identically
}

TEST_CASE("half-Fourier transform: real part is half the full transform") {
  auto gen = oracles::rng(23);
  for (double beta : {bath::beta_infinite, 1.3}) {
    const Correlation c(warm_bath(beta));
    for (int i = 0; i < 10; ++i) {
      const double w = -6.0 + 12.0 * static_cast<double>(gen() % 10000) / 10000.0;
      const cplx half = c.alpha_half_fourier(w);
      const double scale = std::max(std::abs(half), 1e-12);
      CHECK(std::abs(half.real() - 0.5 * c.alpha_tilde(w)) <= 1e-7 * scale);
      // restated: the one-sided transform and its mirror sum to the full one
      const cplx mirror = c.alpha_half_fourier(w);
      CHECK(std::abs(2.0 * mirror.real() - c.alpha_tilde(w)) <= 1e-7 * scale);
    }
  }
}

TEST_CASE("zero-temperature half-Fourier closed form against the damped oracle") {
  const double eta = 0.05, lam = 100.0;
  const Correlation c(zero_t_bath(eta, lam));
  for (double w : {1.0, -1.0, 2.5, -2.5, 0.0}) {
    const cplx got = c.alpha_half_fourier(w);
    const cplx want = oracles::half_fourier_damped_oracle(w, eta, lam);
    CHECK(std::abs(got - want) <= 2e-6 * std::abs(want));
  }
}

TEST_CASE("half-Fourier strategies agree") {
  const double eta = 0.05, lam = 100.0;
  SUBCASE("zero temperature: closed form vs damped quadrature") {
    const Correlation closed(zero_t_bath(eta, lam));
    const Correlation damped(zero_t_bath(eta, lam), Strategy::Quadrature);
    for (double w : {1.0, -1.0, 3.0, -3.0}) {
      const cplx a = closed.alpha_half_fourier(w);
      const cplx b = damped.alpha_half_fourier(w);
      CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
    }
  }
  SUBCASE("finite temperature: principal value vs damped quadrature") {
    const Correlation pv(warm_bath(1.0, eta, lam));
    const Correlation damped(warm_bath(1.0, eta, lam), Strategy::Quadrature);
    for (double w : {1.0, -1.0, 2.0}) {
      const cplx a = pv.alpha_half_fourier(w);
      const cplx b = damped.alpha_half_fourier(w);
      CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
    }
  }
}

// coefficients.hpp — Memory-integrated coupling operators of the second-order generator

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tclprep/bath.hpp"
#include "tclprep/propagator.hpp"

namespace tclprep::coeff {

using ops::cplx;
using ops::Mat;

// smooth interaction ramp theta(t): [0,inf) -> [0,1]; tau_s = 0 disables the ramp.
// Built-in shape is exponential, 1 - exp(-t/tau_s); a custom shape may be supplied.
struct SwitchOn {
  double tau_s = 0.0;
  std::function<double(double)> custom;

  bool active() const { return tau_s > 0.0 || static_cast<bool>(custom); }
  bool exponential() const { return !static_cast<bool>(custom); }
  double theta(double t) const;
};

struct QuadratureControl {
  double step = 0.0;      // composite step; 0 derives it from cutoff and level splittings
  double rel_tol = 1e-7;  // step-halving acceptance threshold, relative to the result norm
};

// integral_0^t ds alpha(s) e^{-iHs} L e^{+iHs}  for constant Hermitian H
Mat diamond_finite(const Mat& coupling, const Mat& hamiltonian,
                   const bath::Correlation& corr, double t,
                   const QuadratureControl& qc = {});

// theta(t) integral_0^t dtau theta(t - tau) alpha(tau) e^{-iHtau} L e^{+iHtau}
Mat diamond_switched(const Mat& coupling, const Mat& hamiltonian,
                     const bath::Correlation& corr, const SwitchOn& sw, double t,
                     const QuadratureControl& qc = {});

// stationary limit: entries L_ab alpha_half_fourier(E_a - E_b) in the eigenbasis of H
Mat diamond_asymptotic(const Mat& coupling, const Mat& h_past,
                       const bath::Correlation& corr);

// finite-time coefficient along a piecewise-constant schedule,
// integral_0^t dtau alpha(t - tau) G_S(t, tau){L}
Mat diamond_plus(const Mat& coupling, const ops::HamiltonianSchedule& schedule,
                 const bath::Correlation& corr, double t,
                 const QuadratureControl& qc = {});

// correlated coefficient for a state equilibrated under the past Hamiltonian:
//   plus(t) - M(t){ minus(t) - minus(inf) }
Mat diamond_prepared(const Mat& coupling, const ops::HamiltonianSchedule& schedule,
                     const bath::Correlation& corr, double t,
                     const QuadratureControl& qc = {});

enum class Variant { Finite, Switched, Asymptotic, Prepared };

// declarative bundle naming one coefficient trajectory
struct DiamondCoefficient {
  Variant variant = Variant::Finite;
  Mat coupling;
  ops::HamiltonianSchedule schedule;
  bath::Correlation correlation;
  SwitchOn switch_on;
  QuadratureControl quadrature;

  Mat evaluate(double t) const;
};

// Incremental evaluator on an equally spaced grid.  value() is the coefficient
// at t_j = j * grid_step; advance() moves one point forward using two new
// correlation samples per running integral, so a full trajectory costs O(N)
// alpha evaluations instead of O(N^2).  Segment boundaries of the schedule
// must lie on the grid.
class Walker {
 public:
  Walker(DiamondCoefficient coeff, double grid_step);

  double time() const { return static_cast<double>(index_) * step_; }
  const Mat& value() const { return value_; }
  void advance();

 private:
  // running F_ab(y) = integral_0^y alpha(u) exp(-i w_ab u) du in one eigenbasis
  struct Prefix {
    double y = 0.0;
    Mat f;          // d x d accumulators
    Mat last_node;  // integrand matrix at the current y
  };

  struct SegmentTrack {
    double t_begin = 0.0;
    double t_end = 0.0;
    Mat vecs;               // eigenbasis of the segment Hamiltonian
    Eigen::VectorXd energies;
    Mat l_tilde;            // coupling in that eigenbasis
    Mat entry;              // U(T_k, 0)
    Prefix hi;              // argument t - t_begin
    std::optional<Prefix> lo;  // argument t - t_end once the segment has completed
  };

  Mat node_matrix(const SegmentTrack& seg, double u) const;
  void advance_prefix(Prefix& p, const SegmentTrack& seg, Mat* smoothed);
  Mat plus_unitary(double t) const;
  Mat assemble_plus(double t) const;
  void refresh(double t);

  DiamondCoefficient coeff_;
  double step_ = 0.0;
  std::size_t index_ = 0;
  std::vector<SegmentTrack> segments_;
  std::optional<SegmentTrack> past_;  // Prepared: finite track under H_-
  Mat minus_asymptotic_;              // Prepared: (A diamond L)_-(inf)
  Mat smooth_g_;                      // Switched: exponentially smoothed running integral
  std::size_t active_ = 0;
  Mat value_;
};

}  // namespace tclprep::coeff

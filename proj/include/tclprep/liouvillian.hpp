// liouvillian.hpp — Generator assembly: unitary drive plus second-order dissipative part

#pragma once

#include <span>
#include <vector>

#include "tclprep/coefficients.hpp"

namespace tclprep::liouville {

using ops::cplx;
using ops::Mat;

// -i [h, rho]
Mat apply_L0(const Mat& hamiltonian, const Mat& rho);

// sum_n [L_n, rho A_n^dag - A_n rho] with the coefficient operators A_n
// already evaluated at the target time
Mat apply_L2(std::span<const Mat> couplings, std::span<const Mat> coefficients,
             const Mat& rho);

struct Channel {
  Mat coupling;                           // L_n
  coeff::DiamondCoefficient coefficient;  // carries the (n,m)-summed memory integral
};

class Liouvillian {
 public:
  Liouvillian(ops::HamiltonianSchedule schedule, std::vector<Channel> channels);

  Eigen::Index dim() const { return schedule_.dim(); }
  const ops::HamiltonianSchedule& schedule() const { return schedule_; }
  const std::vector<Channel>& channels() const { return channels_; }

  std::vector<Mat> coefficients_at(double t) const;

  Mat apply(double t, const Mat& rho) const;
  // action with pre-evaluated pieces; hot path for integrators
  Mat apply_with(const Mat& hamiltonian, std::span<const Mat> coefficients,
                 const Mat& rho) const;

  // column-stacking vectorization, dim^2 x dim^2
  Mat as_matrix(double t) const;
  Mat as_matrix_with(const Mat& hamiltonian, std::span<const Mat> coefficients) const;

  // instantaneous loss rate of excited population out of the excited state,
  // -tr(P_e L(t){P_e}); two-level systems only
  double decay_rate(double t, const Mat& excited_projector) const;
  double decay_rate_with(const Mat& hamiltonian, std::span<const Mat> coefficients,
                         const Mat& excited_projector) const;

 private:
  ops::HamiltonianSchedule schedule_;
  std::vector<Channel> channels_;
};

double decay_rate(const Liouvillian& gen, double t, const Mat& excited_projector);

}  // namespace tclprep::liouville

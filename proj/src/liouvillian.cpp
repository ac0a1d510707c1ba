#include "tclprep/liouvillian.hpp"

namespace tclprep::liouville {

Mat apply_L0(const Mat& hamiltonian, const Mat& rho) {
  ops::require_same_dim(hamiltonian, rho, "apply_L0");
  ops::require_hermitian(hamiltonian, "apply_L0");
  return cplx(0, -1) * (hamiltonian * rho - rho * hamiltonian);
}

Mat apply_L2(std::span<const Mat> couplings, std::span<const Mat> coefficients,
             const Mat& rho) {
  if (couplings.size() != coefficients.size())
    throw std::invalid_argument("apply_L2: couplings and coefficients differ in count");
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (std::size_t n = 0; n < couplings.size(); ++n) {
    const Mat& l = couplings[n];
    const Mat& a = coefficients[n];
    ops::require_same_dim(l, rho, "apply_L2");
    ops::require_same_dim(a, rho, "apply_L2");
    const Mat inner = rho * a.adjoint() - a * rho;
    out += l * inner - inner * l;
  }
  return out;
}

Liouvillian::Liouvillian(ops::HamiltonianSchedule schedule, std::vector<Channel> channels)
    : schedule_(std::move(schedule)), channels_(std::move(channels)) {
  for (const auto& ch : channels_) {
    if (ch.coupling.rows() != dim() || ch.coupling.cols() != dim())
      throw std::invalid_argument("Liouvillian: channel coupling dimension mismatch");
  }
}

std::vector<Mat> Liouvillian::coefficients_at(double t) const {
  std::vector<Mat> values;
  values.reserve(channels_.size());
  for (const auto& ch : channels_) values.push_back(ch.coefficient.evaluate(t));
  return values;
}

Mat Liouvillian::apply(double t, const Mat& rho) const {
  const auto values = coefficients_at(t);
  return apply_with(schedule_.hamiltonian_at(t), values, rho);
}

Mat Liouvillian::apply_with(const Mat& hamiltonian, std::span<const Mat> coefficients,
                            const Mat& rho) const {
  Mat out = apply_L0(hamiltonian, rho);
  std::vector<Mat> couplings;
  couplings.reserve(channels_.size());
  for (const auto& ch : channels_) couplings.push_back(ch.coupling);
  out += apply_L2(couplings, coefficients, rho);
  return out;
}

Mat Liouvillian::as_matrix_with(const Mat& hamiltonian,
                                std::span<const Mat> coefficients) const {
  const Eigen::Index d = dim();
  const Mat id = Mat::Identity(d, d);
  Mat m = cplx(0, -1) * (ops::kron(id, hamiltonian) -
                         ops::kron(hamiltonian.transpose(), id));
  for (std::size_t n = 0; n < channels_.size(); ++n) {
    const Mat& l = channels_[n].coupling;
    const Mat& a = coefficients[n];
    const Mat ad = a.adjoint();
    // vec(L rho A^dag - L A rho - rho A^dag L + A rho L)
    m += ops::kron(ad.transpose(), l);
    m -= ops::kron(id, l * a);
    m -= ops::kron((ad * l).transpose(), id);
    m += ops::kron(l.transpose(), a);
  }
  return m;
}

Mat Liouvillian::as_matrix(double t) const {
  const auto values = coefficients_at(t);
  return as_matrix_with(schedule_.hamiltonian_at(t), values);
}

double Liouvillian::decay_rate_with(const Mat& hamiltonian,
                                    std::span<const Mat> coefficients,
                                    const Mat& excited_projector) const {
  if (dim() != 2)
    throw std::invalid_argument("decay_rate: only two-level systems are supported");
  ops::require_same_dim(excited_projector, hamiltonian, "decay_rate");
  const Mat flow = apply_with(hamiltonian, coefficients, excited_projector);
  return -(excited_projector * flow).trace().real();
}

double Liouvillian::decay_rate(double t, const Mat& excited_projector) const {
  const auto values = coefficients_at(t);
  return decay_rate_with(schedule_.hamiltonian_at(t), values, excited_projector);
}

double decay_rate(const Liouvillian& gen, double t, const Mat& excited_projector) {
  return gen.decay_rate(t, excited_projector);
}

}  // namespace tclprep::liouville

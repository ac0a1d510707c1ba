#include "tclprep/propagator.hpp"

#include <cmath>
#include <string>

namespace tclprep::ops {

UnitaryPropagator::UnitaryPropagator(const Mat& hamiltonian) : h_(hamiltonian) {
  require_hermitian(hamiltonian, "UnitaryPropagator");
  Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("UnitaryPropagator: eigendecomposition failed");
  energies_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
}

Mat UnitaryPropagator::unitary(double dt) const {
  const Eigen::Index d = dim();
  Vec phases(d);
  for (Eigen::Index a = 0; a < d; ++a)
    phases(a) = std::exp(cplx(0, -energies_(a) * dt));
  return vecs_ * phases.asDiagonal() * vecs_.adjoint();
}

Mat UnitaryPropagator::conjugate(double dt, const Mat& x) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw std::invalid_argument("UnitaryPropagator::conjugate: dimension mismatch");
  if (dt == 0.0) return x;
  const Mat u = unitary(dt);
  return u * x * u.adjoint();
}

double UnitaryPropagator::max_bohr_frequency() const {
  return energies_.maxCoeff() - energies_.minCoeff();
}

Mat conjugate_propagate(const Mat& hamiltonian, double dt, const Mat& x) {
  return UnitaryPropagator(hamiltonian).conjugate(dt, x);
}

HamiltonianSchedule::HamiltonianSchedule(Mat past, std::vector<Segment> segments)
    : past_(std::make_shared<UnitaryPropagator>(past)), segments_(std::move(segments)) {
  if (segments_.empty())
    throw std::invalid_argument("HamiltonianSchedule: no segments");
  if (std::abs(segments_.front().t_begin) > 1e-12)
    throw std::invalid_argument("HamiltonianSchedule: segments must start at t = 0");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& seg = segments_[k];
    if (!(seg.t_end > seg.t_begin))
      throw std::invalid_argument("HamiltonianSchedule: empty or reversed segment");
    if (k + 1 < segments_.size() &&
        std::abs(segments_[k + 1].t_begin - seg.t_end) > 1e-12 * std::max(1.0, std::abs(seg.t_end)))
      throw std::invalid_argument("HamiltonianSchedule: segments must be contiguous");
    if (seg.hamiltonian.rows() != past_->dim())
      throw std::invalid_argument("HamiltonianSchedule: segment dimension mismatch");
    props_.push_back(std::make_shared<UnitaryPropagator>(seg.hamiltonian));
  }
  entry_unitaries_.resize(segments_.size());
  entry_unitaries_[0] = Mat::Identity(dim(), dim());
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const auto& prev = segments_[k - 1];
    entry_unitaries_[k] =
        props_[k - 1]->unitary(prev.t_end - prev.t_begin) * entry_unitaries_[k - 1];
  }
}

HamiltonianSchedule HamiltonianSchedule::constant(Mat past, Mat h_plus) {
  return HamiltonianSchedule(std::move(past),
                             {Segment{0.0, schedule_open_end, std::move(h_plus)}});
}

std::size_t HamiltonianSchedule::segment_index(double t) const {
  if (t < 0)
    throw std::domain_error("HamiltonianSchedule::segment_index: t < 0");
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k)
    if (t < segments_[k].t_end) return k;
  if (t > segments_.back().t_end)
    throw std::domain_error("HamiltonianSchedule: t beyond schedule domain");
  return segments_.size() - 1;
}

const Mat& HamiltonianSchedule::hamiltonian_at(double t) const {
  if (t < 0) return past_->hamiltonian();
  return segments_[segment_index(t)].hamiltonian;
}

Mat HamiltonianSchedule::unitary_from_zero(double t) const {
  const std::size_t j = segment_index(t);
  return props_[j]->unitary(t - segments_[j].t_begin) * entry_unitaries_[j];
}

Mat HamiltonianSchedule::propagate(double t, double tau, const Mat& x) const {
  if (t < tau) throw std::domain_error("HamiltonianSchedule::propagate: t < tau");
  if (x.rows() != dim() || x.cols() != dim())
    throw std::invalid_argument("HamiltonianSchedule::propagate: dimension mismatch");
  if (t == tau) return x;
  Mat u;
  if (t <= 0) {
    u = past_->unitary(t - tau);
  } else if (tau >= 0) {
    u = unitary_from_zero(t) * unitary_from_zero(tau).adjoint();
  } else {
    u = unitary_from_zero(t) * past_->unitary(-tau);
  }
  return u * x * u.adjoint();
}

Mat HamiltonianSchedule::mixing(double t, const Mat& x) const {
  if (t < 0) throw std::domain_error("HamiltonianSchedule::mixing: t < 0");
  // G_-(0,t) conjugates backwards under the past Hamiltonian
  return propagate(t, 0.0, past_->conjugate(-t, x));
}

Mat schedule_propagate(const HamiltonianSchedule& s, double t, double tau, const Mat& x) {
  return s.propagate(t, tau, x);
}

Mat mixing_operator(const HamiltonianSchedule& s, double t, const Mat& x) {
  return s.mixing(t, x);
}

}  // namespace tclprep::ops

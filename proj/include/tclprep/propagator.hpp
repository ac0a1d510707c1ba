// propagator.hpp — Cached unitary propagators and piecewise-constant Hamiltonian schedules

#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "tclprep/operators.hpp"

namespace tclprep::ops {

// Free-system propagator for a constant Hermitian Hamiltonian.
// Eigendecomposed once at construction; all evolution maps reuse the cache.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(const Mat& hamiltonian);

  Eigen::Index dim() const { return energies_.size(); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Mat& eigenvectors() const { return vecs_; }
  const Mat& hamiltonian() const { return h_; }

  // exp(-i H dt)
  Mat unitary(double dt) const;
  // exp(-i H dt) x exp(+i H dt)
  Mat conjugate(double dt, const Mat& x) const;
  // largest level splitting; sets the fastest phase in conjugation
  double max_bohr_frequency() const;

 private:
  Mat h_;
  Eigen::VectorXd energies_;
  Mat vecs_;
};

// exp(-i H dt) x exp(+i H dt) without propagator reuse
Mat conjugate_propagate(const Mat& hamiltonian, double dt, const Mat& x);

inline constexpr double schedule_open_end = std::numeric_limits<double>::infinity();

// System Hamiltonian piecewise in time: a past branch H_- on t < 0 and
// contiguous constant segments covering [0, t_max] (last segment may be open).
class HamiltonianSchedule {
 public:
  struct Segment {
    double t_begin;
    double t_end;
    Mat hamiltonian;
  };

  HamiltonianSchedule(Mat past, std::vector<Segment> segments);

  // single segment [0, inf) with the given Hamiltonian
  static HamiltonianSchedule constant(Mat past, Mat h_plus);

  Eigen::Index dim() const { return past_->dim(); }
  const UnitaryPropagator& past() const { return *past_; }
  std::size_t segment_count() const { return segments_.size(); }
  const Segment& segment(std::size_t k) const { return segments_[k]; }
  const UnitaryPropagator& segment_propagator(std::size_t k) const { return *props_[k]; }
  double domain_end() const { return segments_.back().t_end; }

  // index of the segment containing t (t >= 0)
  std::size_t segment_index(double t) const;
  const Mat& hamiltonian_at(double t) const;  // past branch for t < 0

  // accumulated unitary U(t, 0) through the segments, t >= 0
  Mat unitary_from_zero(double t) const;
  // unitary entering segment k, i.e. U(T_k, 0)
  const Mat& entry_unitary(std::size_t k) const { return entry_unitaries_[k]; }

  // G_S(t, tau){x}; requires tau <= t, both inside the domain
  Mat propagate(double t, double tau, const Mat& x) const;

  // G_+(t,0) G_-(0,t) {x}; identity at t = 0, requires t >= 0
  Mat mixing(double t, const Mat& x) const;

 private:
  std::shared_ptr<const UnitaryPropagator> past_;
  std::vector<Segment> segments_;
  std::vector<std::shared_ptr<const UnitaryPropagator>> props_;
  std::vector<Mat> entry_unitaries_;
};

// convenience wrappers mirroring the schedule members
Mat schedule_propagate(const HamiltonianSchedule& s, double t, double tau, const Mat& x);
Mat mixing_operator(const HamiltonianSchedule& s, double t, const Mat& x);

}  // namespace tclprep::ops

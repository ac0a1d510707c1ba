#include "tclprep/coefficients.hpp"

#include <cmath>
#include <string>

namespace tclprep::coeff {

namespace {

// outer product of phase vectors: entries exp(sign * i (E_a - E_b) x)
Mat bohr_phases(const Eigen::VectorXd& energies, double x, double sign) {
  const Eigen::Index d = energies.size();
  ops::Vec p(d);
  for (Eigen::Index a = 0; a < d; ++a)
    p(a) = std::exp(cplx(0.0, sign * energies(a) * x));
  return p * p.adjoint();
}

double auto_step(const bath::Correlation& corr, double bohr_max, double extra = 0.0) {
  double h = 1.0 / (20.0 * corr.spec().density.cutoff);
  if (bohr_max > 0.0) h = std::min(h, 1.0 / (20.0 * bohr_max));
  if (extra > 0.0) h = std::min(h, extra);
  return h;
}

// composite Simpson with interval midpoints
Mat simpson_matrix(const std::function<Mat(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  Mat left = f(a);
  Mat acc = Mat::Zero(left.rows(), left.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = a + static_cast<double>(i) * h;
    const Mat mid = f(x0 + 0.5 * h);
    const Mat right = f(std::min(x0 + h, b));
    acc += (h / 6.0) * (left + 4.0 * mid + right);
    left = right;
  }
  return acc;
}

void check_halving(const Mat& coarse, const Mat& fine, const QuadratureControl& qc,
                   const bath::Correlation& corr, const Mat& coupling, const char* what) {
  const double err = (fine - coarse).norm() / 15.0;
  const double scale =
      corr.spec().density.eta * corr.spec().density.cutoff * coupling.norm();
  if (!(err <= qc.rel_tol * fine.norm() + 1e-13 * scale))
    throw NumericalError(std::string(what) +
                         ": step-halving non-convergence (estimate " +
                         std::to_string(err) + ", result norm " +
                         std::to_string(fine.norm()) + "); reduce the step");
}

}  // namespace

double SwitchOn::theta(double t) const {
  if (custom) return custom(t);
  if (tau_s <= 0.0) return 1.0;
  return -std::expm1(-t / tau_s);
}

Mat diamond_finite(const Mat& coupling, const Mat& hamiltonian,
                   const bath::Correlation& corr, double t, const QuadratureControl& qc) {
  ops::require_same_dim(coupling, hamiltonian, "diamond_finite");
  if (t < 0) throw std::domain_error("diamond_finite: t < 0");
  const ops::UnitaryPropagator prop(hamiltonian);
  if (t == 0.0) return Mat::Zero(coupling.rows(), coupling.cols());
  double h = qc.step > 0.0 ? qc.step : auto_step(corr, prop.max_bohr_frequency());
  h = std::min(h, t / 4.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(t / h));
  const auto f = [&](double s) -> Mat { return corr.alpha(s) * prop.conjugate(s, coupling); };
  const Mat coarse = simpson_matrix(f, 0.0, t, n);
  const Mat fine = simpson_matrix(f, 0.0, t, 2 * n);
  check_halving(coarse, fine, qc, corr, coupling, "diamond_finite");
  return fine;
}

Mat diamond_switched(const Mat& coupling, const Mat& hamiltonian,
                     const bath::Correlation& corr, const SwitchOn& sw, double t,
                     const QuadratureControl& qc) {
  ops::require_same_dim(coupling, hamiltonian, "diamond_switched");
  if (t < 0) throw std::domain_error("diamond_switched: t < 0");
  const ops::UnitaryPropagator prop(hamiltonian);
  if (t == 0.0) return Mat::Zero(coupling.rows(), coupling.cols());
  double h = qc.step > 0.0
                 ? qc.step
                 : auto_step(corr, prop.max_bohr_frequency(),
                             sw.tau_s > 0.0 ? sw.tau_s / 20.0 : 0.0);
  h = std::min(h, t / 4.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(t / h));
  const auto f = [&](double tau) -> Mat {
    return sw.theta(t - tau) * corr.alpha(tau) * prop.conjugate(tau, coupling);
  };
  const Mat coarse = simpson_matrix(f, 0.0, t, n);
  const Mat fine = simpson_matrix(f, 0.0, t, 2 * n);
  check_halving(coarse, fine, qc, corr, coupling, "diamond_switched");
  return sw.theta(t) * fine;
}

Mat diamond_asymptotic(const Mat& coupling, const Mat& h_past,
                       const bath::Correlation& corr) {
  ops::require_same_dim(coupling, h_past, "diamond_asymptotic");
  const ops::UnitaryPropagator prop(h_past);
  const Eigen::VectorXd& energies = prop.energies();
  const Mat& vecs = prop.eigenvectors();
  const Mat l_tilde = vecs.adjoint() * coupling * vecs;
  const Eigen::Index d = energies.size();
  const double tol = 1e-12 * std::max(1.0, energies.cwiseAbs().maxCoeff());
  std::vector<std::pair<double, cplx>> cache;
  Mat a_tilde(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double w = energies(a) - energies(b);
      cplx val{};
      bool found = false;
      for (const auto& [wc, vc] : cache)
        if (std::abs(wc - w) <= tol) {
          val = vc;
          found = true;
          break;
        }
      if (!found) {
        val = corr.alpha_half_fourier(w);
        cache.emplace_back(w, val);
      }
      a_tilde(a, b) = l_tilde(a, b) * val;
    }
  }
  return vecs * a_tilde * vecs.adjoint();
}

Mat diamond_plus(const Mat& coupling, const ops::HamiltonianSchedule& schedule,
                 const bath::Correlation& corr, double t, const QuadratureControl& qc) {
  if (t < 0) throw std::domain_error("diamond_plus: t < 0");
  if (t == 0.0) return Mat::Zero(coupling.rows(), coupling.cols());
  if (schedule.segment_count() == 1 || t <= schedule.segment(0).t_end)
    return diamond_finite(coupling, schedule.segment(0).hamiltonian, corr, t, qc);
  const std::size_t last = schedule.segment_index(t);
  double bohr_max = 0.0;
  std::vector<double> cuts{0.0};
  for (std::size_t k = 0; k <= last; ++k) {
    bohr_max = std::max(bohr_max, schedule.segment_propagator(k).max_bohr_frequency());
    cuts.push_back(std::min(schedule.segment(k).t_end, t));
  }
  const double h = qc.step > 0.0 ? qc.step : auto_step(corr, bohr_max);
  const auto f = [&](double tau) -> Mat {
    return corr.alpha(t - tau) * schedule.propagate(t, tau, coupling);
  };
  Mat coarse = Mat::Zero(coupling.rows(), coupling.cols());
  Mat fine = coarse;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    const std::size_t n =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((b - a) / h)));
    coarse += simpson_matrix(f, a, b, n);
    fine += simpson_matrix(f, a, b, 2 * n);
  }
  check_halving(coarse, fine, qc, corr, coupling, "diamond_plus");
  return fine;
}

Mat diamond_prepared(const Mat& coupling, const ops::HamiltonianSchedule& schedule,
                     const bath::Correlation& corr, double t, const QuadratureControl& qc) {
  if (t < 0) throw std::domain_error("diamond_prepared: t < 0");
  const Mat plus = diamond_plus(coupling, schedule, corr, t, qc);
  const Mat& h_minus = schedule.past().hamiltonian();
  const Mat minus_t = diamond_finite(coupling, h_minus, corr, t, qc);
  const Mat minus_inf = diamond_asymptotic(coupling, h_minus, corr);
  return plus - schedule.mixing(t, minus_t - minus_inf);
}

Mat DiamondCoefficient::evaluate(double t) const {
  switch (variant) {
    case Variant::Finite:
      return diamond_plus(coupling, schedule, correlation, t, quadrature);
    case Variant::Switched:
      return diamond_switched(coupling, schedule.segment(0).hamiltonian, correlation,
                              switch_on, t, quadrature);
    case Variant::Asymptotic:
      return diamond_asymptotic(coupling, schedule.segment(0).hamiltonian, correlation);
    case Variant::Prepared:
      return diamond_prepared(coupling, schedule, correlation, t, quadrature);
  }
  throw std::logic_error("DiamondCoefficient: unknown variant");
}

Walker::Walker(DiamondCoefficient coeff, double grid_step)
    : coeff_(std::move(coeff)), step_(grid_step) {
  if (!(step_ > 0.0)) throw std::invalid_argument("Walker: grid step must be positive");
  const auto& schedule = coeff_.schedule;
  const Eigen::Index d = schedule.dim();
  if (coeff_.coupling.rows() != d || coeff_.coupling.cols() != d)
    throw std::invalid_argument("Walker: coupling dimension mismatch");

  if (coeff_.variant == Variant::Switched) {
    if (!coeff_.switch_on.exponential())
      throw std::invalid_argument(
          "Walker: only the exponential switch-on shape supports incremental evaluation");
    if (schedule.segment_count() != 1)
      throw std::invalid_argument("Walker: switched variant requires a single segment");
  }

  for (std::size_t k = 0; k + 1 < schedule.segment_count(); ++k) {
    const double edge = schedule.segment(k).t_end;
    const double ratio = edge / step_;
    if (std::abs(ratio - std::round(ratio)) > 1e-6)
      throw std::invalid_argument(
          "Walker: segment boundaries must be multiples of the grid step");
  }

  segments_.resize(schedule.segment_count());
  for (std::size_t k = 0; k < schedule.segment_count(); ++k) {
    auto& seg = segments_[k];
    const auto& prop = schedule.segment_propagator(k);
    seg.t_begin = schedule.segment(k).t_begin;
    seg.t_end = schedule.segment(k).t_end;
    seg.vecs = prop.eigenvectors();
    seg.energies = prop.energies();
    seg.l_tilde = seg.vecs.adjoint() * coeff_.coupling * seg.vecs;
    seg.entry = schedule.entry_unitary(k);
  }
  segments_[0].hi = Prefix{0.0, Mat::Zero(d, d), node_matrix(segments_[0], 0.0)};
  active_ = 0;

  if (coeff_.variant == Variant::Prepared) {
    SegmentTrack past;
    const auto& prop = schedule.past();
    past.t_begin = 0.0;
    past.t_end = ops::schedule_open_end;
    past.vecs = prop.eigenvectors();
    past.energies = prop.energies();
    past.l_tilde = past.vecs.adjoint() * coeff_.coupling * past.vecs;
    past.entry = Mat::Identity(d, d);
    past.hi = Prefix{0.0, Mat::Zero(d, d), Mat()};
    past_ = std::move(past);
    past_->hi.last_node = node_matrix(*past_, 0.0);
    minus_asymptotic_ =
        diamond_asymptotic(coeff_.coupling, prop.hamiltonian(), coeff_.correlation);
  }
  if (coeff_.variant == Variant::Switched && coeff_.switch_on.tau_s > 0.0)
    smooth_g_ = Mat::Zero(d, d);
  if (coeff_.variant == Variant::Asymptotic)
    value_ = diamond_asymptotic(coeff_.coupling, schedule.segment(0).hamiltonian,
                                coeff_.correlation);
  refresh(0.0);
}

Mat Walker::node_matrix(const SegmentTrack& seg, double u) const {
  return coeff_.correlation.alpha(u) * bohr_phases(seg.energies, u, -1.0);
}

void Walker::advance_prefix(Prefix& p, const SegmentTrack& seg, Mat* smoothed) {
  const double y = p.y;
  const Mat mid = node_matrix(seg, y + 0.5 * step_);
  const Mat right = node_matrix(seg, y + step_);
  p.f += (step_ / 6.0) * (p.last_node + 4.0 * mid + right);
  if (smoothed) {
    const double tau_s = coeff_.switch_on.tau_s;
    const double e_full = std::exp(-step_ / tau_s);
    const double e_half = std::exp(-0.5 * step_ / tau_s);
    *smoothed = e_full * (*smoothed) +
                (step_ / 6.0) * (e_full * p.last_node + 4.0 * e_half * mid + right);
  }
  p.last_node = right;
  p.y += step_;
}

void Walker::advance() {
  ++index_;
  if (coeff_.variant == Variant::Asymptotic) return;  // stationary value
  const double t = time();
  const bool smooth = coeff_.variant == Variant::Switched && coeff_.switch_on.tau_s > 0.0;
  for (std::size_t k = 0; k <= active_; ++k) {
    advance_prefix(segments_[k].hi, segments_[k], smooth && k == 0 ? &smooth_g_ : nullptr);
    if (segments_[k].lo) advance_prefix(*segments_[k].lo, segments_[k], nullptr);
  }
  if (past_) advance_prefix(past_->hi, *past_, nullptr);
  if (active_ + 1 < segments_.size() && t >= segments_[active_].t_end - 0.5 * step_) {
    const Eigen::Index d = coeff_.schedule.dim();
    segments_[active_].lo =
        Prefix{0.0, Mat::Zero(d, d), node_matrix(segments_[active_], 0.0)};
    ++active_;
    segments_[active_].hi =
        Prefix{0.0, Mat::Zero(d, d), node_matrix(segments_[active_], 0.0)};
  }
  refresh(t);
}

Mat Walker::plus_unitary(double t) const {
  const auto& seg = segments_[active_];
  const Eigen::Index d = seg.energies.size();
  ops::Vec ph(d);
  for (Eigen::Index a = 0; a < d; ++a)
    ph(a) = std::exp(cplx(0.0, -seg.energies(a) * (t - seg.t_begin)));
  return seg.vecs * ph.asDiagonal() * seg.vecs.adjoint() * seg.entry;
}

Mat Walker::assemble_plus(double t) const {
  const Eigen::Index d = coeff_.schedule.dim();
  Mat b = Mat::Zero(d, d);
  for (std::size_t k = 0; k <= active_; ++k) {
    const auto& seg = segments_[k];
    Mat fdiff = seg.hi.f;
    if (seg.lo) fdiff -= seg.lo->f;
    const Mat m = bohr_phases(seg.energies, t - seg.t_begin, +1.0)
                      .cwiseProduct(fdiff)
                      .cwiseProduct(seg.l_tilde);
    b += seg.entry.adjoint() * seg.vecs * m * seg.vecs.adjoint() * seg.entry;
  }
  const Mat v = plus_unitary(t);
  return v * b * v.adjoint();
}

void Walker::refresh(double t) {
  switch (coeff_.variant) {
    case Variant::Asymptotic:
      return;
    case Variant::Finite:
      value_ = assemble_plus(t);
      return;
    case Variant::Switched: {
      const auto& seg = segments_[0];
      Mat inner = seg.hi.f;
      if (coeff_.switch_on.tau_s > 0.0) inner -= smooth_g_;
      value_ = coeff_.switch_on.theta(t) * seg.vecs *
               inner.cwiseProduct(seg.l_tilde) * seg.vecs.adjoint();
      return;
    }
    case Variant::Prepared: {
      const Mat plus = assemble_plus(t);
      const Mat minus_t =
          past_->vecs * past_->hi.f.cwiseProduct(past_->l_tilde) * past_->vecs.adjoint();
      const Eigen::Index d = past_->energies.size();
      ops::Vec back(d);
      for (Eigen::Index a = 0; a < d; ++a)
        back(a) = std::exp(cplx(0.0, past_->energies(a) * t));
      const Mat w = plus_unitary(t) * past_->vecs * back.asDiagonal() * past_->vecs.adjoint();
      value_ = plus - w * (minus_t - minus_asymptotic_) * w.adjoint();
      return;
    }
  }
  throw std::logic_error("Walker: unknown variant");
}

}  // namespace tclprep::coeff

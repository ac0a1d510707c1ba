#include "tclprep/evolve.hpp"

#include <cmath>
#include <string>

namespace tclprep::evolve {

namespace {

struct RunOutput {
  Trajectory traj;
  Mat final_state;  // full state, for step-halving comparison
};

RunOutput run_fixed_step(const scenario::Scenario& s, double dt, int store_stride) {
  const auto schedule = s.schedule();
  const Eigen::Index d = s.dim();
  const double lam = s.cutoff();
  const double t_max = s.grid.t_max;
  const std::size_t n_steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_max / dt)));

  coeff::Walker walker(s.coefficient(), dt / 2.0);
  const liouville::Liouvillian gen(schedule, {liouville::Channel{s.coupling, s.coefficient()}});

  const bool track_gamma = d == 2 && s.excited_projector.size() > 0;
  Mat a_inf;
  double gamma_inf = std::numeric_limits<double>::quiet_NaN();
  if (track_gamma) {
    a_inf = s.asymptotic_coefficient();
    const Mat coeffs_inf[] = {a_inf};
    gamma_inf = gen.decay_rate_with(
        schedule.segment(schedule.segment_count() - 1).hamiltonian, coeffs_inf,
        s.excited_projector);
  }

  const double jolt_window = 50.0 / lam;
  const std::size_t stride =
      store_stride > 0 ? static_cast<std::size_t>(store_stride)
                       : std::max<std::size_t>(1, n_steps / 4000);

  Trajectory traj;
  traj.dt = dt;
  traj.steps = n_steps;
  traj.gamma_inf = gamma_inf;

  Mat rho = s.rho_init;
  double worst_eig = 1.0;

  const auto record = [&](double t, const Mat& state, const Mat& coeff_now,
                          const Mat& h_now) {
    traj.times.push_back(t);
    const Mat reduced = s.ancilla_dim > 0
                            ? ops::partial_trace_second(state, s.system_dim(), s.ancilla_dim)
                            : state;
    traj.states.push_back(reduced);
    traj.purity.push_back((state * state).trace().real());
    if (s.excited_projector.size() > 0 && reduced.rows() == s.excited_projector.rows())
      traj.p_excited.push_back((s.excited_projector * reduced).trace().real());
    else
      traj.p_excited.push_back(reduced(0, 0).real());
    traj.coherence_re.push_back(reduced.rows() > 1 ? reduced(0, 1).real() : 0.0);
    traj.coherence_im.push_back(reduced.rows() > 1 ? reduced(0, 1).imag() : 0.0);
    if (track_gamma) {
      const Mat coeffs_now[] = {coeff_now};
      traj.gamma.push_back(gen.decay_rate_with(h_now, coeffs_now, s.excited_projector));
    } else {
      traj.gamma.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    traj.max_trace_residual =
        std::max(traj.max_trace_residual, std::abs(state.trace().real() - 1.0) +
                                              std::abs(state.trace().imag()));
    traj.max_hermiticity_residual =
        std::max(traj.max_hermiticity_residual, ops::hermiticity_residual(state));
    worst_eig = std::min(worst_eig, ops::min_eigenvalue(0.5 * (state + state.adjoint())));
    if (traj.max_trace_residual > 1e-8 || traj.max_hermiticity_residual > 1e-8)
      throw NumericalError("integrate: state invariants violated at t = " +
                           std::to_string(t) + " (trace residual " +
                           std::to_string(traj.max_trace_residual) +
                           ", hermiticity residual " +
                           std::to_string(traj.max_hermiticity_residual) +
                           "); reduce dt");
  };

  Mat a0 = walker.value();
  record(0.0, rho, a0, schedule.hamiltonian_at(0.0));

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    walker.advance();
    const Mat a1 = walker.value();
    walker.advance();
    const Mat a2 = walker.value();
    // the step lies inside one segment; pick it by the interior midpoint
    const Mat& h = schedule.hamiltonian_at(std::min(t + 0.5 * dt, t_max));

    const Mat c0[] = {a0};
    const Mat c1[] = {a1};
    const Mat c2[] = {a2};
    const Mat k1 = gen.apply_with(h, c0, rho);
    const Mat k2 = gen.apply_with(h, c1, rho + (0.5 * dt) * k1);
    const Mat k3 = gen.apply_with(h, c1, rho + (0.5 * dt) * k2);
    const Mat k4 = gen.apply_with(h, c2, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = static_cast<double>(k + 1) * dt;
    a0 = a2;
    if (t_next <= jolt_window || (k + 1) % stride == 0 || k + 1 == n_steps)
      record(t_next, rho, a0, schedule.hamiltonian_at(std::min(t_next, t_max)));
  }

  traj.min_eigenvalue = worst_eig;
  if (worst_eig < -1e-6)
    traj.warnings.push_back(
        "state positivity excursion: smallest eigenvalue reached " +
        std::to_string(worst_eig) +
        " (transient negativity is expected of second-order time-local generators)");
  return {std::move(traj), std::move(rho)};
}

}  // namespace

Trajectory integrate(const scenario::Scenario& s) {
  s.validate_types();
  const double dt = s.effective_dt();
  const double limit =
      1.0 / (20.0 * std::max(s.cutoff(), s.frequency_scale()));
  if (dt > limit * (1.0 + 1e-9))
    throw std::invalid_argument("integrate: dt " + std::to_string(dt) +
                                " exceeds the resolution limit " + std::to_string(limit));

  auto full = run_fixed_step(s, dt, s.grid.store_stride);
  auto report = scenario::validate(s);
  for (auto& w : report.warnings) full.traj.warnings.push_back(std::move(w));

  if (s.grid.error_check) {
    auto halved = run_fixed_step(s, dt / 2.0, 1 << 30);
    const double err = (full.final_state - halved.final_state).cwiseAbs().maxCoeff();
    full.traj.step_halving_error = err;
    if (!(err <= 1e-6))
      throw NumericalError("integrate: step-halving error " + std::to_string(err) +
                           " exceeds 1e-6 at t_max; reduce dt");
  }
  return std::move(full.traj);
}

JoltMetrics jolt_metrics(std::span<const double> times, std::span<const double> gamma,
                         double gamma_inf, double cutoff) {
  if (times.size() != gamma.size() || times.empty())
    throw std::invalid_argument("jolt_metrics: empty or mismatched series");
  const double window = 50.0 / cutoff;
  if (times.front() > 1e-12 || times.back() < window * (1.0 - 1e-9))
    throw std::invalid_argument("jolt_metrics: series does not cover the jolt window");
  const double resolution = 1.0 / (20.0 * cutoff);
  for (std::size_t i = 0; i + 1 < times.size() && times[i] < window; ++i)
    if (times[i + 1] - times[i] > resolution * (1.0 + 1e-9))
      throw std::invalid_argument("jolt_metrics: series too coarse inside the jolt window");

  JoltMetrics m;
  std::size_t peak_index = 0;
  m.peak_value = gamma[0];
  m.peak_time = times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (gamma[i] > m.peak_value) {
      m.peak_value = gamma[i];
      m.peak_time = times[i];
      peak_index = i;
    }
  const double band = 0.05 * std::abs(gamma_inf);
  for (std::size_t i = peak_index; i < times.size(); ++i)
    if (std::abs(gamma[i] - gamma_inf) <= band) {
      m.settle_time = times[i];
      break;
    }
  return m;
}

double relative_peak_change(const JoltMetrics& base, const JoltMetrics& doubled) {
  if (base.peak_value == 0.0)
    throw std::invalid_argument("relative_peak_change: base peak is zero");
  return std::abs(doubled.peak_value - base.peak_value) / std::abs(base.peak_value);
}

}  // namespace tclprep::evolve

#include "tclprep/scenario.hpp"

#include <cmath>
#include <string>

namespace tclprep::scenario {

namespace {

constexpr double pi = 3.14159265358979323846;

double bohr_max_of(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
}

Scenario base_scenario(Kind kind, const Mat& h_post, const Mat& coupling,
                       const Mat& rho_init, const bath::BathSpec& bath, const Grid& grid) {
  ops::require_hermitian(h_post, "Scenario h_post");
  ops::require_hermitian(coupling, "Scenario coupling");
  ops::require_same_dim(h_post, coupling, "Scenario");
  ops::require_density_matrix(rho_init, "Scenario rho_init");
  ops::require_same_dim(h_post, rho_init, "Scenario");
  bath.validate();
  Scenario s;
  s.kind = kind;
  s.h_post = h_post;
  s.coupling = coupling;
  s.rho_init = rho_init;
  s.bath_spec = bath;
  s.grid = grid;
  if (h_post.rows() == 2) s.excited_projector = excited_projector_of(h_post);
  return s;
}

}  // namespace

Mat gibbs_state(const Mat& h, double beta) {
  ops::require_hermitian(h, "gibbs_state");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& e = es.eigenvalues();
  const Eigen::Index d = e.size();
  Eigen::VectorXd weights(d);
  if (std::isinf(beta)) {
    const double e0 = e.minCoeff();
    for (Eigen::Index i = 0; i < d; ++i)
      weights(i) = (e(i) - e0) <= 1e-12 * std::max(1.0, std::abs(e0)) ? 1.0 : 0.0;
  } else {
    const double e0 = e.minCoeff();
    for (Eigen::Index i = 0; i < d; ++i) weights(i) = std::exp(-beta * (e(i) - e0));
  }
  weights /= weights.sum();
  return es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().adjoint();
}

Mat excited_projector_of(const Mat& h_post) {
  if (h_post.rows() != 2)
    throw std::invalid_argument("excited_projector_of: two-level Hamiltonian expected");
  Eigen::SelfAdjointEigenSolver<Mat> es(h_post);
  return ops::projector(es.eigenvectors().col(1));  // eigenvalues ascend
}

double Scenario::frequency_scale() const {
  double w = bohr_max_of(h_post);
  if (h_past.size() > 0) w = std::max(w, bohr_max_of(h_past));
  if (h_prep.size() > 0 && tau_prep > 0) w = std::max(w, bohr_max_of(h_prep));
  return w;
}

double Scenario::auto_dt() const {
  double rate = 20.0 * std::max(cutoff(), frequency_scale());
  double dt = 1.0 / rate;
  if (kind == Kind::Switched && switch_on.tau_s > 0.0)
    dt = std::min(dt, switch_on.tau_s / 20.0);
  return dt;
}

double Scenario::effective_dt() const {
  double dt = grid.dt > 0.0 ? grid.dt : auto_dt();
  if (kind == Kind::NonequilibriumPrepared && tau_prep > 0.0) {
    const double n = std::ceil(tau_prep / dt - 1e-9);
    dt = tau_prep / n;  // segment edge lands on the grid
  }
  return dt;
}

ops::HamiltonianSchedule Scenario::schedule() const {
  const Mat past = h_past.size() > 0 ? h_past : h_post;
  if (kind == Kind::NonequilibriumPrepared && tau_prep > 0.0) {
    std::vector<ops::HamiltonianSchedule::Segment> segs;
    segs.push_back({0.0, tau_prep, h_prep});
    segs.push_back({tau_prep, ops::schedule_open_end, h_post});
    return ops::HamiltonianSchedule(past, std::move(segs));
  }
  return ops::HamiltonianSchedule::constant(past, h_post);
}

coeff::DiamondCoefficient Scenario::coefficient() const {
  coeff::DiamondCoefficient c{
      coeff::Variant::Finite, coupling,         schedule(),
      bath::Correlation(bath_spec),             switch_on,
      coeff::QuadratureControl{}};
  switch (kind) {
    case Kind::Factorized:
      c.variant = coeff::Variant::Finite;
      break;
    case Kind::Switched:
      c.variant = coeff::Variant::Switched;
      break;
    case Kind::EquilibriumPrepared:
    case Kind::NonequilibriumPrepared:
      c.variant = coeff::Variant::Prepared;
      break;
  }
  return c;
}

liouville::Liouvillian Scenario::liouvillian() const {
  return liouville::Liouvillian(schedule(), {liouville::Channel{coupling, coefficient()}});
}

Mat Scenario::asymptotic_coefficient() const {
  const auto sched = schedule();
  const Mat& h_final = sched.segment(sched.segment_count() - 1).hamiltonian;
  return coeff::diamond_asymptotic(coupling, h_final, bath::Correlation(bath_spec));
}

void Scenario::validate_types() const {
  ops::require_hermitian(h_post, "Scenario h_post");
  ops::require_hermitian(coupling, "Scenario coupling");
  ops::require_density_matrix(rho_init, "Scenario rho_init");
  if (h_past.size() > 0) ops::require_hermitian(h_past, "Scenario h_past");
  if (h_prep.size() > 0) ops::require_hermitian(h_prep, "Scenario h_prep");
  if (kind == Kind::NonequilibriumPrepared && !(tau_prep > 0.0))
    throw std::invalid_argument("Scenario: tau_prep must be positive");
  if (kind == Kind::Switched && switch_on.tau_s < 0.0)
    throw std::invalid_argument("Scenario: tau_s must be non-negative");
  if (!(grid.t_max > 0.0)) throw std::invalid_argument("Scenario: t_max must be positive");
  if (ancilla_dim > 0 && dim() % ancilla_dim != 0)
    throw std::invalid_argument("Scenario: ancilla dimension must divide the total");
}

Scenario factorized(const Mat& h_post, const Mat& coupling, const Mat& rho_init,
                    const bath::BathSpec& bath, const Grid& grid) {
  Scenario s = base_scenario(Kind::Factorized, h_post, coupling, rho_init, bath, grid);
  s.label = "factorized";
  return s;
}

Scenario switched(const Mat& h_post, const Mat& coupling, const Mat& rho_init,
                  const bath::BathSpec& bath, const coeff::SwitchOn& sw, const Grid& grid) {
  Scenario s = base_scenario(Kind::Switched, h_post, coupling, rho_init, bath, grid);
  s.switch_on = sw;
  s.label = "switched";
  return s;
}

Scenario prepare_by_decoherence(const Mat& coupling, const Mat& rho_target,
                                const bath::BathSpec& bath, const Grid& grid) {
  ops::require_hermitian(coupling, "prepare_by_decoherence coupling");
  ops::require_density_matrix(rho_target, "prepare_by_decoherence target");
  Eigen::SelfAdjointEigenSolver<Mat> es(coupling);
  const Mat in_l_basis = es.eigenvectors().adjoint() * rho_target * es.eigenvectors();
  const Eigen::Index d = coupling.rows();
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      if (a != b && std::abs(in_l_basis(a, b)) > 1e-10)
        throw std::invalid_argument(
            "prepare_by_decoherence: target carries coherence in the coupling eigenbasis; "
            "only incoherent mixtures of its eigenstates survive");
  const Mat zero = Mat::Zero(d, d);
  Scenario s = base_scenario(Kind::EquilibriumPrepared, zero, coupling, rho_target, bath, grid);
  s.h_past = zero;
  s.label = "decoherence-prepared";

  // the stationary generator must leave every coupling eigenprojector invariant
  const Mat a_inf = coeff::diamond_asymptotic(coupling, zero, bath::Correlation(bath));
  const Mat couplings[] = {coupling};
  const Mat coefficients[] = {a_inf};
  const double scale = std::max(a_inf.norm() * coupling.norm(), 1e-300);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Mat p = ops::projector(es.eigenvectors().col(k));
    const Mat flow = liouville::apply_L2(couplings, coefficients, p);
    if (flow.norm() > 1e-10 * scale)
      throw std::logic_error(
          "prepare_by_decoherence: stationary generator moves a coupling eigenprojector");
  }
  return s;
}

std::pair<Scenario, PreparationReport> prepare_by_equilibration(
    const Mat& rho_target, const bath::BathSpec& bath, const Mat& h_post,
    const Mat& coupling, const Grid& grid) {
  bath.validate();
  if (bath.zero_temperature())
    throw std::invalid_argument(
        "prepare_by_equilibration: needs a finite temperature; "
        "use preparation by freezing for pure targets");
  ops::require_density_matrix(rho_target, "prepare_by_equilibration target");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho_target);
  const Eigen::VectorXd& p = es.eigenvalues();
  if (p.minCoeff() < 1e-14)
    throw std::invalid_argument(
        "prepare_by_equilibration: singular target state; use preparation by freezing");
  const Eigen::Index d = p.size();
  Eigen::VectorXd levels(d);
  for (Eigen::Index i = 0; i < d; ++i) levels(i) = -std::log(p(i)) / bath.beta;
  const Mat h_minus =
      es.eigenvectors() * levels.asDiagonal() * es.eigenvectors().adjoint();

  Scenario s =
      base_scenario(Kind::EquilibriumPrepared, h_post, coupling, rho_target, bath, grid);
  s.h_past = h_minus;
  s.label = "equilibration-prepared";

  PreparationReport report = validate(s);
  return {std::move(s), std::move(report)};
}

Scenario prepare_by_freezing(const Vec& psi_target, const bath::BathSpec& bath,
                             const Mat& h_post, const Mat& coupling, const Grid& grid,
                             double freeze_depth) {
  bath.validate();
  if (!bath.zero_temperature())
    throw std::invalid_argument(
        "prepare_by_freezing: requires a zero-temperature environment");
  if (std::abs(psi_target.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("prepare_by_freezing: target state must be normalized");
  const double depth = freeze_depth > 0.0 ? freeze_depth : bath.density.cutoff / 100.0;
  const Mat rho0 = ops::projector(psi_target);
  Scenario s = base_scenario(Kind::EquilibriumPrepared, h_post, coupling, rho0, bath, grid);
  s.h_past = -depth * rho0;
  s.label = "freezing-prepared";
  return s;
}

Mat flipping_hamiltonian(const Vec& psi_target, const Vec& ground, double tau_prep) {
  if (!(tau_prep > 0.0))
    throw std::invalid_argument("flipping_hamiltonian: tau_prep must be positive");
  if (std::abs(psi_target.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("flipping_hamiltonian: psi_target must be normalized");
  if (std::abs(ground.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("flipping_hamiltonian: ground state must be normalized");
  const ops::cplx overlap = ground.dot(psi_target);
  if (std::abs(overlap.imag()) > 1e-10)
    throw std::invalid_argument(
        "flipping_hamiltonian: <ground|psi_target> must be real (phase convention)");
  return (pi / (2.0 * tau_prep)) *
         (psi_target * ground.adjoint() + ground * psi_target.adjoint());
}

Mat swap_hamiltonian(Eigen::Index dim, double tau_prep) {
  if (!(tau_prep > 0.0))
    throw std::invalid_argument("swap_hamiltonian: tau_prep must be positive");
  if (dim < 1) throw std::invalid_argument("swap_hamiltonian: dim must be positive");
  Mat swap = Mat::Zero(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      swap(i * dim + j, j * dim + i) = 1.0;
  return (pi / (2.0 * tau_prep)) * swap;
}

Scenario flip_prepared(const Vec& psi_target, double tau_prep, const bath::BathSpec& bath,
                       const Mat& h_post, const Mat& coupling, const Grid& grid) {
  ops::require_hermitian(h_post, "flip_prepared h_post");
  Eigen::SelfAdjointEigenSolver<Mat> es(h_post);
  const Vec ground = es.eigenvectors().col(0);
  const Mat h_prep = flipping_hamiltonian(psi_target, ground, tau_prep);
  const Mat rho0 = gibbs_state(h_post, bath.beta);
  Scenario s = base_scenario(Kind::NonequilibriumPrepared, h_post, coupling, rho0, bath, grid);
  s.h_past = h_post;
  s.h_prep = h_prep;
  s.tau_prep = tau_prep;
  s.label = "flip-prepared";
  return s;
}

Scenario swap_prepared(const Vec& psi_ancilla, double tau_prep, const bath::BathSpec& bath,
                       const Mat& h_post, const Mat& coupling, const Grid& grid,
                       double freeze_depth) {
  ops::require_hermitian(h_post, "swap_prepared h_post");
  ops::require_same_dim(h_post, coupling, "swap_prepared");
  const Eigen::Index d = h_post.rows();
  if (psi_ancilla.size() != d)
    throw std::invalid_argument("swap_prepared: ancilla state dimension mismatch");
  if (std::abs(psi_ancilla.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("swap_prepared: ancilla state must be normalized");
  const double depth = freeze_depth > 0.0 ? freeze_depth : bath.density.cutoff / 100.0;
  const Mat id = ops::identity(d);
  const Mat h_anc = -depth * ops::projector(psi_ancilla);
  const Mat h_past = ops::kron(h_post, id) + ops::kron(id, h_anc);
  const Mat rho0 = ops::kron(gibbs_state(h_post, bath.beta), gibbs_state(h_anc, bath.beta));
  Scenario s = base_scenario(Kind::NonequilibriumPrepared, ops::kron(h_post, id),
                             ops::kron(coupling, id), rho0, bath, grid);
  s.h_past = h_past;
  s.h_prep = swap_hamiltonian(d, tau_prep);
  s.tau_prep = tau_prep;
  s.ancilla_dim = d;
  if (d == 2) s.excited_projector = excited_projector_of(h_post);
  s.label = "swap-prepared";
  return s;
}

PreparationReport validate(const Scenario& s) {
  PreparationReport report;
  const double lam = s.cutoff();
  const double omega = s.frequency_scale();
  if (omega > 0.1 * lam) {
    report.frequency_ok = false;
    report.warnings.push_back(
        "system frequencies are not small against the cutoff (" +
        std::to_string(omega / lam) + " of cutoff); jolt cancellation degrades");
  }
  if (s.kind == Kind::Switched) {
    const double tau_s = s.switch_on.tau_s;
    if (!(tau_s > 0.0) || 1.0 / (tau_s * lam) > 0.1) {
      report.switch_ok = false;
      report.warnings.push_back(
          "switch-on is fast on the bath memory scale; expect a cutoff-scale jolt");
    }
  }
  if (s.kind == Kind::NonequilibriumPrepared && s.tau_prep > 0.0 &&
      1.0 / (s.tau_prep * lam) > 0.1) {
    report.prep_time_ok = false;
    report.warnings.push_back(
        "preparation window is fast on the bath memory scale; expect a jolt");
  }
  if (s.kind == Kind::EquilibriumPrepared && !s.bath_spec.zero_temperature() &&
      s.h_past.size() > 0) {
    // populations of the target over levels connected by the coupling
    Eigen::SelfAdjointEigenSolver<Mat> es(s.h_past);
    const Mat l_tilde = es.eigenvectors().adjoint() * s.coupling * es.eigenvectors();
    const Mat rho_tilde = es.eigenvectors().adjoint() * s.rho_init * es.eigenvectors();
    const double l_scale = std::max(l_tilde.cwiseAbs().maxCoeff(), 1e-300);
    double ratio = 1.0;
    const Eigen::Index d = l_tilde.rows();
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        if (a == b || std::abs(l_tilde(a, b)) <= 1e-10 * l_scale) continue;
        const double pa = std::max(rho_tilde(a, a).real(), 1e-300);
        const double pb = std::max(rho_tilde(b, b).real(), 1e-300);
        ratio = std::max(ratio, pa / pb);
      }
    report.adiabatic_ratio = ratio;
    // compare in log space; exp(beta * cutoff) overflows for cold baths
    if (std::log(ratio) > s.bath_spec.beta * lam - std::log(100.0)) {
      report.adiabatic_ok = false;
      report.warnings.push_back("population ratio " + std::to_string(ratio) +
                                " is outside the adiabatic preparation regime");
    }
  }
  return report;
}

}  // namespace tclprep::scenario

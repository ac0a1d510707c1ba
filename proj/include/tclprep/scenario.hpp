// scenario.hpp — Declarative simulation scenarios and initial-state preparation recipes

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tclprep/liouvillian.hpp"

namespace tclprep::scenario {

using ops::Mat;
using ops::Vec;

enum class Kind { Factorized, Switched, EquilibriumPrepared, NonequilibriumPrepared };

struct Grid {
  double t_max = 5.0;
  double dt = 0.0;        // 0 = derived from the cutoff and level splittings
  int store_stride = 0;   // 0 = auto; the jolt window is always stored at full resolution
  bool error_check = true;
};

struct Scenario {
  Kind kind = Kind::Factorized;
  Mat h_post;             // post-preparation system Hamiltonian
  Mat coupling;           // system side of the interaction
  bath::BathSpec bath_spec;
  Mat rho_init;           // zeroth-order reduced state at t = 0
  Mat excited_projector;  // designated projector for decay-rate reporting (two-level)
  coeff::SwitchOn switch_on;     // Switched only
  Mat h_past;                    // prepared kinds
  Mat h_prep;                    // NonequilibriumPrepared window Hamiltonian
  double tau_prep = 0.0;         // NonequilibriumPrepared window length
  Eigen::Index ancilla_dim = 0;  // composite system (x) ancilla when > 0
  Grid grid;
  std::string label;

  Eigen::Index dim() const { return h_post.rows(); }
  Eigen::Index system_dim() const { return ancilla_dim > 0 ? dim() / ancilla_dim : dim(); }
  double cutoff() const { return bath_spec.density.cutoff; }

  // largest level splitting across the past branch and all segments
  double frequency_scale() const;
  double auto_dt() const;
  // grid.dt or auto_dt, snapped so segment edges fall on the integration grid
  double effective_dt() const;

  ops::HamiltonianSchedule schedule() const;
  coeff::DiamondCoefficient coefficient() const;
  liouville::Liouvillian liouvillian() const;
  // stationary coefficient of the final segment Hamiltonian
  Mat asymptotic_coefficient() const;
  void validate_types() const;
};

struct PreparationReport {
  double adiabatic_ratio = 1.0;  // max/min target populations over coupling-connected levels
  bool frequency_ok = true;      // system splittings << cutoff
  bool switch_ok = true;         // 1/tau_s << cutoff
  bool prep_time_ok = true;      // 1/tau_P << cutoff
  bool adiabatic_ok = true;
  std::vector<std::string> warnings;
};

Scenario factorized(const Mat& h_post, const Mat& coupling, const Mat& rho_init,
                    const bath::BathSpec& bath, const Grid& grid);

Scenario switched(const Mat& h_post, const Mat& coupling, const Mat& rho_init,
                  const bath::BathSpec& bath, const coeff::SwitchOn& sw, const Grid& grid);

// past Hamiltonian deactivated; any target that is an incoherent mixture in the
// coupling eigenbasis is left invariant
Scenario prepare_by_decoherence(const Mat& coupling, const Mat& rho_target,
                                const bath::BathSpec& bath, const Grid& grid);

// past Hamiltonian -log(rho_target)/beta so the bath relaxes the system onto the
// target; requires a finite temperature and a full-rank target
std::pair<Scenario, PreparationReport> prepare_by_equilibration(
    const Mat& rho_target, const bath::BathSpec& bath, const Mat& h_post,
    const Mat& coupling, const Grid& grid);

// past Hamiltonian with the pure target as its ground state; requires a
// zero-temperature bath.  freeze_depth = 0 selects cutoff / 100.
Scenario prepare_by_freezing(const Vec& psi_target, const bath::BathSpec& bath,
                             const Mat& h_post, const Mat& coupling, const Grid& grid,
                             double freeze_depth = 0.0);

// (pi / 2 tau) (|psi><g| + |g><psi|); rotates the past ground state onto psi
Mat flipping_hamiltonian(const Vec& psi_target, const Vec& ground, double tau_prep);

// (pi / 2 tau) SWAP on the composite system (x) ancilla space
Mat swap_hamiltonian(Eigen::Index dim, double tau_prep);

// equilibrate under h_post, then drive the ground state onto psi_target during
// a finite window [0, tau_prep]
Scenario flip_prepared(const Vec& psi_target, double tau_prep, const bath::BathSpec& bath,
                       const Mat& h_post, const Mat& coupling, const Grid& grid);

// equilibrate the system, freeze the ancilla in psi_ancilla, swap during
// [0, tau_prep]; the bath couples to the original system factor only
Scenario swap_prepared(const Vec& psi_ancilla, double tau_prep, const bath::BathSpec& bath,
                       const Mat& h_post, const Mat& coupling, const Grid& grid,
                       double freeze_depth = 0.0);

// jolt-safety flags and adiabaticity; warnings only, never blocks execution
PreparationReport validate(const Scenario& s);

// thermal state of h at inverse temperature beta (ground-space projector at beta = inf)
Mat gibbs_state(const Mat& h, double beta);

// projector onto the top eigenvector of a two-level Hamiltonian
Mat excited_projector_of(const Mat& h_post);

}  // namespace tclprep::scenario

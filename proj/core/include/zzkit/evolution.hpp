#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "zzkit/driven_system.hpp"

namespace zzkit::dynamics {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;       // s; 0 picks a default from the Hamiltonian
  double min_step = 1e-18;     // s; underflow raises StiffnessError
  int steps_per_period = 40;   // resolution guard for oscillating terms
  double norm_tolerance = 1e-6;
  std::size_t max_steps = 200'000'000;
};

struct SimulationResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> populations;  // per time, per basis state
  std::vector<std::string> basis_labels;
  std::vector<Eigen::MatrixXcd> states;      // kets (columns) or density matrices, when kept
  double max_norm_drift = 0.0;   // closed systems: max | <psi|psi> - 1 |
  double max_trace_drift = 0.0;  // open systems: max | tr rho - 1 |
  double min_eigenvalue = 0.0;   // open systems: smallest eigenvalue of rho seen on the grid
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;

  /// Probability that `qubit` (1 or 2) is excited at output index `k`.
  double excited(std::size_t k, int qubit) const;
  std::size_t basis_index(const std::string& label) const;
};

/// Adaptive Dormand-Prince 5(4) integration of i d/dt psi = 2 pi H(t) psi.
/// Steps land exactly on grid times and pulse edges. A step is rejected when
/// its norm change exceeds norm_tolerance times its share of the time span;
/// StiffnessError when the step underflows min_step.
SimulationResult evolve_schrodinger(const TimeDependentHamiltonian& h, const Eigen::VectorXcd& psi0,
                                    const std::vector<double>& grid, const IntegratorOptions& opts = {},
                                    bool keep_states = false);

/// Collapse operator with its rate already folded in: L = sqrt(rate) * op.
struct CollapseOperator {
  Eigen::MatrixXcd op;
};

/// Per-qubit T1 and optional T2 (seconds, infinity disables).
struct DissipationSpec {
  std::array<double, 2> t1{0.0, 0.0};
  std::array<double, 2> t2{0.0, 0.0};  // 0 means "not given": no pure dephasing
  double state_prep_error = 0.0;        // uniform admixture of the maximally mixed state

  void validate() const;
  /// sqrt(1/T1) a_i and sqrt(2 gamma_phi) n_i with gamma_phi = 1/T2 - 1/(2 T1).
  std::vector<CollapseOperator> collapse_operators(const HilbertSpace& space) const;
};

/// Lindblad master equation with the same integrator. Throws PositivityError
/// when an eigenvalue of rho drops below -1e-8 on the grid.
SimulationResult evolve_lindblad(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                 const std::vector<CollapseOperator>& collapse,
                                 const std::vector<double>& grid, const IntegratorOptions& opts = {},
                                 bool keep_states = false);

SimulationResult evolve_lindblad(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                 const DissipationSpec& dissipation, const std::vector<double>& grid,
                                 const IntegratorOptions& opts = {}, bool keep_states = false);

/// Basis ket |n1 n2>.
Eigen::VectorXcd basis_state(const HilbertSpace& space, int n1, int n2);

}  // namespace zzkit::dynamics

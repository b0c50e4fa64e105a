#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zzkit/circuit.hpp"
#include "zzkit/differential_evolution.hpp"

namespace zzkit::optimizer {

/// Full parameter set of a two-transmon design. Design variables overwrite
/// the matching fields by name: c1, c2 (shunts, F), c12 (F), ej1, ej2
/// (E_J,Sigma in Hz), g (Hz; when set, replaces the capacitive exchange).
struct DesignPoint {
  double c1 = 0.0;
  double c2 = 0.0;
  double c12 = 0.0;
  double ej1 = 0.0;
  double ej2 = 0.0;
  std::optional<double> g;
  double d1 = 0.0;
  double d2 = 0.0;
  double flux1 = 0.0;  // in units of the flux quantum
  double flux2 = 0.0;

  double ec1() const;
  double ec2() const;
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
};

/// Parameters of the fixture-style description (E_C, E_J) mapped to a design.
DesignPoint design_from_transmons(const circuit::TransmonSpec& q1, const circuit::TransmonSpec& q2, double c12);

struct ConstraintSet {
  std::pair<double, double> freq_band_q1{0.0, 0.0};  // C1, Hz
  std::pair<double, double> freq_band_q2{0.0, 0.0};
  double min_abs_anharmonicity = 0.0;  // C2, Hz
  // C3: bounds on capacitance variables; variables missing here use their
  // search bounds.
  std::map<std::string, std::pair<double, double>> capacitance_bounds;
  double min_ej_ec_ratio = 0.0;   // C4
  double max_j_over_delta = 0.0;  // C5

  void validate() const;
};

enum class ObjectiveMode { abs_zeta, signed_zeta };

ObjectiveMode parse_objective_mode(const std::string& name);
std::string to_string(ObjectiveMode mode);

struct OptimizationProblem {
  std::vector<Variable> variables;
  DesignPoint base;
  int n_exc = 4;
  ConstraintSet constraints;
  DeParams de;
  ObjectiveMode objective = ObjectiveMode::abs_zeta;

  void validate() const;
};

struct Candidate {
  std::vector<double> x;
  std::optional<double> zeta;  // Hz
  bool feasible = false;
  std::map<std::string, double> violations;  // slacks, <= 0 when satisfied
  std::string failure;
  // Working point details, filled when the spectrum was evaluated.
  double omega1 = 0.0;
  double omega2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double g = 0.0;
};

DesignPoint apply_variables(const OptimizationProblem& problem, const std::vector<double>& x);

/// Builds the Kerr model for x, diagonalizes it with n_exc total excitations,
/// and checks C1-C5. Numeric failures mark the candidate infeasible.
Candidate evaluate_candidate(const std::vector<double>& x, const OptimizationProblem& problem);

struct OptimizationResult {
  Candidate best;
  std::vector<GenerationRecord> history;  // best_objective is the signed or |zeta| objective
  std::size_t evaluations = 0;
};

OptimizationResult optimize(const OptimizationProblem& problem,
                            const std::function<void(const std::vector<double>&)>& observer = {});

}  // namespace zzkit::optimizer

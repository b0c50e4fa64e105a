#include "zzkit/design.hpp"

#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/labeling.hpp"
#include "zzkit/units.hpp"

namespace zzkit::optimizer {

double DesignPoint::ec1() const { return units::charging_energy_hz(c1 + c12); }
double DesignPoint::ec2() const { return units::charging_energy_hz(c2 + c12); }

void DesignPoint::set(const std::string& name, double value) {
  if (name == "c1") c1 = value;
  else if (name == "c2") c2 = value;
  else if (name == "c12") c12 = value;
  else if (name == "ej1") ej1 = value;
  else if (name == "ej2") ej2 = value;
  else if (name == "g") g = value;
  else throw InvalidArgument(fmt::format("unknown design variable '{}' (expected c1, c2, c12, ej1, ej2, g)", name));
}

double DesignPoint::get(const std::string& name) const {
  if (name == "c1") return c1;
  if (name == "c2") return c2;
  if (name == "c12") return c12;
  if (name == "ej1") return ej1;
  if (name == "ej2") return ej2;
  if (name == "g") return g.value_or(0.0);
  throw InvalidArgument(fmt::format("unknown design variable '{}'", name));
}

DesignPoint design_from_transmons(const circuit::TransmonSpec& q1, const circuit::TransmonSpec& q2, double c12) {
  DesignPoint p;
  p.c12 = c12;
  p.c1 = circuit::shunt_from_ec(q1.ec, c12);
  p.c2 = circuit::shunt_from_ec(q2.ec, c12);
  p.ej1 = q1.squid.ej_sum;
  p.ej2 = q2.squid.ej_sum;
  p.d1 = q1.squid.asymmetry_d;
  p.d2 = q2.squid.asymmetry_d;
  p.flux1 = q1.squid.flux;
  p.flux2 = q2.squid.flux;
  return p;
}

void ConstraintSet::validate() const {
  for (const auto* band : {&freq_band_q1, &freq_band_q2}) {
    if (!(band->first > 0.0) || !(band->first < band->second)) {
      throw InvalidArgument("frequency bands need 0 < lower < upper");
    }
  }
  if (!(min_abs_anharmonicity > 0.0) || !(min_ej_ec_ratio > 0.0) || !(max_j_over_delta > 0.0)) {
    throw InvalidArgument("constraint thresholds must be positive");
  }
  for (const auto& [name, b] : capacitance_bounds) {
    if (!(b.first <= b.second)) throw InvalidArgument(fmt::format("capacitance bounds for '{}' are inverted", name));
  }
}

ObjectiveMode parse_objective_mode(const std::string& name) {
  if (name == "abs_zeta") return ObjectiveMode::abs_zeta;
  if (name == "signed_zeta") return ObjectiveMode::signed_zeta;
  throw InvalidArgument(fmt::format("unknown objective '{}'", name));
}

std::string to_string(ObjectiveMode mode) { return mode == ObjectiveMode::abs_zeta ? "abs_zeta" : "signed_zeta"; }

void OptimizationProblem::validate() const {
  if (variables.empty()) throw InvalidArgument("no design variables");
  DesignPoint probe = base;
  for (const auto& v : variables) probe.set(v.name, v.low);
  if (n_exc < 2) throw InvalidArgument("n_exc must be >= 2 to reach |11>");
  constraints.validate();
  de.validate();
}

DesignPoint apply_variables(const OptimizationProblem& problem, const std::vector<double>& x) {
  if (x.size() != problem.variables.size()) throw DimensionMismatchError("x does not match the variable list");
  DesignPoint p = problem.base;
  for (std::size_t i = 0; i < x.size(); ++i) p.set(problem.variables[i].name, x[i]);
  return p;
}

namespace {

// Slack normalization for the total violation, so Hz and ratios mix.
double scale_of(const std::string& key, const ConstraintSet& c, const OptimizationProblem& problem) {
  if (key == "C1_q1") return c.freq_band_q1.second - c.freq_band_q1.first;
  if (key == "C1_q2") return c.freq_band_q2.second - c.freq_band_q2.first;
  if (key.rfind("C2", 0) == 0) return c.min_abs_anharmonicity;
  if (key.rfind("C4", 0) == 0) return c.min_ej_ec_ratio;
  if (key == "C5") return c.max_j_over_delta;
  if (key.rfind("C3_", 0) == 0) {
    const std::string name = key.substr(3);
    const auto it = c.capacitance_bounds.find(name);
    if (it != c.capacitance_bounds.end() && it->second.second > it->second.first) {
      return it->second.second - it->second.first;
    }
    for (const auto& v : problem.variables) {
      if (v.name == name && v.high > v.low) return v.high - v.low;
    }
    return std::abs(problem.base.get(name)) + 1e-18;
  }
  return 1.0;
}

}  // namespace

Candidate evaluate_candidate(const std::vector<double>& x, const OptimizationProblem& problem) {
  Candidate cand;
  cand.x = x;
  const ConstraintSet& c = problem.constraints;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = problem.variables[i];
    if (x[i] < v.low || x[i] > v.high) {
      throw InvalidArgument(fmt::format("variable '{}' = {} lies outside [{}, {}]", v.name, x[i], v.low, v.high));
    }
  }
  const DesignPoint p = apply_variables(problem, x);

  // C3 needs no spectrum.
  for (const std::string name : {"c1", "c2", "c12"}) {
    std::pair<double, double> b;
    if (const auto it = c.capacitance_bounds.find(name); it != c.capacitance_bounds.end()) {
      b = it->second;
    } else {
      bool found = false;
      for (const auto& v : problem.variables) {
        if (v.name == name) {
          b = {v.low, v.high};
          found = true;
        }
      }
      if (!found) continue;
    }
    const double val = p.get(name);
    cand.violations["C3_" + name] = std::max(b.first - val, val - b.second);
  }

  try {
    circuit::TransmonSpec q1;
    q1.squid = {p.ej1, p.d1, p.flux1};
    q1.ec = p.ec1();
    q1.n_levels = problem.n_exc + 1;
    circuit::TransmonSpec q2;
    q2.squid = {p.ej2, p.d2, p.flux2};
    q2.ec = p.ec2();
    q2.n_levels = problem.n_exc + 1;
    circuit::Coupling coupling;
    coupling.c12 = p.c12;
    coupling.shunt_caps = {p.c1, p.c2};
    coupling.g_hz = p.g;
    const circuit::KerrParams kp = circuit::two_transmon_kerr(q1, q2, coupling);
    cand.omega1 = kp.mode_freqs[0];
    cand.omega2 = kp.mode_freqs[1];
    cand.alpha1 = kp.self_kerr[0];
    cand.alpha2 = kp.self_kerr[1];
    cand.g = kp.exchange_g;

    const int levels = problem.n_exc + 1;
    const auto h = spectrum::build_hamiltonian(kp, {levels, levels}, problem.n_exc);
    cand.zeta = spectrum::zeta_exact(spectrum::diagonalize_and_label(h));

    auto band = [](double f, std::pair<double, double> b) { return std::max(b.first - f, f - b.second); };
    cand.violations["C1_q1"] = band(cand.omega1, c.freq_band_q1);
    cand.violations["C1_q2"] = band(cand.omega2, c.freq_band_q2);
    cand.violations["C2_q1"] = c.min_abs_anharmonicity - std::abs(cand.alpha1);
    cand.violations["C2_q2"] = c.min_abs_anharmonicity - std::abs(cand.alpha2);
    cand.violations["C4_q1"] = c.min_ej_ec_ratio - circuit::effective_josephson_energy(q1.squid) / q1.ec;
    cand.violations["C4_q2"] = c.min_ej_ec_ratio - circuit::effective_josephson_energy(q2.squid) / q2.ec;
    const double delta = std::abs(cand.omega1 - cand.omega2);
    cand.violations["C5"] = delta > 0.0 ? std::abs(cand.g) / delta - c.max_j_over_delta
                                        : (cand.g == 0.0 ? -c.max_j_over_delta : 1.0);
  } catch (const Error& e) {
    cand.failure = e.what();
    cand.zeta.reset();
  }
  cand.feasible = cand.failure.empty();
  for (const auto& [key, slack] : cand.violations) {
    if (slack > 0.0) cand.feasible = false;
  }
  return cand;
}

OptimizationResult optimize(const OptimizationProblem& problem,
                            const std::function<void(const std::vector<double>&)>& observer) {
  problem.validate();
  auto objective = [&](const std::vector<double>& x) {
    const Candidate cand = evaluate_candidate(x, problem);
    Evaluation e;
    e.feasible = cand.feasible;
    e.violations = cand.violations;
    e.failure = cand.failure;
    if (cand.zeta) e.objective = problem.objective == ObjectiveMode::abs_zeta ? std::abs(*cand.zeta) : *cand.zeta;
    for (const auto& [key, slack] : cand.violations) {
      if (slack > 0.0) e.total_violation += slack / scale_of(key, problem.constraints, problem);
    }
    // Failed evaluations rank behind every evaluated infeasible point.
    if (!cand.failure.empty()) e.total_violation += 1e6;
    return e;
  };
  const DeResult de = differential_evolution(problem.variables, objective, problem.de, observer);
  OptimizationResult out;
  out.best = evaluate_candidate(de.best.x, problem);
  out.history = de.history;
  out.evaluations = de.evaluations;
  return out;
}

}  // namespace zzkit::optimizer

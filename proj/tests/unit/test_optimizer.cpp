#include <doctest.h>

#include <cmath>
#include <limits>

#include "zzkit/config.hpp"
#include "zzkit/design.hpp"
#include "zzkit/differential_evolution.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/fixtures.hpp"
#include "zzkit/sweeps.hpp"

using namespace zzkit;
using namespace zzkit::optimizer;
using doctest::Approx;

namespace {

Evaluation rosenbrock(const std::vector<double>& x) {
  Evaluation e;
  e.objective = -(x[0] - 1.0) * (x[0] - 1.0) - 100.0 * std::pow(x[1] - x[0] * x[0], 2);
  return e;
}

const std::vector<Variable> rosen_vars{{"a", -2.0, 2.0}, {"b", -1.0, 3.0}};

ConstraintSet loose_constraints() {
  ConstraintSet c;
  c.freq_band_q1 = {1e9, 20e9};
  c.freq_band_q2 = {1e9, 20e9};
  c.min_abs_anharmonicity = 100e6;
  c.min_ej_ec_ratio = 20.0;
  c.max_j_over_delta = 0.1;
  return c;
}

// Dispersive pair, about 6.3 and 4.3 GHz, coupling set by g directly.
OptimizationProblem g_problem(double g_high) {
  OptimizationProblem p;
  const double ec1 = 300e6, ec2 = 280e6, c12 = 1e-15;
  p.base.c12 = c12;
  p.base.c1 = circuit::shunt_from_ec(ec1, c12);
  p.base.c2 = circuit::shunt_from_ec(ec2, c12);
  p.base.ej1 = circuit::solve_ej_for_frequency(6.3e9, ec1);
  p.base.ej2 = circuit::solve_ej_for_frequency(4.3e9, ec2);
  p.variables = {{"g", 0.0, g_high}};
  p.constraints = loose_constraints();
  p.de.generations = 60;
  p.de.seed = 3;
  return p;
}

}  // namespace

TEST_CASE("reflection folds into bounds") {
  CHECK(reflect_into(1.5, 0.0, 1.0) == Approx(0.5));
  CHECK(reflect_into(-0.25, 0.0, 1.0) == Approx(0.25));
  CHECK(reflect_into(3.25, 0.0, 1.0) == Approx(0.75));
  CHECK(reflect_into(0.3, 0.0, 1.0) == 0.3);
  CHECK(reflect_into(7.0, 2.0, 2.0) == 2.0);
}

TEST_CASE("selection rule") {
  Evaluation feas_low{1.0, true, 0.0, {}, {}};
  Evaluation feas_high{2.0, true, 0.0, {}, {}};
  Evaluation inf_small{9.0, false, 0.1, {}, {}};
  Evaluation inf_large{9.0, false, 0.5, {}, {}};
  CHECK(better_or_equal(feas_high, feas_low, false));
  CHECK_FALSE(better_or_equal(feas_low, feas_high, false));
  CHECK(better_or_equal(feas_low, feas_low, false));
  CHECK_FALSE(better_or_equal(inf_small, feas_low, false));
  CHECK(better_or_equal(feas_low, inf_small, false));
  CHECK(better_or_equal(inf_small, inf_large, false));
  CHECK_FALSE(better_or_equal(inf_large, inf_small, false));
  CHECK_FALSE(better_or_equal(inf_small, inf_large, true));
  CHECK_FALSE(better_or_equal(inf_small, feas_low, true));
}

TEST_CASE("DE parameter validation") {
  DeParams p;
  p.f = 2.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.cr = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.generations = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("Rosenbrock optimum") {
  DeParams p;
  p.population = 40;
  p.generations = 400;
  p.seed = 7;
  const DeResult r = differential_evolution(rosen_vars, rosenbrock, p);
  CHECK(r.best.x[0] == Approx(1.0).epsilon(1e-3));
  CHECK(r.best.x[1] == Approx(1.0).epsilon(1e-3));
  CHECK(r.history.size() == 401);
}

TEST_CASE("every evaluated point respects the bounds and history is monotone") {
  DeParams p;
  p.population = 20;
  p.generations = 50;
  p.seed = 11;
  std::size_t seen = 0;
  bool inside = true;
  const DeResult r = differential_evolution(rosen_vars, rosenbrock, p, [&](const std::vector<double>& x) {
    ++seen;
    for (std::size_t i = 0; i < x.size(); ++i) inside = inside && x[i] >= rosen_vars[i].low && x[i] <= rosen_vars[i].high;
  });
  CHECK(inside);
  CHECK(seen == r.evaluations);
  CHECK(seen == 20u * 51u);
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    CHECK(r.history[g].best_objective >= r.history[g - 1].best_objective);
  }
}

TEST_CASE("seed reproducibility and thread independence") {
  DeParams p;
  p.population = 16;
  p.generations = 30;
  p.seed = 5;
  const DeResult a = differential_evolution(rosen_vars, rosenbrock, p);
  const DeResult b = differential_evolution(rosen_vars, rosenbrock, p);
  p.threads = 4;
  const DeResult c = differential_evolution(rosen_vars, rosenbrock, p);
  CHECK(a.best.x == b.best.x);
  CHECK(a.best.x == c.best.x);
  REQUIRE(a.history.size() == c.history.size());
  for (std::size_t g = 0; g < a.history.size(); ++g) CHECK(a.history[g].best_objective == c.history[g].best_objective);
  p.seed = 6;
  p.threads = 1;
  CHECK(differential_evolution(rosen_vars, rosenbrock, p).best.x != a.best.x);
}

TEST_CASE("degenerate bounds return the pinned point after one generation") {
  DeParams p;
  p.population = 6;
  p.seed = 1;
  const DeResult r = differential_evolution({{"a", 0.5, 0.5}, {"b", 0.2, 0.2}}, rosenbrock, p);
  CHECK(r.best.x == std::vector<double>{0.5, 0.2});
  CHECK(r.history.size() == 2);
}

TEST_CASE("no feasible point") {
  DeParams p;
  p.population = 6;
  p.generations = 3;
  auto never = [](const std::vector<double>& x) {
    Evaluation e;
    e.feasible = false;
    e.total_violation = 1.0 + x[0] * x[0];
    return e;
  };
  CHECK_THROWS_AS(differential_evolution({{"a", -1.0, 1.0}}, never, p), NoFeasibleCandidateError);
}

TEST_CASE("infeasible population evolves toward feasibility") {
  DeParams p;
  p.population = 10;
  p.generations = 40;
  p.seed = 2;
  // Feasible only for x > 0.9; violation shrinks toward it.
  auto edge = [](const std::vector<double>& x) {
    Evaluation e;
    e.objective = -x[0];
    e.feasible = x[0] > 0.9;
    e.total_violation = e.feasible ? 0.0 : 0.9 - x[0];
    return e;
  };
  const DeResult r = differential_evolution({{"a", -10.0, 1.0}}, edge, p);
  CHECK(r.best.eval.feasible);
  CHECK(r.best.x[0] == Approx(0.9).epsilon(1e-3));
}

TEST_CASE("ZZ grows with g up to the upper bound") {
  const OptimizationProblem prob = g_problem(100e6);
  // Dense scan oracle: |zeta| rises monotonically in g.
  double last = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const Candidate c = evaluate_candidate({i * 100e6 / 40}, prob);
    REQUIRE(c.feasible);
    CHECK(std::abs(*c.zeta) > last);
    last = std::abs(*c.zeta);
  }
  const OptimizationResult r = optimize(prob);
  CHECK(r.best.feasible);
  CHECK(r.best.x[0] >= 100e6 - 100e6 / 40);
  CHECK(std::abs(*r.best.zeta) == Approx(last).epsilon(1e-3));
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    CHECK(r.history[g].best_objective >= r.history[g - 1].best_objective);
  }
}

TEST_CASE("candidate evaluation reports constraint slacks") {
  OptimizationProblem prob = g_problem(100e6);
  prob.constraints.min_ej_ec_ratio = 1000.0;
  const Candidate c = evaluate_candidate({50e6}, prob);
  CHECK_FALSE(c.feasible);
  CHECK(c.violations.at("C4_q1") > 0.0);
  CHECK(c.violations.at("C5") < 0.0);
  const Candidate again = evaluate_candidate({50e6}, prob);
  CHECK(again.zeta == c.zeta);
  CHECK(again.violations == c.violations);
  CHECK_THROWS_AS(evaluate_candidate({200e6}, prob), InvalidArgument);

  prob.constraints.min_ej_ec_ratio = 20.0;
  prob.constraints.max_j_over_delta = 0.01;
  const Candidate strong = evaluate_candidate({90e6}, prob);
  CHECK_FALSE(strong.feasible);
  CHECK(strong.violations.at("C5") > 0.0);
}

TEST_CASE("chip-1 working point is feasible and agrees with the ZZ sweep") {
  const io::DeviceFixture fx = io::load_fixture(io::resolve_fixture("chip1"));
  io::CircuitDescription dev = io::circuit_from_fixture(fx);
  const double delta = 1.5e9;
  const double w1 = circuit::transmon_spectrum(dev.qubits[0]).omega01;

  io::ZzSweepConfig zz;
  zz.device = dev;
  zz.delta_hz = {delta};
  zz.mode = io::DeltaMode::flux;
  zz.levels = 5;
  zz.max_excitation = 4;
  const auto rows = io::run_zz_sweep(zz);
  REQUIRE(rows.at(0).error.empty());

  circuit::TransmonSpec q2 = dev.qubits[1];
  q2.squid.flux = circuit::flux_for_frequency(q2, w1 - delta);
  OptimizationProblem prob;
  prob.base = design_from_transmons(dev.qubits[0], q2, dev.coupling.c12);
  prob.variables = {{"c12", prob.base.c12, prob.base.c12}};
  prob.constraints.freq_band_q1 = {6.0e9, 6.6e9};
  prob.constraints.freq_band_q2 = {4.5e9, 5.0e9};
  prob.constraints.min_abs_anharmonicity = 250e6;
  prob.constraints.min_ej_ec_ratio = 30.0;
  prob.constraints.max_j_over_delta = 0.2;
  const Candidate c = evaluate_candidate({prob.base.c12}, prob);
  CHECK(c.feasible);
  REQUIRE(c.zeta);
  CHECK(*c.zeta == Approx(rows[0].zeta_exact_hz).epsilon(0.1));
}

TEST_CASE("strict mode keeps an infeasible population frozen") {
  OptimizationProblem prob = g_problem(100e6);
  prob.constraints.freq_band_q1 = {12e9, 13e9};
  prob.de.generations = 3;
  prob.de.strict = true;
  CHECK_THROWS_AS(optimize(prob), NoFeasibleCandidateError);
}

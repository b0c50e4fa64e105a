#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace zzkit::optimizer {

struct Variable {
  std::string name;
  double low = 0.0;
  double high = 0.0;  // low == high pins the variable
};

struct DeParams {
  int population = 0;  // 0 picks 15 * dim (at least 4)
  int generations = 200;
  double f = 0.7;
  double cr = 0.9;
  std::uint64_t seed = 0;
  // Strict rule: an infeasible trial never replaces its target, even when the
  // target is itself infeasible. Default is feasibility-ranked selection.
  bool strict = false;
  int threads = 1;

  void validate() const;
};

/// Result of one objective evaluation. The optimizer maximizes `objective`.
struct Evaluation {
  double objective = 0.0;
  bool feasible = true;
  double total_violation = 0.0;  // sum of positive normalized slacks
  std::map<std::string, double> violations;  // raw slacks, <= 0 when satisfied
  std::string failure;  // non-empty when the evaluation itself failed
};

using Objective = std::function<Evaluation(const std::vector<double>&)>;

struct Member {
  std::vector<double> x;
  Evaluation eval;
};

struct GenerationRecord {
  int generation = 0;
  double best_objective = 0.0;  // NaN while nothing is feasible
  int n_feasible = 0;
};

struct DeResult {
  Member best;
  std::vector<GenerationRecord> history;  // generation 0 is the initial population
  std::size_t evaluations = 0;
};

/// True when `a` should replace `b` under the selection rule.
bool better_or_equal(const Evaluation& a, const Evaluation& b, bool strict);

/// Folds v back into [low, high] by mirror reflection.
double reflect_into(double v, double low, double high);

/// DE/rand/1/bin. Each candidate draws from its own stream seeded by
/// (seed, generation, index), so the thread count does not change the result.
/// `observer` sees every evaluated vector, from the calling thread.
/// Throws NoFeasibleCandidateError when no feasible point was found.
DeResult differential_evolution(const std::vector<Variable>& variables, const Objective& objective,
                                const DeParams& params,
                                const std::function<void(const std::vector<double>&)>& observer = {});

}  // namespace zzkit::optimizer

#include "zzkit/differential_evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <random>
#include <thread>

#include "zzkit/errors.hpp"

namespace zzkit::optimizer {

void DeParams::validate() const {
  if (population != 0 && population < 4) throw InvalidArgument("DE population must be >= 4");
  if (generations < 1) throw InvalidArgument("DE needs at least one generation");
  if (!(f > 0.0 && f < 2.0)) throw InvalidArgument("DE mutation factor must lie in (0, 2)");
  if (!(cr >= 0.0 && cr <= 1.0)) throw InvalidArgument("DE crossover rate must lie in [0, 1]");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
}

bool better_or_equal(const Evaluation& a, const Evaluation& b, bool strict) {
  if (a.feasible && b.feasible) return a.objective >= b.objective;
  if (a.feasible) return true;
  if (b.feasible || strict) return false;
  return a.total_violation <= b.total_violation;
}

double reflect_into(double v, double low, double high) {
  const double w = high - low;
  if (!(w > 0.0)) return low;
  if (v >= low && v <= high) return v;
  double y = std::fmod(v - low, 2.0 * w);
  if (y < 0.0) y += 2.0 * w;
  return y <= w ? low + y : high - (y - w);
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, int generation, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

std::vector<Evaluation> evaluate_all(const std::vector<std::vector<double>>& xs, const Objective& objective,
                                     int threads) {
  std::vector<Evaluation> out(xs.size());
  auto one = [&](std::size_t i) { out[i] = objective(xs[i]); };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), xs.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < xs.size(); i = next++) {
        try {
          one(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

GenerationRecord record(int generation, const std::vector<Member>& pop) {
  GenerationRecord r;
  r.generation = generation;
  r.best_objective = std::numeric_limits<double>::quiet_NaN();
  for (const auto& m : pop) {
    if (!m.eval.feasible) continue;
    ++r.n_feasible;
    if (std::isnan(r.best_objective) || m.eval.objective > r.best_objective) r.best_objective = m.eval.objective;
  }
  return r;
}

}  // namespace

DeResult differential_evolution(const std::vector<Variable>& variables, const Objective& objective,
                                const DeParams& params,
                                const std::function<void(const std::vector<double>&)>& observer) {
  params.validate();
  if (variables.empty()) throw InvalidArgument("no design variables");
  for (const auto& v : variables) {
    if (!std::isfinite(v.low) || !std::isfinite(v.high) || v.low > v.high) {
      throw InvalidArgument(fmt::format("variable '{}' has invalid bounds [{}, {}]", v.name, v.low, v.high));
    }
  }
  const int dim = static_cast<int>(variables.size());
  const int np = params.population > 0 ? params.population : std::max(4, 15 * dim);
  const bool pinned = std::all_of(variables.begin(), variables.end(), [](const Variable& v) { return v.low == v.high; });

  DeResult result;
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(np), std::vector<double>(variables.size()));
  for (int i = 0; i < np; ++i) {
    auto rng = stream(params.seed, 0, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int j = 0; j < dim; ++j) {
      const auto& v = variables[static_cast<std::size_t>(j)];
      xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.low + u(rng) * (v.high - v.low);
    }
  }
  if (observer) {
    for (const auto& x : xs) observer(x);
  }
  std::vector<Evaluation> evals = evaluate_all(xs, objective, params.threads);
  result.evaluations += xs.size();
  std::vector<Member> pop(static_cast<std::size_t>(np));
  for (std::size_t i = 0; i < pop.size(); ++i) pop[i] = {xs[i], evals[i]};
  result.history.push_back(record(0, pop));

  const int generations = pinned ? 1 : params.generations;
  for (int g = 1; g <= generations; ++g) {
    for (int i = 0; i < np; ++i) {
      auto rng = stream(params.seed, g, i);
      std::uniform_int_distribution<int> pick(0, np - 1);
      std::uniform_int_distribution<int> pick_dim(0, dim - 1);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      int r1, r2, r3;
      do r1 = pick(rng); while (r1 == i);
      do r2 = pick(rng); while (r2 == i || r2 == r1);
      do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
      const int j_rand = pick_dim(rng);
      auto& trial = xs[static_cast<std::size_t>(i)];
      const auto& target = pop[static_cast<std::size_t>(i)].x;
      for (int j = 0; j < dim; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const auto& v = variables[sj];
        const double cross = u(rng);
        if (j == j_rand || cross < params.cr) {
          const double mutant = pop[static_cast<std::size_t>(r1)].x[sj] +
                                params.f * (pop[static_cast<std::size_t>(r2)].x[sj] - pop[static_cast<std::size_t>(r3)].x[sj]);
          trial[sj] = reflect_into(mutant, v.low, v.high);
        } else {
          trial[sj] = target[sj];
        }
      }
    }
    if (observer) {
      for (const auto& x : xs) observer(x);
    }
    evals = evaluate_all(xs, objective, params.threads);
    result.evaluations += xs.size();
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (better_or_equal(evals[i], pop[i].eval, params.strict)) pop[i] = {xs[i], evals[i]};
    }
    result.history.push_back(record(g, pop));
  }

  const Member* best = nullptr;
  for (const auto& m : pop) {
    if (!m.eval.feasible) continue;
    if (!best || m.eval.objective > best->eval.objective) best = &m;
  }
  if (!best) {
    throw NoFeasibleCandidateError(
        fmt::format("no feasible candidate after {} generations of {} members", generations, np));
  }
  result.best = *best;
  return result;
}

}  // namespace zzkit::optimizer

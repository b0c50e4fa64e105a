// zzkit: sweeps, spectroscopy, blockade dynamics and design optimization.
#include <CLI11.hpp>
#include <cstdint>
#include <fmt/format.h>
#include <iostream>
#include <optional>
#include <string>

#include "zzkit/config.hpp"
#include "zzkit/csv.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/sweeps.hpp"

namespace {

namespace io = zzkit::io;

enum Exit : int { ok = 0, config_error = 2, no_feasible = 3, numeric_failure = 4 };

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

// --out wins over the config file; with neither the primary output goes to stdout.
void emit(const Globals& g, const std::string& from_config, const std::string& text) {
  const std::string& path = g.out.empty() ? from_config : g.out;
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

void emit_side(const std::string& path, const std::string& text) {
  if (!path.empty()) io::write_text(path, text);
}

void zz_sweep(const Globals& g) {
  const auto cfg = io::load_zz_sweep_config(g.config);
  const auto rows = io::run_zz_sweep(cfg, g.threads);
  for (const auto& r : rows) {
    if (!r.error.empty()) std::cerr << fmt::format("zz-sweep: delta_hz={}: {}\n", r.delta_hz, r.error);
  }
  emit(g, cfg.out, io::zz_sweep_csv(rows));
  emit_side(cfg.spectrum_out, io::zz_spectrum_json(rows));
}

void blockade(const Globals& g) {
  const auto cfg = io::load_blockade_config(g.config);
  if (cfg.mode == io::BlockadeMode::spectral) {
    emit(g, cfg.out, io::spectral_csv(io::run_blockade_spectral(cfg, g.threads)));
  } else {
    emit(g, cfg.out, io::blockade_csv(io::run_blockade_sweep(cfg, g.threads)));
  }
}

void flux(const Globals& g) {
  const auto cfg = io::load_flux_config(g.config);
  const auto r = io::run_flux_spectroscopy(cfg, g.threads);
  emit(g, cfg.out, io::flux_csv(r));
  emit_side(cfg.summary_out, io::flux_summary_json(r));
  if (r.two_j_hz) {
    std::cerr << fmt::format("2J = {:.6g} Hz at flux {:.6g} Phi0\n", *r.two_j_hz, *r.flux_at_min);
  } else {
    std::cerr << "no avoided crossing: " << r.note << "\n";
  }
}

void ramsey(const Globals& g) {
  const auto cfg = io::load_ramsey_config(g.config);
  const auto runs = io::run_ramsey(cfg, g.threads);
  emit(g, cfg.out, io::ramsey_csv(runs));
  emit_side(cfg.summary_out, io::ramsey_summary_json(runs));
}

void optimize(const Globals& g) {
  const auto cfg = io::load_optimize_config(g.config);
  const auto r = io::run_optimize(cfg, g.seed, g.threads > 1 ? std::optional<int>(g.threads) : std::nullopt);
  emit(g, cfg.out, io::optimize_result_json(r));
  emit_side(cfg.history_out, io::optimize_history_csv(r));
}

void foster_fit(const Globals& g) {
  const auto cfg = io::load_foster_fit_config(g.config);
  emit(g, cfg.out, io::foster_fit_json(io::run_foster_fit(cfg)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zzkit: static ZZ coupling, blockade dynamics and coupler design"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "primary output path (overrides the config, '-' for stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (optimize)");
  app.add_option("--threads", g.threads, "worker threads for point-level parallelism")->check(CLI::PositiveNumber);
  app.fallthrough();

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Globals&);
  };
  const Command commands[] = {
      {"zz-sweep", "zeta versus qubit detuning", zz_sweep},
      {"blockade", "excitation blockade versus delay or pulse length", blockade},
      {"flux-spectroscopy", "single-excitation spectrum versus qubit-2 flux", flux},
      {"optimize", "constrained differential-evolution design search", optimize},
      {"foster-fit", "vector fit of admittance samples to a Foster network", foster_fit},
      {"ramsey", "conditional Ramsey measurement of zeta", ramsey},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }
  if (*seed_opt) g.seed = seed;

  try {
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) c.run(g);
    }
  } catch (const zzkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const zzkit::NoFeasibleCandidateError& e) {
    std::cerr << "no feasible candidate: " << e.what() << "\n";
    return no_feasible;
  } catch (const zzkit::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return numeric_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numeric_failure;
  }
  return ok;
}

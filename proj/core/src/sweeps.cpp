#include "zzkit/sweeps.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <nlohmann/json.hpp>

#include "zzkit/csv.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/fitting.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/labeling.hpp"
#include "zzkit/pauli.hpp"
#include "zzkit/perturbative.hpp"
#include "zzkit/readout.hpp"
#include "zzkit/spectral.hpp"

namespace zzkit::io {

using nlohmann::ordered_json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

// zz-sweep ------------------------------------------------------------------

std::vector<ZzRow> run_zz_sweep(const ZzSweepConfig& config, int threads) {
  const circuit::TransmonSpec& q1 = config.device.qubits.at(0);
  const circuit::TransmonSpec& q2 = config.device.qubits.at(1);
  circuit::Coupling coupling = config.device.coupling;
  if (config.g_hz) coupling.g_hz = config.g_hz;
  const double w1 = circuit::transmon_spectrum(q1).omega01;

  return parallel_map<ZzRow>(config.delta_hz.size(), threads, [&](std::size_t i) {
    ZzRow row;
    row.delta_hz = config.delta_hz[i];
    try {
      const double target = w1 - row.delta_hz;
      circuit::TransmonSpec q2_at = q2;
      if (config.mode == DeltaMode::direct) {
        q2_at.squid.flux = 0.0;
        q2_at.squid.ej_sum = circuit::solve_ej_for_frequency(target, q2.ec);
      } else {
        q2_at.squid.flux = circuit::flux_for_frequency(q2, target);
      }
      const circuit::KerrParams kp = circuit::two_transmon_kerr(q1, q2_at, coupling);
      const auto h = spectrum::build_hamiltonian(kp, {config.levels, config.levels}, config.max_excitation);
      row.spectrum = spectrum::diagonalize_and_label(h);
      const auto z = spectrum::zeta_with_resonant_convention(*row.spectrum);
      row.zeta_exact_hz = z.zeta;
      row.ambiguous = z.ambiguous;
      const double g = kp.exchange_g;
      const double delta = kp.mode_freqs[0] - kp.mode_freqs[1];
      try {
        row.zeta_perturbative_hz =
            spectrum::zeta_perturbative(g, delta, kp.self_kerr[0], kp.self_kerr[1], kp.bare_cross_kerr_chi);
      } catch (const PoleError&) {
        row.zeta_perturbative_hz = nan;
      }
      try {
        row.zeta_series_hz = spectrum::zeta_series_high_detuning(g, delta, kp.self_kerr[0], kp.self_kerr[1],
                                                                 kp.bare_cross_kerr_chi, config.series_order);
      } catch (const DomainError&) {
        row.zeta_series_hz = nan;
      }
    } catch (const Error& e) {
      row.zeta_exact_hz = row.zeta_perturbative_hz = row.zeta_series_hz = nan;
      row.error = e.what();
    }
    return row;
  });
}

std::string zz_sweep_csv(const std::vector<ZzRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({format_number(r.delta_hz), format_number(r.zeta_exact_hz), format_number(r.zeta_perturbative_hz),
                     format_number(r.zeta_series_hz), r.error.empty() ? (r.ambiguous ? "1" : "0") : "error"});
  }
  return format_csv(zz_sweep_header, cells);
}

std::string zz_spectrum_json(const std::vector<ZzRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json e;
    e["delta_hz"] = r.delta_hz;
    if (!r.spectrum) {
      e["error"] = r.error;
      out.push_back(e);
      continue;
    }
    ordered_json states = ordered_json::array();
    for (const auto& label : r.spectrum->basis_labels) {
      states.push_back({{"label", {label.first, label.second}},
                        {"energy_hz", r.spectrum->energy(label)},
                        {"overlap", r.spectrum->overlap(label)},
                        {"ambiguous", r.spectrum->ambiguous(label)}});
    }
    e["states"] = states;
    try {
      // Diagonal in the dressed basis, so the exchange terms vanish.
      const auto d = spectrum::pauli_decomposition(*r.spectrum, 0.0);
      e["beta_hz"] = d.beta;
    } catch (const AmbiguousLabelError&) {
      e["beta_hz"] = nullptr;
    }
    out.push_back(e);
  }
  return dump(out);
}

// blockade ------------------------------------------------------------------

namespace {

BlockadeRow protocol_row(const BlockadeConfig& config) {
  dynamics::ProtocolSpec proto;
  proto.pulses = config.pulses;
  proto.delay = config.protocol_delay_s;
  proto.frame = config.settings.frame;
  double longest = 0.0;
  for (const auto& p : proto.pulses) {
    proto.total_time = std::max(proto.total_time, p.end_time());
    longest = std::max(longest, p.duration);
  }
  proto.total_time += config.settings.readout_wait;
  proto.readout_times = {proto.total_time};
  const auto r = dynamics::run_blockade_protocol(config.model, proto, config.dissipation, config.integrator);
  BlockadeRow row;
  row.delay_s = proto.delay;
  row.pulse_len_s = longest;
  row.p1_e = r.excited(r.times.size() - 1, 1);
  row.p2_e = r.excited(r.times.size() - 1, 2);
  row.norm_drift = r.max_norm_drift;
  row.trace_drift = r.max_trace_drift;
  return row;
}

}  // namespace

std::vector<BlockadeRow> run_blockade_sweep(const BlockadeConfig& config, int threads) {
  if (config.mode == BlockadeMode::protocol) {
    BlockadeRow row = protocol_row(config);
    if (config.readout_matrix) {
      row.p1_e_measured = dynamics::measured_excited(row.p1_e, (*config.readout_matrix)[0]);
      row.p2_e_measured = dynamics::measured_excited(row.p2_e, (*config.readout_matrix)[1]);
    }
    return {row};
  }
  struct Job {
    double delay;
    double length;
  };
  std::vector<Job> jobs;
  if (config.mode == BlockadeMode::pulse_length) {
    for (double d : config.delays_s)
      for (double l : config.pulse_lengths_s) jobs.push_back({d, l});
  } else {
    for (double l : config.pulse_lengths_s)
      for (double d : config.delays_s) jobs.push_back({d, l});
  }
  return parallel_map<BlockadeRow>(jobs.size(), threads, [&](std::size_t i) {
    dynamics::BlockadeSettings s = config.settings;
    s.pulse_length = jobs[i].length;
    const auto p = dynamics::blockade_point(config.model, jobs[i].delay, s, config.dissipation, config.integrator);
    BlockadeRow row;
    row.delay_s = p.delay;
    row.pulse_len_s = p.pulse_length;
    row.p1_e = p.p1_e;
    row.p2_e = p.p2_e;
    row.norm_drift = p.norm_drift;
    row.trace_drift = p.trace_drift;
    if (config.readout_matrix) {
      row.p1_e_measured = dynamics::measured_excited(p.p1_e, (*config.readout_matrix)[0]);
      row.p2_e_measured = dynamics::measured_excited(p.p2_e, (*config.readout_matrix)[1]);
    }
    return row;
  });
}

std::string blockade_csv(const std::vector<BlockadeRow>& rows) {
  const bool measured = !rows.empty() && rows.front().p1_e_measured.has_value();
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> c{format_number(r.delay_s), format_number(r.pulse_len_s), format_number(r.p1_e),
                               format_number(r.p2_e)};
    if (measured) {
      c.push_back(format_number(r.p1_e_measured.value_or(nan)));
      c.push_back(format_number(r.p2_e_measured.value_or(nan)));
    }
    cells.push_back(std::move(c));
  }
  return format_csv(measured ? blockade_measured_header : blockade_header, cells);
}

std::vector<SpectralRow> run_blockade_spectral(const BlockadeConfig& config, int threads) {
  const double delay = config.delays_s.at(0);
  const double offset = config.spectral_offset_hz != 0.0 ? config.spectral_offset_hz : std::abs(config.model.zeta);
  const double window = config.spectral_window_hz > 0.0 ? config.spectral_window_hz : 1e6;
  return parallel_map<SpectralRow>(config.pulse_lengths_s.size(), threads, [&](std::size_t i) {
    dynamics::BlockadeSettings s = config.settings;
    s.pulse_length = config.pulse_lengths_s[i];
    const auto p = dynamics::blockade_point(config.model, delay, s, config.dissipation, config.integrator);
    dynamics::PulseSpec pulse;
    pulse.shape = s.shape;
    pulse.duration = s.pulse_length;
    pulse.gaussian_sigma = s.shape == dynamics::PulseShape::gaussian ? s.gaussian_sigma_fraction * s.pulse_length : 0.0;
    pulse.amplitude = dynamics::pi_pulse_amplitude(s.shape, s.pulse_length, pulse.gaussian_sigma);
    pulse.carrier = config.model.transition(1, 0);
    SpectralRow row;
    row.pulse_len_s = s.pulse_length;
    row.delay_s = delay;
    row.p1_e = p.p1_e;
    row.spectral_power = dynamics::pulse_spectral_power(pulse, offset, window);
    row.norm_drift = std::max(p.norm_drift, p.trace_drift);
    return row;
  });
}

std::string spectral_csv(const std::vector<SpectralRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({format_number(r.pulse_len_s), format_number(r.delay_s), format_number(r.p1_e),
                     format_number(r.spectral_power)});
  }
  return format_csv(spectral_header, cells);
}

// flux-spectroscopy ---------------------------------------------------------

FluxResult run_flux_spectroscopy(const FluxSpectroscopyConfig& config, int threads) {
  circuit::TransmonSpec q1 = config.device.qubits.at(0);
  if (config.q1_flux) q1.squid.flux = *config.q1_flux;
  const circuit::TransmonSpec& q2 = config.device.qubits.at(1);
  FluxResult out;
  out.points = parallel_map<spectrum::CrossingPoint>(config.flux_phi0.size(), threads, [&](std::size_t i) {
    return spectrum::single_excitation_point(q1, q2, config.device.coupling, config.flux_phi0[i]);
  });
  try {
    const auto r = spectrum::avoided_crossing_j(q1, q2, config.device.coupling, config.flux_phi0);
    out.two_j_hz = 2.0 * r.j_hz;
    out.flux_at_min = r.flux_at_min;
  } catch (const NoCrossingError& e) {
    out.note = e.what();
  }
  return out;
}

std::string flux_csv(const FluxResult& result) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& p : result.points) {
    cells.push_back({format_number(p.flux), format_number(p.q1_bare), format_number(p.q2_bare),
                     format_number(p.lower), format_number(p.upper)});
  }
  return format_csv(flux_header, cells);
}

std::string flux_summary_json(const FluxResult& result) {
  ordered_json j;
  j["two_j_hz"] = result.two_j_hz ? ordered_json(*result.two_j_hz) : ordered_json(nullptr);
  j["flux_at_min_phi0"] = result.flux_at_min ? ordered_json(*result.flux_at_min) : ordered_json(nullptr);
  if (!result.note.empty()) j["note"] = result.note;
  return dump(j);
}

// ramsey --------------------------------------------------------------------

std::vector<RamseyRun> run_ramsey(const RamseyConfig& config, int threads) {
  std::vector<double> zetas = config.zeta_hz;
  if (zetas.empty()) zetas.push_back(config.model.zeta);
  // Two simulations per zeta value.
  const auto results = parallel_map<dynamics::RamseyResult>(2 * zetas.size(), threads, [&](std::size_t i) {
    dynamics::TwoQubitModel m = config.model;
    if (!config.zeta_hz.empty()) {
      // Hold the ground-conditioned lines fixed while changing zeta.
      const double w1 = m.transition(1, 0);
      const double w2 = m.transition(2, 0);
      m.zeta = zetas[i / 2];
      m.omega1 = w1 + 0.5 * m.zeta;
      m.omega2 = w2 + 0.5 * m.zeta;
    }
    dynamics::RamseySettings s = config.settings;
    if (s.detuning == 0.0) s.detuning = std::max(2.0 * std::abs(m.zeta), 5e6);
    return dynamics::run_conditional_ramsey(m, static_cast<int>(i % 2), config.free_times_s, s);
  });
  std::vector<RamseyRun> runs;
  for (std::size_t k = 0; k < zetas.size(); ++k) {
    RamseyRun r;
    r.zeta_model_hz = zetas[k];
    r.ground = results[2 * k];
    r.excited = results[2 * k + 1];
    r.zeta_measured_hz = r.excited.fringe_hz - r.ground.fringe_hz;
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string ramsey_csv(const std::vector<RamseyRun>& runs) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.ground.free_times.size(); ++i) {
      cells.push_back({format_number(r.zeta_model_hz), format_number(r.ground.free_times[i]),
                       format_number(r.ground.p1_e[i]), format_number(r.excited.p1_e[i])});
    }
  }
  return format_csv(ramsey_header, cells);
}

std::string ramsey_summary_json(const std::vector<RamseyRun>& runs) {
  ordered_json j = ordered_json::array();
  for (const auto& r : runs) {
    ordered_json e;
    e["zeta_model_hz"] = r.zeta_model_hz;
    e["fringe_spectator_ground_hz"] = r.ground.fringe_hz;
    e["fringe_spectator_excited_hz"] = r.excited.fringe_hz;
    e["zeta_measured_hz"] = r.zeta_measured_hz;
    e["relative_error"] = number_or_null(std::abs(r.zeta_measured_hz - r.zeta_model_hz) / std::abs(r.zeta_model_hz));
    e["max_norm_drift"] = std::max(r.ground.max_norm_drift, r.excited.max_norm_drift);
    j.push_back(e);
  }
  return dump(j);
}

// optimize ------------------------------------------------------------------

OptimizeOutput run_optimize(const OptimizeConfig& config, std::optional<std::uint64_t> seed,
                            std::optional<int> threads) {
  optimizer::OptimizationProblem problem = config.problem;
  if (seed) problem.de.seed = *seed;
  if (threads) problem.de.threads = *threads;
  OptimizeOutput out;
  for (const auto& v : problem.variables) out.names.push_back(v.name);
  if (config.test_function == TestFunction::rosenbrock) {
    auto f = [](const std::vector<double>& x) {
      optimizer::Evaluation e;
      e.objective = 0.0 - (x[0] - 1.0) * (x[0] - 1.0) - 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]);
      return e;
    };
    const auto r = optimizer::differential_evolution(problem.variables, f, problem.de);
    out.best_x = r.best.x;
    out.best_objective = r.best.eval.objective;
    out.history = r.history;
    out.evaluations = r.evaluations;
    out.objective = "rosenbrock";
    return out;
  }
  const auto r = optimizer::optimize(problem);
  out.best_x = r.best.x;
  out.best_objective = r.best.zeta ? (problem.objective == optimizer::ObjectiveMode::abs_zeta ? std::abs(*r.best.zeta)
                                                                                             : *r.best.zeta)
                                   : nan;
  out.candidate = r.best;
  out.history = r.history;
  out.evaluations = r.evaluations;
  out.objective = optimizer::to_string(problem.objective);
  return out;
}

std::string optimize_result_json(const OptimizeOutput& out) {
  ordered_json j;
  j["objective"] = out.objective;
  ordered_json x;
  for (std::size_t i = 0; i < out.names.size(); ++i) x[out.names[i]] = out.best_x[i];
  j["best_x"] = x;
  j["best_objective"] = number_or_null(out.best_objective);
  if (out.candidate) {
    const auto& c = *out.candidate;
    j["zeta_hz"] = c.zeta ? number_or_null(*c.zeta) : ordered_json(nullptr);
    j["feasible"] = c.feasible;
    ordered_json v;
    for (const auto& [k, s] : c.violations) v[k] = s;
    j["violations"] = v;
    j["omega1_hz"] = c.omega1;
    j["omega2_hz"] = c.omega2;
    j["alpha1_hz"] = c.alpha1;
    j["alpha2_hz"] = c.alpha2;
    j["g_hz"] = c.g;
  }
  j["evaluations"] = out.evaluations;
  ordered_json h = ordered_json::array();
  for (const auto& r : out.history) {
    h.push_back({{"generation", r.generation}, {"best_zeta_hz", number_or_null(r.best_objective)},
                 {"n_feasible", r.n_feasible}});
  }
  j["history"] = h;
  return dump(j);
}

std::string optimize_history_csv(const OptimizeOutput& out) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : out.history) {
    cells.push_back({std::to_string(r.generation), format_number(r.best_objective), std::to_string(r.n_feasible)});
  }
  return format_csv(history_header, cells);
}

// foster-fit ----------------------------------------------------------------

std::vector<circuit::FrequencySample> read_samples(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header != admittance_header) {
    throw ConfigError(fmt::format("{}: header must be {}", path.string(), fmt::join(admittance_header, ",")));
  }
  const auto w = t.numeric("freq_rad_s");
  const auto re = t.numeric("re_y");
  const auto im = t.numeric("im_y");
  std::vector<circuit::FrequencySample> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back({w[i], {re[i], im[i]}});
  return out;
}

std::string samples_csv(const std::vector<circuit::FrequencySample>& samples) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& s : samples) {
    cells.push_back({format_number(s.omega), format_number(s.value.real()), format_number(s.value.imag())});
  }
  return format_csv(admittance_header, cells);
}

FosterFitOutput run_foster_fit(const FosterFitConfig& config) {
  auto samples = read_samples(config.samples);
  // The Foster form is a series of parallel resonators, i.e. an impedance.
  if (config.kind == SampleKind::admittance) samples = circuit::invert_samples(samples);
  FosterFitOutput out;
  out.fit = circuit::vector_fit(samples, config.n_poles);
  out.modes = circuit::foster_from_fit(out.fit);
  return out;
}

std::string foster_fit_json(const FosterFitOutput& out) {
  ordered_json j;
  j["fit_error"] = out.fit.fit_error;
  j["iterations"] = out.fit.iterations;
  j["direct_term"] = out.fit.direct_term;
  ordered_json poles = ordered_json::array();
  for (std::size_t k = 0; k < out.fit.poles.size(); ++k) {
    poles.push_back({{"pole_re", out.fit.poles[k].real()},
                     {"pole_im", out.fit.poles[k].imag()},
                     {"residue_re", out.fit.residues[k].real()},
                     {"residue_im", out.fit.residues[k].imag()}});
  }
  j["poles"] = poles;
  ordered_json modes = ordered_json::array();
  for (const auto& m : out.modes) {
    modes.push_back({{"frequency_hz", m.frequency_hz()},
                     {"l_henries", m.inductance_l},
                     {"c_farads", m.capacitance_c},
                     {"r_ohms", number_or_null(m.resistance_r)}});
  }
  j["modes"] = modes;
  return dump(j);
}

}  // namespace zzkit::io

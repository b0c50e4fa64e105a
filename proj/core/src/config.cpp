#include "zzkit/config.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/pauli.hpp"

namespace zzkit::io {

using detail::json;
using detail::Node;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path relative_to(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

DeviceFixture fixture_from(const Node& n, const std::filesystem::path& base) {
  const std::string name = n.string();
  const std::filesystem::path p(name);
  try {
    if (p.has_extension() || p.has_parent_path()) return load_fixture(relative_to(base, name));
    return load_fixture(resolve_fixture(name));
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
}

/// {"start", "stop", "points"}, {"values": [...]} or a plain array; strictly monotone, >= 2 points.
std::vector<double> grid(const Node& n, std::size_t min_points = 2) {
  std::vector<double> v;
  if (n.raw().is_array()) {
    v = n.numbers();
  } else {
    n.expect_keys({"start", "stop", "points", "values"});
    if (n.has("values")) {
      if (n.has("start") || n.has("stop") || n.has("points")) n.fail("give either values or start/stop/points");
      v = n.child("values").numbers();
    } else {
      const double a = n.number("start");
      const double b = n.number("stop");
      const int pts = n.child("points").integer();
      if (pts < 1) n.fail("points must be >= 1");
      for (int i = 0; i < pts; ++i) v.push_back(pts == 1 ? a : a + (b - a) * i / (pts - 1));
    }
  }
  if (v.size() < min_points) n.fail(fmt::format("grid needs at least {} points", min_points));
  if (v.size() >= 2) {
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) n.fail("grid must be strictly monotone");
    }
  }
  return v;
}

template <typename F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

circuit::TransmonSpec transmon(const Node& q) {
  q.expect_keys({"ej_sum_hz", "ec_hz", "asymmetry_d", "flux_phi0", "n_levels", "charge_basis_cutoff"});
  circuit::TransmonSpec t;
  t.squid.ej_sum = q.number("ej_sum_hz");
  t.squid.asymmetry_d = q.number_or("asymmetry_d", 0.0);
  t.squid.flux = q.number_or("flux_phi0", 0.0);
  t.ec = q.number("ec_hz");
  t.n_levels = q.integer_or("n_levels", t.n_levels);
  t.charge_basis_cutoff = q.integer_or("charge_basis_cutoff", t.charge_basis_cutoff);
  guarded(q, [&] {
    t.validate();
    return 0;
  });
  return t;
}

CircuitDescription circuit(const Node& n) {
  n.expect_keys({"qubits", "coupling", "foster", "participation"});
  CircuitDescription d;
  const Node qs = n.child("qubits");
  for (std::size_t i = 0; i < qs.size(); ++i) d.qubits.push_back(transmon(qs.at(i)));
  if (n.has("coupling")) {
    const Node c = n.child("coupling");
    c.expect_keys({"c12_farads", "g_hz"});
    if (c.has("g_hz") == c.has("c12_farads")) c.fail("give exactly one of c12_farads or g_hz");
    if (c.has("g_hz")) {
      d.coupling.g_hz = c.number("g_hz");
    } else {
      if (d.qubits.size() != 2) c.fail("capacitive coupling needs exactly two qubits");
      d.coupling.c12 = c.number("c12_farads");
      d.coupling.shunt_caps = guarded(c, [&] {
        return std::make_pair(circuit::shunt_from_ec(d.qubits[0].ec, d.coupling.c12),
                              circuit::shunt_from_ec(d.qubits[1].ec, d.coupling.c12));
      });
    }
  }
  if (n.has("foster")) {
    const Node fs = n.child("foster");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Node m = fs.at(i);
      m.expect_keys({"l_henries", "c_farads", "r_ohms"});
      circuit::FosterMode mode;
      mode.inductance_l = m.number("l_henries");
      mode.capacitance_c = m.number("c_farads");
      if (m.has("r_ohms")) mode.resistance_r = m.number("r_ohms");
      guarded(m, [&] {
        mode.validate();
        return 0;
      });
      d.foster.push_back(mode);
    }
  }
  if (n.has("participation")) {
    const Node p = n.child("participation");
    const std::size_t rows = p.size();
    if (rows == 0) p.fail("participation matrix is empty");
    const std::size_t cols = p.at(0).size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = p.at(r).numbers();
      if (row.size() != cols) p.at(r).fail("ragged participation matrix");
      for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    d.participation = m;
  }
  if (!d.foster.empty() && d.participation && d.participation->rows() != static_cast<Eigen::Index>(d.foster.size())) {
    n.fail("participation needs one row per Foster mode");
  }
  return d;
}

CircuitDescription device(const Node& n, const std::filesystem::path& base) {
  if (n.raw().is_object() && n.has("fixture")) {
    n.expect_keys({"fixture"});
    return circuit_from_fixture(fixture_from(n.child("fixture"), base));
  }
  return circuit(n);
}

dynamics::TwoQubitModel model(const Node& n, const std::filesystem::path& base) {
  n.expect_keys({"fixture", "pauli_beta_hz", "z_convention", "omega1_hz", "omega2_hz", "zeta_hz", "jxx_hz",
                 "jyy_hz", "exchange"});
  const int sources = int(n.has("fixture")) + int(n.has("pauli_beta_hz")) + int(n.has("omega1_hz"));
  if (sources != 1) n.fail("give exactly one of fixture, pauli_beta_hz or omega1_hz/omega2_hz");
  dynamics::TwoQubitModel m;
  if (n.has("omega1_hz")) {
    m.omega1 = n.number("omega1_hz");
    m.omega2 = n.number("omega2_hz");
    m.zeta = n.number_or("zeta_hz", 0.0);
    m.jxx = n.number_or("jxx_hz", 0.0);
    m.jyy = n.number_or("jyy_hz", 0.0);
    if (n.has("z_convention")) n.fail("z_convention applies to pauli_beta_hz only");
  } else {
    if (n.has("jxx_hz") || n.has("jyy_hz")) n.fail("jxx_hz/jyy_hz come from the Pauli table; use exchange=false to drop them");
    spectrum::PauliDecomposition d;
    if (n.has("fixture")) {
      if (n.has("z_convention")) n.fail("fixture tables fix their own convention");
      const DeviceFixture f = fixture_from(n.child("fixture"), base);
      if (!f.pauli_beta_hz) n.child("fixture").fail("fixture has no Pauli table");
      d.beta = *f.pauli_beta_hz;
      d.convention = spectrum::ZConvention::excited_positive;
    } else {
      const auto b = n.child("pauli_beta_hz").numbers();
      if (b.size() != 6) n.child("pauli_beta_hz").fail("expected six coefficients");
      std::copy(b.begin(), b.end(), d.beta.begin());
      const std::string conv = n.string_or("z_convention", "excited_positive");
      if (conv == "excited_positive") d.convention = spectrum::ZConvention::excited_positive;
      else if (conv == "ground_positive") d.convention = spectrum::ZConvention::ground_positive;
      else n.child("z_convention").fail("expected excited_positive or ground_positive");
    }
    m = guarded(n, [&] { return dynamics::TwoQubitModel::from_pauli(d); });
    if (n.has("zeta_hz")) {
      // Keep the ground-conditioned lines where the table puts them.
      const double w1 = m.transition(1, 0);
      const double w2 = m.transition(2, 0);
      m.zeta = n.number("zeta_hz");
      m.omega1 = w1 + 0.5 * m.zeta;
      m.omega2 = w2 + 0.5 * m.zeta;
    }
  }
  if (!n.boolean_or("exchange", true)) {
    m.jxx = 0.0;
    m.jyy = 0.0;
  }
  if (!(m.omega1 > 0.0) || !(m.omega2 > 0.0)) n.fail("qubit frequencies must be positive");
  return m;
}

dynamics::IntegratorOptions integrator(const Node& n) {
  n.expect_keys({"rtol", "atol", "max_step_s", "norm_tolerance", "steps_per_period"});
  dynamics::IntegratorOptions o;
  o.rtol = n.number_or("rtol", o.rtol);
  o.atol = n.number_or("atol", o.atol);
  o.max_step = n.number_or("max_step_s", o.max_step);
  o.norm_tolerance = n.number_or("norm_tolerance", o.norm_tolerance);
  o.steps_per_period = n.integer_or("steps_per_period", o.steps_per_period);
  if (!(o.rtol > 0.0) || !(o.atol > 0.0) || o.max_step < 0.0 || !(o.norm_tolerance > 0.0) || o.steps_per_period < 4) {
    n.fail("integrator tolerances must be positive and steps_per_period >= 4");
  }
  return o;
}

dynamics::DissipationSpec dissipation(const Node& n) {
  n.expect_keys({"t1_s", "t2_s", "state_prep_error"});
  dynamics::DissipationSpec d;
  const auto t1 = n.child("t1_s").numbers();
  if (t1.size() != 2) n.child("t1_s").fail("expected one value per qubit");
  d.t1 = {t1[0], t1[1]};
  if (n.has("t2_s")) {
    const auto t2 = n.child("t2_s").numbers();
    if (t2.size() != 2) n.child("t2_s").fail("expected one value per qubit");
    d.t2 = {t2[0], t2[1]};
  }
  d.state_prep_error = n.number_or("state_prep_error", 0.0);
  guarded(n, [&] {
    d.validate();
    return 0;
  });
  return d;
}

Eigen::Matrix2d matrix2(const Node& n) {
  if (n.size() != 2) n.fail("expected a 2x2 matrix");
  Eigen::Matrix2d m;
  for (std::size_t r = 0; r < 2; ++r) {
    const auto row = n.at(r).numbers();
    if (row.size() != 2) n.at(r).fail("expected two entries");
    m(static_cast<Eigen::Index>(r), 0) = row[0];
    m(static_cast<Eigen::Index>(r), 1) = row[1];
  }
  for (Eigen::Index r = 0; r < 2; ++r) {
    if ((m.row(r).array() < 0.0).any() || std::abs(m.row(r).sum() - 1.0) > 1e-9) {
      n.fail("readout matrix rows must be probability distributions");
    }
  }
  return m;
}

template <typename T, typename F>
T parse_with(const std::string& text, const std::string& source, F&& f) {
  const json j = detail::parse_json_text(text, source);
  return f(Node(j, ""));
}

}  // namespace

circuit::KerrParams CircuitDescription::kerr_params() const {
  if (!foster.empty()) {
    circuit::JunctionParticipation p;
    if (participation) {
      p.phi_zpf = *participation;
      for (const auto& q : qubits) p.ej_per_junction.push_back(circuit::effective_josephson_energy(q.squid));
      if (static_cast<Eigen::Index>(p.ej_per_junction.size()) != p.phi_zpf.cols()) {
        throw ConfigError("participation needs one column per qubit junction");
      }
    } else {
      if (qubits.size() != 1) throw ConfigError("without a participation matrix the Foster network needs one junction");
      p = circuit::single_port_participation(foster, circuit::effective_josephson_energy(qubits[0].squid));
    }
    return circuit::kerr_from_foster(foster, p);
  }
  if (qubits.size() != 2) throw ConfigError("the lumped two-transmon model needs exactly two qubits");
  return circuit::two_transmon_kerr(qubits[0], qubits[1], coupling);
}

CircuitDescription circuit_from_fixture(const DeviceFixture& fixture) {
  CircuitDescription d;
  for (const auto& q : fixture.qubits) d.qubits.push_back(q.transmon());
  d.coupling = fixture.coupling_spec();
  return d;
}

CircuitDescription parse_circuit_description(const std::string& json_text) {
  return parse_with<CircuitDescription>(json_text, "circuit", [](const Node& n) { return circuit(n); });
}

CircuitDescription load_circuit_description(const std::filesystem::path& path) {
  return parse_with<CircuitDescription>(slurp(path), path.string(), [](const Node& n) { return circuit(n); });
}

dynamics::TwoQubitModel parse_model(const std::string& json_text) {
  return parse_with<dynamics::TwoQubitModel>(json_text, "model", [](const Node& n) { return model(n, {}); });
}

ZzSweepConfig parse_zz_sweep_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<ZzSweepConfig>(json_text, "zz-sweep config", [&](const Node& n) {
    n.expect_keys({"device", "delta_hz", "mode", "levels", "max_excitation", "series_order", "g_hz", "out",
                   "spectrum_out"});
    ZzSweepConfig c;
    c.device = device(n.child("device"), base);
    c.delta_hz = grid(n.child("delta_hz"));
    const std::string mode = n.string_or("mode", "direct");
    if (mode == "direct") c.mode = DeltaMode::direct;
    else if (mode == "flux") c.mode = DeltaMode::flux;
    else n.child("mode").fail("expected direct or flux");
    c.levels = n.integer_or("levels", c.levels);
    c.max_excitation = n.integer_or("max_excitation", c.max_excitation);
    c.series_order = n.integer_or("series_order", c.series_order);
    if (c.levels < 3) n.child("levels").fail("levels must be >= 3");
    if (c.max_excitation < 2) n.child("max_excitation").fail("max_excitation must be >= 2");
    if (c.series_order < 2 || c.series_order > 4) n.child("series_order").fail("series_order must be 2, 3 or 4");
    c.g_hz = n.optional_number("g_hz");
    c.out = n.string_or("out", "");
    c.spectrum_out = n.string_or("spectrum_out", "");
    if (c.device.qubits.size() != 2 || !c.device.foster.empty()) {
      n.child("device").fail("zz-sweep needs a lumped two-transmon device");
    }
    return c;
  });
}

namespace {

// Amplitude defaults to a pi pulse, carrier to the ground-conditioned transition.
dynamics::PulseSpec pulse(const Node& n, const dynamics::TwoQubitModel& model) {
  n.expect_keys({"target_qubit", "shape", "duration_s", "start_s", "amplitude_hz", "carrier_hz", "phase_rad",
                 "gaussian_sigma_s"});
  dynamics::PulseSpec p;
  p.target_qubit = n.child("target_qubit").integer();
  if (p.target_qubit != 1 && p.target_qubit != 2) n.child("target_qubit").fail("expected 1 or 2");
  p.shape = guarded(n, [&] { return dynamics::parse_pulse_shape(n.string_or("shape", "truncated_cosine")); });
  p.duration = n.number("duration_s");
  p.start_time = n.number_or("start_s", 0.0);
  p.gaussian_sigma = n.number_or("gaussian_sigma_s", p.shape == dynamics::PulseShape::gaussian ? 0.25 * p.duration : 0.0);
  p.amplitude = n.has("amplitude_hz") ? n.number("amplitude_hz") : guarded(n, [&] {
    return dynamics::pi_pulse_amplitude(p.shape, p.duration, p.gaussian_sigma);
  });
  p.carrier = n.number_or("carrier_hz", model.transition(p.target_qubit, 0));
  p.phase = n.number_or("phase_rad", 0.0);
  guarded(n, [&] {
    p.validate();
    return 0;
  });
  return p;
}

}  // namespace

BlockadeConfig parse_blockade_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<BlockadeConfig>(json_text, "blockade config", [&](const Node& n) {
    n.expect_keys({"model", "mode", "delays_s", "pulse_lengths_s", "shape", "gaussian_sigma_fraction", "frame",
                   "carriers", "numeric_calibration", "readout_wait_s", "dissipation", "readout_matrix",
                   "spectral_offset_hz", "spectral_window_hz", "integrator", "pulses", "delay_s", "out"});
    BlockadeConfig c;
    c.model = model(n.child("model"), base);
    const std::string mode = n.string_or("mode", "delay");
    if (mode == "delay") c.mode = BlockadeMode::delay;
    else if (mode == "pulse_length") c.mode = BlockadeMode::pulse_length;
    else if (mode == "spectral") c.mode = BlockadeMode::spectral;
    else if (mode == "protocol") c.mode = BlockadeMode::protocol;
    else n.child("mode").fail("expected delay, pulse_length, spectral or protocol");
    if (c.mode == BlockadeMode::protocol) {
      if (n.has("delays_s") || n.has("pulse_lengths_s")) n.fail("protocol mode takes pulses and delay_s, not grids");
      c.protocol_delay_s = n.number_or("delay_s", 0.0);
      const Node ps = n.child("pulses");
      if (ps.size() == 0) ps.fail("needs at least one pulse");
      for (std::size_t i = 0; i < ps.size(); ++i) c.pulses.push_back(pulse(ps.at(i), c.model));
    } else {
      if (n.has("pulses") || n.has("delay_s")) n.fail("pulses and delay_s need mode \"protocol\"");
      c.delays_s = grid(n.child("delays_s"), 1);
    }
    if (c.mode != BlockadeMode::protocol) c.pulse_lengths_s = n.has("pulse_lengths_s") ? grid(n.child("pulse_lengths_s"), 1)
                                                 : std::vector<double>{c.settings.pulse_length};
    for (double len : c.pulse_lengths_s) {
      if (!(len > 0.0)) n.child("pulse_lengths_s").fail("pulse lengths must be positive");
    }
    if (c.mode == BlockadeMode::spectral && c.delays_s.size() != 1) {
      n.child("delays_s").fail("spectral mode uses a single delay");
    }
    c.settings.shape = guarded(n, [&] { return dynamics::parse_pulse_shape(n.string_or("shape", "truncated_cosine")); });
    c.settings.gaussian_sigma_fraction = n.number_or("gaussian_sigma_fraction", c.settings.gaussian_sigma_fraction);
    c.settings.frame = guarded(n, [&] { return dynamics::parse_frame(n.string_or("frame", "rotating")); });
    c.settings.carriers =
        guarded(n, [&] { return dynamics::parse_carrier_convention(n.string_or("carriers", "ground_conditioned")); });
    c.settings.numeric_calibration = n.boolean_or("numeric_calibration", false);
    c.settings.readout_wait = n.number_or("readout_wait_s", 0.0);
    if (c.settings.readout_wait < 0.0) n.child("readout_wait_s").fail("must be >= 0");
    if (n.has("dissipation")) c.dissipation = dissipation(n.child("dissipation"));
    if (n.has("readout_matrix")) {
      const Node r = n.child("readout_matrix");
      if (r.raw().is_array()) {
        const Eigen::Matrix2d m = matrix2(r);
        c.readout_matrix = std::array<Eigen::Matrix2d, 2>{m, m};
      } else {
        r.expect_keys({"q1", "q2"});
        c.readout_matrix = std::array<Eigen::Matrix2d, 2>{matrix2(r.child("q1")), matrix2(r.child("q2"))};
      }
    }
    c.spectral_offset_hz = n.number_or("spectral_offset_hz", 0.0);
    c.spectral_window_hz = n.number_or("spectral_window_hz", 0.0);
    if (c.spectral_window_hz < 0.0) n.child("spectral_window_hz").fail("must be >= 0");
    if (n.has("integrator")) c.integrator = integrator(n.child("integrator"));
    c.out = n.string_or("out", "");
    return c;
  });
}

FluxSpectroscopyConfig parse_flux_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<FluxSpectroscopyConfig>(json_text, "flux-spectroscopy config", [&](const Node& n) {
    n.expect_keys({"device", "flux_phi0", "q1_flux_phi0", "out", "summary_out"});
    FluxSpectroscopyConfig c;
    c.device = device(n.child("device"), base);
    if (c.device.qubits.size() != 2 || !c.device.foster.empty()) {
      n.child("device").fail("flux-spectroscopy needs a lumped two-transmon device");
    }
    c.flux_phi0 = grid(n.child("flux_phi0"), 3);
    c.q1_flux = n.optional_number("q1_flux_phi0");
    c.out = n.string_or("out", "");
    c.summary_out = n.string_or("summary_out", "");
    return c;
  });
}

RamseyConfig parse_ramsey_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<RamseyConfig>(json_text, "ramsey config", [&](const Node& n) {
    n.expect_keys({"model", "zeta_hz", "free_times_s", "detuning_hz", "pulse_length_s", "min_contrast", "out",
                   "summary_out"});
    RamseyConfig c;
    c.model = model(n.child("model"), base);
    if (n.has("zeta_hz")) {
      const Node z = n.child("zeta_hz");
      c.zeta_hz = z.raw().is_array() ? z.numbers() : std::vector<double>{z.number()};
    }
    c.free_times_s = grid(n.child("free_times_s"), 6);
    c.settings.detuning = n.number_or("detuning_hz", 0.0);
    c.settings.pulse_length = n.number_or("pulse_length_s", c.settings.pulse_length);
    c.settings.min_contrast = n.number_or("min_contrast", c.settings.min_contrast);
    if (c.settings.detuning < 0.0) n.child("detuning_hz").fail("must be >= 0");
    if (!(c.settings.pulse_length > 0.0)) n.child("pulse_length_s").fail("must be > 0");
    c.out = n.string_or("out", "");
    c.summary_out = n.string_or("summary_out", "");
    return c;
  });
}

OptimizeConfig parse_optimize_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<OptimizeConfig>(json_text, "optimize config", [&](const Node& n) {
    n.expect_keys({"variables", "base", "n_exc", "constraints", "de", "objective", "test_function", "out",
                   "history_out"});
    OptimizeConfig c;
    auto& p = c.problem;
    const std::string tf = n.string_or("test_function", "none");
    if (tf == "rosenbrock") c.test_function = TestFunction::rosenbrock;
    else if (tf != "none") n.child("test_function").fail("expected rosenbrock or none");

    const Node vars = n.child("variables");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Node v = vars.at(i);
      v.expect_keys({"name", "low", "high"});
      optimizer::Variable var{v.child("name").string(), v.number("low"), v.number("high")};
      if (var.low > var.high) v.fail("low must not exceed high");
      p.variables.push_back(var);
    }
    if (n.has("de")) {
      const Node d = n.child("de");
      d.expect_keys({"population", "generations", "f", "cr", "seed", "strict", "threads"});
      p.de.population = d.integer_or("population", p.de.population);
      p.de.generations = d.integer_or("generations", p.de.generations);
      p.de.f = d.number_or("f", p.de.f);
      p.de.cr = d.number_or("cr", p.de.cr);
      if (d.has("seed")) {
        if (!d.child("seed").raw().is_number_unsigned()) d.child("seed").fail("expected a non-negative integer");
        p.de.seed = d.child("seed").raw().get<std::uint64_t>();
      }
      p.de.strict = d.boolean_or("strict", false);
      p.de.threads = d.integer_or("threads", 1);
      guarded(d, [&] {
        p.de.validate();
        return 0;
      });
    }
    c.out = n.string_or("out", "");
    c.history_out = n.string_or("history_out", "");
    if (c.test_function != TestFunction::none) {
      for (const char* k : {"base", "constraints", "objective", "n_exc"}) {
        if (n.has(k)) n.child(k).fail("not used with a test function");
      }
      if (p.variables.size() != 2) vars.fail("the rosenbrock test function takes two variables");
      return c;
    }

    const Node b = n.child("base");
    if (b.has("fixture")) {
      b.expect_keys({"fixture"});
      const DeviceFixture f = fixture_from(b.child("fixture"), base);
      if (f.qubits.size() != 2 || !f.coupling.count("c12_farads")) {
        b.child("fixture").fail("optimizer base fixtures need two qubits and a capacitive coupling");
      }
      p.base = guarded(b, [&] {
        return optimizer::design_from_transmons(f.qubits[0].transmon(), f.qubits[1].transmon(),
                                                f.coupling.at("c12_farads").value);
      });
    } else {
      b.expect_keys({"c1_farads", "c2_farads", "c12_farads", "ej1_hz", "ej2_hz", "g_hz", "d1", "d2", "flux1_phi0",
                     "flux2_phi0"});
      p.base.c1 = b.number("c1_farads");
      p.base.c2 = b.number("c2_farads");
      p.base.c12 = b.number_or("c12_farads", 0.0);
      p.base.ej1 = b.number("ej1_hz");
      p.base.ej2 = b.number("ej2_hz");
      p.base.g = b.optional_number("g_hz");
      p.base.d1 = b.number_or("d1", 0.0);
      p.base.d2 = b.number_or("d2", 0.0);
      p.base.flux1 = b.number_or("flux1_phi0", 0.0);
      p.base.flux2 = b.number_or("flux2_phi0", 0.0);
    }
    p.n_exc = n.integer_or("n_exc", p.n_exc);
    const Node cs = n.child("constraints");
    cs.expect_keys({"freq_band_q1_hz", "freq_band_q2_hz", "min_abs_anharmonicity_hz", "capacitance_bounds_farads",
                    "min_ej_ec_ratio", "max_j_over_delta"});
    auto band = [](const Node& x) {
      const auto v = x.numbers();
      if (v.size() != 2) x.fail("expected [low, high]");
      return std::make_pair(v[0], v[1]);
    };
    p.constraints.freq_band_q1 = band(cs.child("freq_band_q1_hz"));
    p.constraints.freq_band_q2 = band(cs.child("freq_band_q2_hz"));
    p.constraints.min_abs_anharmonicity = cs.number("min_abs_anharmonicity_hz");
    p.constraints.min_ej_ec_ratio = cs.number("min_ej_ec_ratio");
    p.constraints.max_j_over_delta = cs.number("max_j_over_delta");
    if (cs.has("capacitance_bounds_farads")) {
      const Node cb = cs.child("capacitance_bounds_farads");
      cb.expect_keys({"c1", "c2", "c12"});
      for (const auto& [key, value] : cb.raw().items()) p.constraints.capacitance_bounds[key] = band(cb.child(key));
    }
    p.objective = guarded(n, [&] { return optimizer::parse_objective_mode(n.string_or("objective", "abs_zeta")); });
    guarded(n, [&] {
      p.validate();
      return 0;
    });
    return c;
  });
}

FosterFitConfig parse_foster_fit_config(const std::string& json_text, const std::filesystem::path& base) {
  return parse_with<FosterFitConfig>(json_text, "foster-fit config", [&](const Node& n) {
    n.expect_keys({"samples", "n_poles", "kind", "out"});
    FosterFitConfig c;
    c.samples = relative_to(base, n.child("samples").string());
    c.n_poles = n.child("n_poles").integer();
    if (c.n_poles < 1) n.child("n_poles").fail("must be >= 1");
    const std::string kind = n.string_or("kind", "admittance");
    if (kind == "admittance") c.kind = SampleKind::admittance;
    else if (kind == "impedance") c.kind = SampleKind::impedance;
    else n.child("kind").fail("expected admittance or impedance");
    c.out = n.string_or("out", "");
    return c;
  });
}

#define ZZKIT_LOADER(Type, name, parser)                                   \
  Type name(const std::filesystem::path& path) {                           \
    try {                                                                  \
      return parser(slurp(path), path.parent_path());                      \
    } catch (const ConfigError& e) {                                       \
      throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));   \
    }                                                                      \
  }

ZZKIT_LOADER(ZzSweepConfig, load_zz_sweep_config, parse_zz_sweep_config)
ZZKIT_LOADER(BlockadeConfig, load_blockade_config, parse_blockade_config)
ZZKIT_LOADER(FluxSpectroscopyConfig, load_flux_config, parse_flux_config)
ZZKIT_LOADER(RamseyConfig, load_ramsey_config, parse_ramsey_config)
ZZKIT_LOADER(OptimizeConfig, load_optimize_config, parse_optimize_config)
ZZKIT_LOADER(FosterFitConfig, load_foster_fit_config, parse_foster_fit_config)

#undef ZZKIT_LOADER

}  // namespace zzkit::io

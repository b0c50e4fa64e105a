#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "zzkit/config.hpp"
#include "zzkit/csv.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/fixtures.hpp"
#include "zzkit/foster.hpp"
#include "zzkit/sweeps.hpp"

using namespace zzkit;
using namespace zzkit::io;
using doctest::Approx;

namespace {

const std::filesystem::path source_dir{ZZKIT_SOURCE_DIR};

std::string config_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "zzkit_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void check_levels(const QubitFixture& q, double flux, const std::string& freq_key, const std::string& alpha_key) {
  const auto lv = circuit::transmon_spectrum(q.transmon(flux));
  CHECK(std::abs(lv.omega01 - q.get(freq_key)) <= 1e6);
  if (!alpha_key.empty()) CHECK(std::abs(lv.anharmonicity - q.get(alpha_key)) <= 2e6);
}

}  // namespace

TEST_CASE("chip-1 fixture reproduces its sweet spots") {
  const DeviceFixture fx = load_fixture(resolve_fixture("chip1"));
  REQUIRE(fx.qubits.size() == 2);
  // Q1 alpha is matched at its working point (lower sweet spot), Q2 at the upper one.
  check_levels(fx.qubits[0], 0.0, "omega_uss_hz", "");
  check_levels(fx.qubits[0], 0.5, "omega_lss_hz", "alpha_hz");
  check_levels(fx.qubits[1], 0.0, "omega_uss_hz", "alpha_hz");
  check_levels(fx.qubits[1], 0.5, "omega_lss_hz", "");
  REQUIRE(fx.pauli_beta_hz);
  CHECK(fx.pauli_model().zeta == Approx(4 * (*fx.pauli_beta_hz)[5]));
}

TEST_CASE("chip-2 fixture reproduces its sweet spots") {
  const DeviceFixture fx = load_fixture(resolve_fixture("chip2"));
  REQUIRE(fx.qubits.size() == 2);
  for (const auto& q : fx.qubits) check_levels(q, 0.0, "omega_uss_hz", "alpha_hz");
  const CircuitDescription dev = circuit_from_fixture(fx);
  REQUIRE(dev.coupling.g_hz);
}

TEST_CASE("every fixture field carries a provenance") {
  for (const char* name : {"chip1", "chip2"}) {
    const DeviceFixture fx = load_fixture(resolve_fixture(name));
    std::size_t total = 0;
    for (const auto p : {Provenance::paper_table, Provenance::paper_text, Provenance::back_solved}) {
      total += fx.fields_with(p).size();
    }
    std::size_t fields = fx.coupling.size() + fx.blockade.size();
    for (const auto& q : fx.qubits) fields += q.fields.size();
    CHECK(total == fields);
    CHECK_FALSE(fx.fields_with(Provenance::back_solved).empty());
  }
  const std::string missing = R"({"name": "x", "qubits": [{"name": "Q", "ec_hz": {"value": 3e8}}]})";
  CHECK_THROWS_AS(parse_fixture(missing), ConfigError);
  const std::string unknown = R"({"name": "x", "qubits": [{"name": "Q", "ec_hz": {"value": 3e8, "provenance": "guess"}}]})";
  CHECK_THROWS_AS(parse_fixture(unknown), ConfigError);
  const std::string bare = R"({"name": "x", "qubits": [{"name": "Q", "ec_hz": 3e8}]})";
  CHECK_THROWS_AS(parse_fixture(bare), ConfigError);
  CHECK_THROWS_AS(resolve_fixture("no_such_chip"), ConfigError);
}

TEST_CASE("config diagnostics name the location") {
  const std::string syntax = "{\n  \"device\": {\"fixture\": \"chip1\"},\n  \"delta_hz\": [1e9 2e9]\n}";
  const std::string e1 = config_error([&] { parse_zz_sweep_config(syntax); });
  CHECK(e1.find("3:") != std::string::npos);

  const std::string unknown = R"({"device": {"fixture": "chip1"}, "delta_hz": [1e9, 2e9], "levles": 5})";
  const std::string e2 = config_error([&] { parse_zz_sweep_config(unknown); });
  CHECK(e2.find("levles") != std::string::npos);

  const std::string type = R"({"device": {"fixture": "chip1"}, "delta_hz": {"start": 1e9, "stop": 2e9, "points": "ten"}})";
  const std::string e3 = config_error([&] { parse_zz_sweep_config(type); });
  CHECK(e3.find("/delta_hz/points") != std::string::npos);

  const std::string one = R"({"device": {"fixture": "chip1"}, "delta_hz": [1e9]})";
  CHECK(config_error([&] { parse_zz_sweep_config(one); }).find("at least 2") != std::string::npos);
  const std::string wiggle = R"({"device": {"fixture": "chip1"}, "delta_hz": [1e9, 2e9, 1.5e9]})";
  CHECK(config_error([&] { parse_zz_sweep_config(wiggle); }).find("monotone") != std::string::npos);

  const std::string both = R"({"device": {"qubits": [{"ej_sum_hz": 2e10, "ec_hz": 3e8}, {"ej_sum_hz": 2e10, "ec_hz": 3e8}],
                                "coupling": {"g_hz": 1e7, "c12_farads": 1e-15}}, "delta_hz": [1e9, 2e9]})";
  CHECK_FALSE(config_error([&] { parse_zz_sweep_config(both); }).empty());
  CHECK_THROWS_AS(load_blockade_config(source_dir / "configs" / "missing.json"), ConfigError);
}

TEST_CASE("every shipped config loads") {
  CHECK_NOTHROW(load_zz_sweep_config(source_dir / "configs/zz_sweep_chip1.json"));
  CHECK_NOTHROW(load_blockade_config(source_dir / "configs/blockade_delay.json"));
  CHECK_NOTHROW(load_blockade_config(source_dir / "configs/blockade_spectral.json"));
  CHECK_NOTHROW(load_blockade_config(source_dir / "configs/blockade_relaxation.json"));
  CHECK_NOTHROW(load_blockade_config(source_dir / "configs/blockade_lab_frame.json"));
  CHECK_NOTHROW(load_flux_config(source_dir / "configs/flux_chip1.json"));
  CHECK_NOTHROW(load_ramsey_config(source_dir / "configs/ramsey.json"));
  CHECK_NOTHROW(load_optimize_config(source_dir / "configs/optimize_rosenbrock.json"));
  CHECK_NOTHROW(load_optimize_config(source_dir / "configs/optimize_chip2.json"));
  CHECK_NOTHROW(load_optimize_config(source_dir / "configs/optimize_infeasible.json"));
}

TEST_CASE("CSV formatting round trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  const std::string text = format_csv({"a", "b"}, {{"1", "2"}, {"3", "nan"}});
  CHECK(text == "a,b\n1,2\n3,nan\n");
  const CsvTable t = parse_csv(text);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.numeric("a") == std::vector<double>{1.0, 3.0});
  CHECK(std::isnan(t.numeric("b")[1]));
  CHECK_THROWS_AS(t.column("c"), ConfigError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ConfigError);
}

TEST_CASE("emitted files match their schemas and are deterministic") {
  ZzSweepConfig zz = load_zz_sweep_config(source_dir / "configs/zz_sweep_chip1.json");
  zz.delta_hz = {0.8e9, 1.6e9, 2.4e9};
  const std::string zz_csv = zz_sweep_csv(run_zz_sweep(zz, 2));
  CHECK(parse_csv(zz_csv).header == zz_sweep_header);
  CHECK(zz_sweep_csv(run_zz_sweep(zz, 1)) == zz_csv);

  BlockadeConfig bl = load_blockade_config(source_dir / "configs/blockade_delay.json");
  bl.delays_s = {-50e-9, 0.0, 50e-9};
  bl.pulse_lengths_s = {40e-9};
  const std::string bl_csv = blockade_csv(run_blockade_sweep(bl, 3));
  CHECK(parse_csv(bl_csv).header == blockade_header);
  CHECK(parse_csv(bl_csv).rows.size() == 3);
  CHECK(blockade_csv(run_blockade_sweep(bl, 1)) == bl_csv);

  bl.readout_matrix = std::array<Eigen::Matrix2d, 2>{Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};
  const CsvTable measured = parse_csv(blockade_csv(run_blockade_sweep(bl)));
  CHECK(measured.header == blockade_measured_header);
  CHECK(measured.numeric("p1_e_measured") == measured.numeric("p1_e"));

  BlockadeConfig sp = load_blockade_config(source_dir / "configs/blockade_spectral.json");
  sp.pulse_lengths_s = {16e-9, 52e-9};
  CHECK(parse_csv(spectral_csv(run_blockade_spectral(sp, 2))).header == spectral_header);

  FluxSpectroscopyConfig fl = load_flux_config(source_dir / "configs/flux_chip1.json");
  fl.flux_phi0 = {-0.2, -0.1, 0.0};
  const FluxResult fr = run_flux_spectroscopy(fl, 2);
  CHECK(parse_csv(flux_csv(fr)).header == flux_header);
  const auto summary = nlohmann::json::parse(flux_summary_json(fr));
  CHECK(summary.contains("two_j_hz"));

  RamseyConfig rc = load_ramsey_config(source_dir / "configs/ramsey.json");
  rc.zeta_hz = {15.25e6};
  const std::string r_csv = ramsey_csv(run_ramsey(rc));
  CHECK(parse_csv(r_csv).header == ramsey_header);
  CHECK(parse_csv(r_csv).rows.size() == rc.free_times_s.size());

  OptimizeConfig oc = load_optimize_config(source_dir / "configs/optimize_rosenbrock.json");
  oc.problem.de.generations = 20;
  const OptimizeOutput oo = run_optimize(oc);
  CHECK(parse_csv(optimize_history_csv(oo)).header == history_header);
  CHECK(optimize_result_json(run_optimize(oc, std::nullopt, 4)) == optimize_result_json(oo));
  const auto j = nlohmann::json::parse(optimize_result_json(oo));
  CHECK(j.contains("history"));
}

TEST_CASE("zero coupling gives zero ZZ in every column") {
  ZzSweepConfig zz = load_zz_sweep_config(source_dir / "configs/zz_sweep_chip1.json");
  zz.g_hz = 0.0;
  zz.delta_hz = {0.8e9, 1.6e9, 2.4e9};
  for (const ZzRow& r : run_zz_sweep(zz)) {
    CHECK(r.error.empty());
    CHECK(std::abs(r.zeta_exact_hz) < 1.0);
    CHECK(r.zeta_perturbative_hz == 0.0);
    CHECK(r.zeta_series_hz == 0.0);
  }
}

TEST_CASE("ZZ sweep on the chip-1 fixture falls with detuning") {
  const auto rows = run_zz_sweep(load_zz_sweep_config(source_dir / "configs/zz_sweep_chip1.json"), 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i].zeta_exact_hz) < std::abs(rows[i - 1].zeta_exact_hz));
  }
  CHECK(std::abs(rows.front().zeta_exact_hz) > 100e6);
  CHECK(std::abs(rows.back().zeta_exact_hz) < 25e6);
}

TEST_CASE("full asymmetry removes the flux dependence") {
  FluxSpectroscopyConfig fl = load_flux_config(source_dir / "configs/flux_chip1.json");
  fl.device.qubits[1].squid.asymmetry_d = 1.0;
  fl.flux_phi0 = {-0.25, -0.15, -0.05, 0.05};
  const FluxResult r = run_flux_spectroscopy(fl);
  for (const auto& p : r.points) CHECK(p.q2_bare == Approx(r.points.front().q2_bare).epsilon(1e-12));
  CHECK_FALSE(r.two_j_hz);
  CHECK_FALSE(r.note.empty());
}

TEST_CASE("far-detuned spectator shifts the dressed line only dispersively") {
  FluxSpectroscopyConfig fl = load_flux_config(source_dir / "configs/flux_chip1.json");
  fl.q1_flux = 0.0;  // Q1 at its 9.2 GHz upper sweet spot
  fl.flux_phi0 = {-0.25, -0.15, 0.0};
  const FluxResult r = run_flux_spectroscopy(fl);
  const double g = fl.device.kerr_params().exchange_g;
  double last = 0.0;
  for (const auto& p : r.points) {
    const double shift = p.q2_bare - p.lower;
    const double delta = p.q1_bare - p.q2_bare;
    // Second-order exchange shift, with the counter-rotating partner.
    const double expected = g * g / delta;
    CHECK(shift > 0.0);
    CHECK(shift == Approx(expected).epsilon(0.5));
    CHECK(shift > last);
    last = shift;
  }
}

TEST_CASE("foster fit round trip through a samples file") {
  circuit::FosterMode a, b;
  auto lc = [](double f_hz, double z) {
    circuit::FosterMode m;
    const double w = 2 * M_PI * f_hz;
    m.capacitance_c = 1.0 / (w * z);
    m.inductance_l = z / w;
    return m;
  };
  a = lc(4e9, 45.0);
  b = lc(11e9, 60.0);
  std::vector<double> omegas;
  for (int i = 0; i < 300; ++i) omegas.push_back(2 * M_PI * 1e9 * std::pow(30.0, i / 299.0));
  const auto y = circuit::invert_samples(circuit::synthesize_impedance({a, b}, omegas));
  const auto path = scratch("two_mode.csv");
  write_text(path, samples_csv(y));
  CHECK(read_samples(path).size() == y.size());

  const std::string cfg = R"({"samples": ")" + path.string() + R"(", "n_poles": 4})";
  const FosterFitOutput out = run_foster_fit(parse_foster_fit_config(cfg));
  REQUIRE(out.modes.size() == 2);
  CHECK(out.modes[0].frequency_hz() == Approx(4e9).epsilon(1e-6));
  CHECK(out.modes[1].frequency_hz() == Approx(11e9).epsilon(1e-6));
  const auto j = nlohmann::json::parse(foster_fit_json(out));
  CHECK(j.at("modes").size() == 2);
  CHECK(j.at("modes")[0].at("r_ohms").is_null());

  write_text(path, "omega,re,im\n1,2,3\n");
  CHECK_THROWS_AS(read_samples(path), ConfigError);
}

TEST_CASE("protocol mode runs an explicit pulse list") {
  const BlockadeConfig c = load_blockade_config(source_dir / "configs/blockade_protocol.json");
  REQUIRE(c.mode == BlockadeMode::protocol);
  REQUIRE(c.pulses.size() == 2);
  CHECK(c.pulses[0].carrier == c.model.transition(2, 0));
  CHECK(c.pulses[0].amplitude == Approx(dynamics::pi_pulse_amplitude(dynamics::PulseShape::truncated_cosine, 200e-9)));
  const auto rows = run_blockade_sweep(c);
  REQUIRE(rows.size() == 1);
  dynamics::BlockadeSettings s;
  s.pulse_length = 200e-9;
  const auto p = dynamics::blockade_point(c.model, 100e-9, s);
  CHECK(rows[0].p1_e == Approx(p.p1_e).epsilon(1e-9));
  CHECK(rows[0].p2_e == Approx(p.p2_e).epsilon(1e-9));
  CHECK(rows[0].p1_e_measured);

  const std::string mixed = R"({"model": {"omega1_hz": 6e9, "omega2_hz": 5e9, "zeta_hz": 1e7}, "mode": "protocol",
    "delays_s": [0, 1e-9], "pulses": [{"target_qubit": 1, "duration_s": 1e-8}]})";
  CHECK_THROWS_AS(parse_blockade_config(mixed), ConfigError);
  const std::string qubit = R"({"model": {"omega1_hz": 6e9, "omega2_hz": 5e9, "zeta_hz": 1e7}, "mode": "protocol",
    "pulses": [{"target_qubit": 3, "duration_s": 1e-8}]})";
  CHECK(config_error([&] { parse_blockade_config(qubit); }).find("/pulses/0/target_qubit") != std::string::npos);
}

TEST_CASE("spectrum dump carries labels and Pauli coefficients") {
  ZzSweepConfig zz = load_zz_sweep_config(source_dir / "configs/zz_sweep_chip1.json");
  zz.delta_hz = {0.0, 2e9};
  const auto rows = run_zz_sweep(zz);
  const auto j = nlohmann::json::parse(zz_spectrum_json(rows));
  REQUIRE(j.size() == 2);
  CHECK(j[0].at("beta_hz").is_null());
  const auto& e = j[1];
  CHECK(e.at("states").size() == rows[1].spectrum->basis_labels.size());
  CHECK(4.0 * e.at("beta_hz")[5].get<double>() == Approx(rows[1].zeta_exact_hz).epsilon(1e-9));
  CHECK(e.at("beta_hz")[2].get<double>() == 0.0);
}

#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zzkit/circuit.hpp"
#include "zzkit/design.hpp"
#include "zzkit/driven_system.hpp"
#include "zzkit/evolution.hpp"
#include "zzkit/fixtures.hpp"
#include "zzkit/protocols.hpp"

namespace zzkit::io {

// Every loader rejects unknown keys and reports failures as ConfigError with
// a JSON-pointer style location ("/grid/points: expected an integer") or a
// line:column position for syntax errors.

/// Two transmons with a capacitive or direct coupling, optionally with Foster
/// modes and a participation matrix for black-box quantization.
struct CircuitDescription {
  std::vector<circuit::TransmonSpec> qubits;
  circuit::Coupling coupling;
  std::vector<circuit::FosterMode> foster;
  std::optional<Eigen::MatrixXd> participation;  // phi_zpf(mode, junction)

  circuit::KerrParams kerr_params() const;
};

CircuitDescription parse_circuit_description(const std::string& json_text);
CircuitDescription load_circuit_description(const std::filesystem::path& path);
CircuitDescription circuit_from_fixture(const DeviceFixture& fixture);

enum class DeltaMode { direct, flux };

struct ZzSweepConfig {
  CircuitDescription device;
  std::vector<double> delta_hz;
  DeltaMode mode = DeltaMode::direct;
  int levels = 4;
  int max_excitation = 4;
  int series_order = 4;
  std::optional<double> g_hz;  // replaces the device coupling
  std::string out;
  std::string spectrum_out;  // optional JSON dump of every labeled spectrum
};

/// protocol: one run of an explicit pulse list instead of a generated grid.
enum class BlockadeMode { delay, pulse_length, spectral, protocol };

struct BlockadeConfig {
  dynamics::TwoQubitModel model;
  BlockadeMode mode = BlockadeMode::delay;
  std::vector<double> delays_s;
  std::vector<double> pulse_lengths_s;
  std::vector<dynamics::PulseSpec> pulses;  // protocol mode
  double protocol_delay_s = 0.0;            // protocol mode, reported in the CSV
  dynamics::BlockadeSettings settings;
  std::optional<dynamics::DissipationSpec> dissipation;
  std::optional<std::array<Eigen::Matrix2d, 2>> readout_matrix;
  double spectral_offset_hz = 0.0;  // 0 means zeta
  double spectral_window_hz = 0.0;  // 0 means 1 MHz
  dynamics::IntegratorOptions integrator;
  std::string out;
};

struct FluxSpectroscopyConfig {
  CircuitDescription device;
  std::vector<double> flux_phi0;  // qubit-2 flux grid
  std::optional<double> q1_flux;
  std::string out;
  std::string summary_out;
};

struct RamseyConfig {
  dynamics::TwoQubitModel model;
  std::vector<double> zeta_hz;  // empty: the model value
  std::vector<double> free_times_s;
  dynamics::RamseySettings settings;
  std::string out;
  std::string summary_out;
};

enum class TestFunction { none, rosenbrock };

struct OptimizeConfig {
  optimizer::OptimizationProblem problem;
  TestFunction test_function = TestFunction::none;
  std::string out;
  std::string history_out;
};

enum class SampleKind { admittance, impedance };

struct FosterFitConfig {
  std::filesystem::path samples;
  int n_poles = 2;
  SampleKind kind = SampleKind::admittance;
  std::string out;
};

/// Two-level model from {"fixture"}, {"pauli_beta_hz"} or explicit
/// {"omega1_hz", "omega2_hz", "zeta_hz", "jxx_hz", "jyy_hz"} JSON.
dynamics::TwoQubitModel parse_model(const std::string& json_text);

ZzSweepConfig load_zz_sweep_config(const std::filesystem::path& path);
BlockadeConfig load_blockade_config(const std::filesystem::path& path);
FluxSpectroscopyConfig load_flux_config(const std::filesystem::path& path);
RamseyConfig load_ramsey_config(const std::filesystem::path& path);
OptimizeConfig load_optimize_config(const std::filesystem::path& path);
FosterFitConfig load_foster_fit_config(const std::filesystem::path& path);

ZzSweepConfig parse_zz_sweep_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
BlockadeConfig parse_blockade_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
FluxSpectroscopyConfig parse_flux_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RamseyConfig parse_ramsey_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
OptimizeConfig parse_optimize_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
FosterFitConfig parse_foster_fit_config(const std::string& json_text, const std::filesystem::path& base_dir = {});

}  // namespace zzkit::io

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zzkit/circuit.hpp"
#include "zzkit/driven_system.hpp"

namespace zzkit::io {

enum class Provenance { paper_table, paper_text, back_solved };

Provenance parse_provenance(const std::string& name);
std::string to_string(Provenance p);

struct FixtureValue {
  double value = 0.0;
  Provenance provenance = Provenance::paper_table;
  std::string note;
};

struct QubitFixture {
  std::string name;
  std::map<std::string, FixtureValue> fields;

  bool has(const std::string& key) const { return fields.count(key) != 0; }
  double get(const std::string& key) const;  // throws ConfigError when missing
  /// Charge-model spec at the stored working flux unless one is given.
  circuit::TransmonSpec transmon(std::optional<double> flux = std::nullopt) const;
};

struct DeviceFixture {
  std::string name;
  std::vector<QubitFixture> qubits;
  std::map<std::string, FixtureValue> coupling;  // c12_farads or g_hz
  std::optional<std::array<double, 6>> pauli_beta_hz;
  std::map<std::string, FixtureValue> blockade;  // zeta_hz, t1_decay_s, t1_recovery_s
  std::vector<double> design_capacitances_farads;

  circuit::Coupling coupling_spec() const;
  /// Two-level model read from the Pauli table (Z|1> = +|1>).
  dynamics::TwoQubitModel pauli_model() const;
  /// "Q1.alpha_hz"-style names of every field with the given provenance.
  std::vector<std::string> fields_with(Provenance p) const;
};

DeviceFixture parse_fixture(const std::string& json_text);
DeviceFixture load_fixture(const std::filesystem::path& path);

/// A path, or a bare name looked up as <dir>/<name>.json in $ZZKIT_FIXTURE_DIR,
/// then the installed and source fixture directories.
std::filesystem::path resolve_fixture(const std::string& name_or_path);

}  // namespace zzkit::io

#include "zzkit/fixtures.hpp"

#include <cstdlib>
#include <fmt/format.h>

#include "json_util.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/pauli.hpp"

#ifndef ZZKIT_FIXTURE_INSTALL_DIR
#define ZZKIT_FIXTURE_INSTALL_DIR ""
#endif
#ifndef ZZKIT_FIXTURE_SOURCE_DIR
#define ZZKIT_FIXTURE_SOURCE_DIR ""
#endif

namespace zzkit::io {

using detail::Node;

Provenance parse_provenance(const std::string& name) {
  if (name == "paper-table") return Provenance::paper_table;
  if (name == "paper-text") return Provenance::paper_text;
  if (name == "back-solved") return Provenance::back_solved;
  throw ConfigError(fmt::format("unknown provenance '{}' (paper-table, paper-text, back-solved)", name));
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::paper_table: return "paper-table";
    case Provenance::paper_text: return "paper-text";
    case Provenance::back_solved: return "back-solved";
  }
  return "unknown";
}

double QubitFixture::get(const std::string& key) const {
  const auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError(fmt::format("fixture qubit {} has no field '{}'", name, key));
  return it->second.value;
}

circuit::TransmonSpec QubitFixture::transmon(std::optional<double> flux) const {
  circuit::TransmonSpec t;
  t.squid.ej_sum = get("ej_sum_hz");
  t.squid.asymmetry_d = get("asymmetry_d");
  t.squid.flux = flux.value_or(has("flux_phi0") ? get("flux_phi0") : 0.0);
  t.ec = get("ec_hz");
  return t;
}

circuit::Coupling DeviceFixture::coupling_spec() const {
  circuit::Coupling c;
  if (const auto it = coupling.find("g_hz"); it != coupling.end()) {
    c.g_hz = it->second.value;
    return c;
  }
  const auto it = coupling.find("c12_farads");
  if (it == coupling.end()) throw ConfigError(fmt::format("fixture {} has no coupling", name));
  if (qubits.size() != 2) throw ConfigError("capacitive coupling needs two qubits");
  c.c12 = it->second.value;
  c.shunt_caps = {circuit::shunt_from_ec(qubits[0].get("ec_hz"), c.c12),
                  circuit::shunt_from_ec(qubits[1].get("ec_hz"), c.c12)};
  return c;
}

dynamics::TwoQubitModel DeviceFixture::pauli_model() const {
  if (!pauli_beta_hz) throw ConfigError(fmt::format("fixture {} has no Pauli table", name));
  spectrum::PauliDecomposition d;
  d.beta = *pauli_beta_hz;
  d.convention = spectrum::ZConvention::excited_positive;
  return dynamics::TwoQubitModel::from_pauli(d);
}

std::vector<std::string> DeviceFixture::fields_with(Provenance p) const {
  std::vector<std::string> out;
  for (const auto& q : qubits) {
    for (const auto& [k, v] : q.fields) {
      if (v.provenance == p) out.push_back(q.name + "." + k);
    }
  }
  for (const auto& [k, v] : coupling) {
    if (v.provenance == p) out.push_back("coupling." + k);
  }
  for (const auto& [k, v] : blockade) {
    if (v.provenance == p) out.push_back("blockade." + k);
  }
  return out;
}

namespace {

struct Annotated {
  Node value;
  Provenance provenance;
  std::string note;
};

Annotated annotated(const Node& n) {
  n.expect_keys({"value", "provenance", "note"});
  if (!n.has("provenance")) n.fail("every fixture value needs a provenance");
  return {n.child("value"), parse_provenance(n.child("provenance").string()), n.string_or("note", "")};
}

FixtureValue scalar(const Node& n) {
  const Annotated a = annotated(n);
  return {a.value.number(), a.provenance, a.note};
}

std::map<std::string, FixtureValue> scalar_map(const Node& n) {
  if (!n.raw().is_object()) n.fail("expected an object");
  std::map<std::string, FixtureValue> out;
  for (const auto& [key, value] : n.raw().items()) out[key] = scalar(n.child(key));
  return out;
}

DeviceFixture parse_fixture_json(const detail::json& j) {
  const Node root(j, "");
  root.expect_keys({"name", "qubits", "coupling", "pauli_beta_hz", "blockade", "design_capacitances_farads"});
  DeviceFixture f;
  f.name = root.child("name").string();
  const Node qs = root.child("qubits");
  static const char* const qubit_keys[] = {"omega_uss_hz", "omega_lss_hz", "alpha_hz",  "t1_s",
                                           "t2_star_s",    "t2_echo_s",    "ej_sum_hz", "ec_hz",
                                           "asymmetry_d",  "flux_phi0"};
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const Node q = qs.at(i);
    QubitFixture qf;
    qf.name = q.child("name").string();
    for (const auto& [key, value] : q.raw().items()) {
      if (key == "name") continue;
      bool known = false;
      for (const char* k : qubit_keys) known = known || key == k;
      if (!known) q.fail(fmt::format("unknown key '{}'", key));
      qf.fields[key] = scalar(q.child(key));
    }
    f.qubits.push_back(std::move(qf));
  }
  if (root.has("coupling")) {
    const Node c = root.child("coupling");
    c.expect_keys({"c12_farads", "g_hz"});
    f.coupling = scalar_map(c);
  }
  if (root.has("blockade")) {
    const Node b = root.child("blockade");
    b.expect_keys({"zeta_hz", "t1_decay_s", "t1_recovery_s"});
    f.blockade = scalar_map(b);
  }
  if (root.has("pauli_beta_hz")) {
    const Annotated a = annotated(root.child("pauli_beta_hz"));
    const auto v = a.value.numbers();
    if (v.size() != 6) a.value.fail("expected six coefficients");
    std::array<double, 6> beta{};
    std::copy(v.begin(), v.end(), beta.begin());
    f.pauli_beta_hz = beta;
  }
  if (root.has("design_capacitances_farads")) {
    f.design_capacitances_farads = annotated(root.child("design_capacitances_farads")).value.numbers();
  }
  return f;
}

}  // namespace

DeviceFixture parse_fixture(const std::string& json_text) {
  return parse_fixture_json(detail::parse_json_text(json_text, "fixture"));
}

DeviceFixture load_fixture(const std::filesystem::path& path) {
  return parse_fixture_json(detail::read_json_file(path));
}

std::filesystem::path resolve_fixture(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  const fs::path direct(name_or_path);
  if (direct.has_extension() || direct.has_parent_path()) {
    if (!fs::exists(direct)) throw ConfigError(fmt::format("fixture file '{}' not found", name_or_path));
    return direct;
  }
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("ZZKIT_FIXTURE_DIR")) dirs.emplace_back(env);
  for (const char* d : {ZZKIT_FIXTURE_INSTALL_DIR, ZZKIT_FIXTURE_SOURCE_DIR}) {
    if (*d) dirs.emplace_back(d);
  }
  for (const auto& d : dirs) {
    const fs::path p = d / (name_or_path + ".json");
    if (fs::exists(p)) return p;
  }
  throw ConfigError(fmt::format("fixture '{}' not found (set ZZKIT_FIXTURE_DIR)", name_or_path));
}

}  // namespace zzkit::io

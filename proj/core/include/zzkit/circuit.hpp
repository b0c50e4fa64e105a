#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zzkit::circuit {

/// Two-junction SQUID. Energies are E/h in Hz; flux is in units of Phi_0.
struct SquidSpec {
  double ej_sum = 0.0;
  double asymmetry_d = 0.0;
  double flux = 0.0;

  /// Throws InvalidArgument unless ej_sum > 0 and |d| <= 1.
  void validate() const;
};

struct TransmonSpec {
  SquidSpec squid;
  double ec = 0.0;  // E_C/h in Hz
  int n_levels = 4;
  int charge_basis_cutoff = 20;  // charge states n in [-cutoff, cutoff]

  void validate() const;
};

/// E_J,Sigma * sqrt(cos^2(pi Phi) + d^2 sin^2(pi Phi)).
double effective_josephson_energy(const SquidSpec& squid);

struct TransmonLevels {
  double omega01 = 0.0;        // Hz
  double anharmonicity = 0.0;  // Hz, negative for transmons
  std::vector<double> level_energies;  // Hz, ground state at 0
  double ej_over_ec = 0.0;
  int cutoff_used = 0;

  bool outside_transmon_regime() const { return ej_over_ec < 20.0; }
};

struct SpectrumOptions {
  int max_cutoff = 400;
  double stability_hz = 1e3;  // tolerance on the cutoff -> cutoff + 5 shift
  double offset_charge = 0.0;
};

/// Charge-basis diagonalization of 4 E_C (n - n_g)^2 - E_J cos(phi).
/// Throws ConvergenceError when the lowest n_levels are not stable to
/// stability_hz before max_cutoff.
TransmonLevels transmon_spectrum(const TransmonSpec& spec, const SpectrumOptions& opts = {});

/// Same, for an explicit E_J (Hz), bypassing the SQUID model.
TransmonLevels transmon_spectrum_ej(double ej_hz, double ec_hz, int n_levels = 4,
                                    int start_cutoff = 20, const SpectrumOptions& opts = {});

/// Large E_J/E_C asymptote: (sqrt(8 E_J E_C) - E_C, -E_C).
std::pair<double, double> transmon_asymptotic(double ej_hz, double ec_hz);

/// E_J (Hz) for which omega01 equals target_hz at fixed E_C.
double solve_ej_for_frequency(double target_hz, double ec_hz);

/// Flux in [0, 1/2] at which the transmon reaches target_hz. Throws
/// DomainError when the target lies outside the tunable range.
double flux_for_frequency(const TransmonSpec& spec, double target_hz);

/// One parallel resonator of a Foster I network.
struct FosterMode {
  double inductance_l = 0.0;  // H
  double capacitance_c = 0.0; // F
  double resistance_r = std::numeric_limits<double>::infinity();  // ohm

  double omega() const;  // rad/s
  double frequency_hz() const;
  double impedance() const;  // sqrt(L/C)
  double kappa() const;      // 1/(RC), 0 when lossless
  void validate() const;
};

/// phi_zpf(m, j) for mode m and junction j, plus E_J,j/h per junction.
struct JunctionParticipation {
  Eigen::MatrixXd phi_zpf;
  std::vector<double> ej_per_junction;
};

struct KerrParams {
  std::vector<double> mode_freqs;  // Hz
  std::vector<double> self_kerr;   // Hz, signed (negative for transmons)
  Eigen::MatrixXd cross_kerr;      // Hz, symmetric, zero diagonal
  double exchange_g = 0.0;         // Hz, two-mode exchange rate
  double bare_cross_kerr_chi = 0.0;  // Hz, coefficient of -chi n1 n2
  std::vector<std::string> warnings;

  std::size_t modes() const { return mode_freqs.size(); }
};

/// Zero-point phase fluctuation across a single junction port for every mode,
/// phi_zpf = sqrt(hbar Z_m / 2) / (hbar / 2e).
JunctionParticipation single_port_participation(const std::vector<FosterMode>& modes,
                                                double ej_hz);

/// Quartic (Kerr) restoration of the Josephson nonlinearity on top of the
/// Foster modes. For two modes, bare_cross_kerr_chi is set to cross_kerr(0,1).
KerrParams kerr_from_foster(const std::vector<FosterMode>& modes,
                            const JunctionParticipation& participation);

/// Capacitive exchange g = C12 / (2 sqrt(Csum1 Csum2)) * sqrt(w1 w2),
/// Csum_i = C_shunt,i + C12.
double capacitive_exchange(double c12, double c_shunt1, double c_shunt2, double omega1_hz,
                           double omega2_hz);

/// Two transmons coupled by C12. Frequencies and anharmonicities come from
/// charge-basis diagonalization of each qubit. The capacitive coupling is
/// linear in the node charges, so to quartic order in the phases it yields
/// no explicit n1 n2 term: bare_cross_kerr_chi = 0.
KerrParams two_transmon_kerr(const TransmonSpec& q1, const TransmonSpec& q2,
                             double coupling_capacitance, std::pair<double, double> shunt_caps);

/// Same with a directly supplied exchange rate (Hz).
KerrParams two_transmon_kerr_g(const TransmonSpec& q1, const TransmonSpec& q2, double g_hz);

/// Either a coupling capacitance with the two shunt capacitances, or a
/// directly specified exchange rate g_hz (which takes precedence).
struct Coupling {
  double c12 = 0.0;  // F
  std::pair<double, double> shunt_caps{0.0, 0.0};  // F
  std::optional<double> g_hz;
};

KerrParams two_transmon_kerr(const TransmonSpec& q1, const TransmonSpec& q2, const Coupling& coupling);

/// Shunt capacitance implied by E_C when the node also carries C12.
double shunt_from_ec(double ec_hz, double c12);

}  // namespace zzkit::circuit

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zzkit/driven_system.hpp"
#include "zzkit/evolution.hpp"

namespace zzkit::dynamics {

/// Which conditional line each drive sits on. ground_conditioned drives
/// w_i - zeta/2 (the |00> -> |10>, |01> transitions); excited_conditioned
/// drives w_i + zeta/2, the line with the partner excited.
enum class CarrierConvention { ground_conditioned, excited_conditioned };

CarrierConvention parse_carrier_convention(const std::string& name);
std::string to_string(CarrierConvention c);

struct ProtocolSpec {
  std::vector<PulseSpec> pulses;
  double delay = 0.0;  // > 0: qubit-2 pulse first
  double total_time = 0.0;
  Frame frame = Frame::rotating;
  std::vector<double> readout_times;
  bool rwa = true;  // rotating frame only

  void validate() const;
};

struct BlockadeSettings {
  PulseShape shape = PulseShape::truncated_cosine;
  double pulse_length = 200e-9;
  double gaussian_sigma_fraction = 0.25;  // sigma / pulse_length for gaussian pulses
  Frame frame = Frame::rotating;
  CarrierConvention carriers = CarrierConvention::ground_conditioned;
  bool numeric_calibration = false;
  double readout_wait = 0.0;  // extra idle time between the last pulse and readout
};

/// Pi-pulse pair for a given delay: the first pulse starts at 0, the other at
/// |delay|. Readout at the end of the later pulse (plus readout_wait).
ProtocolSpec make_blockade_protocol(const TwoQubitModel& model, double delay, const BlockadeSettings& settings);

/// Simulates the protocol from |00> (or the state-preparation mixture).
/// Populations are reported at protocol.readout_times.
SimulationResult run_blockade_protocol(const TwoQubitModel& model, const ProtocolSpec& protocol,
                                       const std::optional<DissipationSpec>& dissipation = std::nullopt,
                                       const IntegratorOptions& opts = {});

struct BlockadePoint {
  double delay = 0.0;
  double pulse_length = 0.0;
  double p1_e = 0.0;
  double p2_e = 0.0;
  double norm_drift = 0.0;
  double trace_drift = 0.0;
};

BlockadePoint blockade_point(const TwoQubitModel& model, double delay, const BlockadeSettings& settings,
                             const std::optional<DissipationSpec>& dissipation = std::nullopt,
                             const IntegratorOptions& opts = {});

/// Pi amplitude that maximizes the excitation of the target qubit from |00>
/// on its ground-conditioned line (Brent search around the area rule).
double calibrate_pi_amplitude_numeric(const TwoQubitModel& model, int qubit, const BlockadeSettings& settings);

struct RamseySettings {
  double detuning = 0.0;       // Hz below w1^(0); 0 picks max(2|zeta|, 5 MHz)
  double pulse_length = 2e-9;  // rectangular pi/2 pulses
  double min_contrast = 0.1;
};

struct RamseyResult {
  std::vector<double> free_times;
  std::vector<double> p1_e;
  double fringe_hz = 0.0;
  double contrast = 0.0;
  double max_norm_drift = 0.0;
};

/// pi/2 - wait(t) - pi/2 on qubit 1 with qubit 2 prepared in spectator_state.
/// The fringe sits at detuning + (spectator_state ? zeta : 0), so the
/// difference between spectator states is the signed zeta.
RamseyResult run_conditional_ramsey(const TwoQubitModel& model, int spectator_state,
                                    const std::vector<double>& free_time_grid,
                                    const RamseySettings& settings = {}, const IntegratorOptions& opts = {});

/// Phi_ZZ = 2 pi zeta (2 t_flip - tau) in radians; no flip gives 2 pi zeta tau.
double echo_conditional_phase_analytic(double zeta, std::optional<double> t_flip, double tau);

struct EchoResult {
  double phase = 0.0;  // radians
  double max_norm_drift = 0.0;
};

/// Simulated conditional phase: qubit 1 starts on the equator, qubit 2 in
/// |0> or |1>, an instantaneous X on qubit 2 at t_flip. Returns the difference
/// of the accumulated qubit-1 phases between the two spectator preparations.
EchoResult run_echo_conditional_phase(const TwoQubitModel& model, std::optional<double> t_flip, double tau,
                                      int grid_points = 2001, const IntegratorOptions& opts = {});

}  // namespace zzkit::dynamics

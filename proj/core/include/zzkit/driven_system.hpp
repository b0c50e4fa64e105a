#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zzkit/circuit.hpp"
#include "zzkit/pauli.hpp"
#include "zzkit/pulse.hpp"

namespace zzkit::dynamics {

enum class Frame { lab, rotating, blockade_effective };

std::string to_string(Frame frame);
Frame parse_frame(const std::string& name);

/// Product space of two modes with d1 x d2 levels, index = n1 * d2 + n2.
struct HilbertSpace {
  int d1 = 2;
  int d2 = 2;

  int dim() const { return d1 * d2; }
  int index(int n1, int n2) const { return n1 * d2 + n2; }
  bool qubits() const { return d1 == 2 && d2 == 2; }
  std::string label(int idx) const;
  /// Lowering operator of mode 1 or 2 embedded in the product space.
  Eigen::MatrixXcd lowering(int mode) const;
  Eigen::MatrixXcd number(int mode) const;
  /// i (a - a^dag) for the given mode; the qubit sigma_y with <0|Y|1> = i.
  Eigen::MatrixXcd drive_operator(int mode) const;
};

/// One component of H(t)/h (Hz): envelope(t) * exp(i (2 pi freq_hz t + phase)) * op.
/// An empty envelope means 1. Components are stored in Hermitian-conjugate
/// pairs, so the sum is Hermitian.
struct HamiltonianTerm {
  Eigen::MatrixXcd op;
  std::function<double(double)> envelope;
  double freq_hz = 0.0;
  double phase = 0.0;
};

struct TimeDependentHamiltonian {
  HilbertSpace space;
  std::vector<HamiltonianTerm> terms;
  std::vector<double> breakpoints;  // pulse edges, the integrator lands on them
  Frame frame = Frame::lab;
  std::array<double, 2> frame_freqs{0.0, 0.0};  // rotating-frame frequencies, Hz
  bool pauli_level = true;

  /// H(t)/h in Hz.
  Eigen::MatrixXcd at(double t) const;
  void accumulate(double t, Eigen::MatrixXcd& out) const;
  /// Fastest oscillation the integrator has to resolve, Hz.
  double max_frequency_hz() const;
};

/// Pauli-level static model
///   H0 = w1/2 Z1 + w2/2 Z2 + zeta/4 Z1 Z2 + jxx X1 X2 + jyy Y1 Y2,
/// Z|1> = +|1>. The dressed transitions are w_i -/+ zeta/2 for the spectator
/// in 0 / 1.
struct TwoQubitModel {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double zeta = 0.0;
  double jxx = 0.0;
  double jyy = 0.0;

  /// Conditional frequencies give w_i and zeta; b2, b3 give jxx, jyy.
  /// Throws InvalidArgument when the decomposition implies negative qubit
  /// frequencies (wrong sign convention for the table).
  static TwoQubitModel from_pauli(const spectrum::PauliDecomposition& decomp);

  /// Transition of qubit `qubit` with the other qubit in `spectator_state`.
  double transition(int qubit, int spectator_state) const;
  Eigen::MatrixXcd static_hamiltonian() const;
};

/// Lab-frame Hamiltonian: static part plus sum of pulse drive terms.
TimeDependentHamiltonian lab_hamiltonian(const TwoQubitModel& model, const std::vector<PulseSpec>& pulses);

/// Multi-level lab Hamiltonian from Kerr parameters (full product basis).
TimeDependentHamiltonian lab_hamiltonian(const circuit::KerrParams& params, std::pair<int, int> levels,
                                         const std::vector<PulseSpec>& pulses);

/// Moves to the frame rotating at drive_freqs (Hz) on each mode's number
/// operator. With rwa, components oscillating faster than rwa_cutoff_hz are
/// dropped (default half the smallest drive frequency). Throws UnsupportedError
/// for a multi-level Hamiltonian with rwa off.
TimeDependentHamiltonian rotating_frame_transform(const TimeDependentHamiltonian& h_lab,
                                                  std::array<double, 2> drive_freqs, bool rwa,
                                                  double rwa_cutoff_hz = 0.0);

/// zeta |11><11| + sum_i Omega_i(t)/2 (cos phi X_i + sin phi Y_i), the ideal
/// blockade Hamiltonian with each drive resonant on its ground-conditioned line.
TimeDependentHamiltonian blockade_effective_hamiltonian(double zeta, const std::vector<PulseSpec>& pulses);

/// Undriven, exchange-free model w1/2 Z1 + w2/2 Z2 + zeta/4 Z1 Z2 in the frame
/// exp(i sum f_i Z_i t / 2): H = z1 Z1 + z2 Z2 + zz Z1 Z2 with z_i = (w_i - f_i)/2.
/// The algebra holds for either reading of Z. Read with Z|1> = +|1> and
/// f_i = w_i - zeta/2, or with Z|0> = +|0> and f_i = w_i + zeta/2, the
/// diagonal is zeta |11><11| up to a constant.
struct RotatingZCoefficients {
  double z1 = 0.0;
  double z2 = 0.0;
  double zz = 0.0;

  /// Diagonal over |00>, |01>, |10>, |11>.
  std::array<double, 4> diagonal(spectrum::ZConvention convention) const;
};

RotatingZCoefficients rotating_z_coefficients(const TwoQubitModel& model, std::array<double, 2> frame_freqs);

/// Pulse edges of all pulses, sorted and unique.
std::vector<double> pulse_breakpoints(const std::vector<PulseSpec>& pulses);

}  // namespace zzkit::dynamics

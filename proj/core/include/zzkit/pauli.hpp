#pragma once

#include <array>

#include "zzkit/labeling.hpp"

namespace zzkit::spectrum {

/// Sign of sigma_z on the computational states. ground_positive has
/// sigma_z|0> = +|0>, so E00 = b0 + b1 + b4 + b5. excited_positive has
/// sigma_z|1> = +|1>, so E00 = b0 - b1 - b4 + b5.
enum class ZConvention { ground_positive, excited_positive };

/// H = b0 II + b1 I Z + b2 X X + b3 Y Y + b4 Z I + b5 Z Z, all in Hz.
struct PauliDecomposition {
  std::array<double, 6> beta{};
  ZConvention convention = ZConvention::ground_positive;

  double zeta() const { return 4.0 * beta[5]; }
  /// Diagonal of the computational block: E00, E01, E10, E11.
  std::array<double, 4> computational_energies() const;
};

/// Inverts the diagonal relations for b0, b1, b4, b5 and sets b2 = b3 = j/2.
PauliDecomposition pauli_from_energies(double e00, double e01, double e10, double e11, double j_dressed,
                                       ZConvention convention = ZConvention::ground_positive);

/// Throws AmbiguousLabelError when a computational label is ambiguous.
PauliDecomposition pauli_decomposition(const LabeledSpectrum& spectrum, double j_dressed,
                                       ZConvention convention = ZConvention::ground_positive);

/// Transition frequency of each qubit conditioned on the other one's state,
/// e.g. w1_given0 = E10 - E00 and w1_given1 = E11 - E01.
struct ConditionalFrequencies {
  double w1_given0 = 0.0;
  double w1_given1 = 0.0;
  double w2_given0 = 0.0;
  double w2_given1 = 0.0;
};

ConditionalFrequencies conditional_frequencies(const PauliDecomposition& decomp);

}  // namespace zzkit::spectrum

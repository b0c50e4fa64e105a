#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "zzkit/circuit.hpp"

namespace zzkit::spectrum {

/// Occupation pair (n1, n2).
using BasisLabel = std::pair<int, int>;

struct TruncatedHamiltonian {
  Eigen::MatrixXd matrix;  // Hz, real symmetric
  std::vector<BasisLabel> basis_labels;  // lexicographic
  std::pair<int, int> levels_per_mode{4, 4};
  std::optional<int> max_total_excitation;

  /// Position of a label in the basis, or -1 when it was truncated away.
  int index_of(BasisLabel label) const;
};

/// Two-mode Kerr Hamiltonian
///   sum_m w_m n_m + a_m/2 n_m (n_m - 1) - chi n1 n2 + g (a1^dag a2 + a2^dag a1)
/// in the product Fock basis. Throws TruncationError below (2, 2) levels and
/// DimensionMismatchError unless params has exactly two modes.
TruncatedHamiltonian build_hamiltonian(const circuit::KerrParams& params,
                                       std::pair<int, int> levels_per_mode = {4, 4},
                                       std::optional<int> max_total_excitation = 4);

/// Convenience constructor for the two-mode case.
circuit::KerrParams two_mode_params(double omega1, double omega2, double alpha1, double alpha2,
                                    double g, double chi = 0.0);

}  // namespace zzkit::spectrum

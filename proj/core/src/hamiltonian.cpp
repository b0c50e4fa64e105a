#include "zzkit/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"

namespace zzkit::spectrum {

int TruncatedHamiltonian::index_of(BasisLabel label) const {
  const auto it = std::lower_bound(basis_labels.begin(), basis_labels.end(), label);
  if (it == basis_labels.end() || *it != label) return -1;
  return static_cast<int>(it - basis_labels.begin());
}

TruncatedHamiltonian build_hamiltonian(const circuit::KerrParams& params,
                                       std::pair<int, int> levels_per_mode,
                                       std::optional<int> max_total_excitation) {
  if (levels_per_mode.first < 2 || levels_per_mode.second < 2) {
    throw TruncationError(fmt::format("levels_per_mode ({}, {}) below the (2, 2) minimum",
                                      levels_per_mode.first, levels_per_mode.second));
  }
  if (params.mode_freqs.size() != 2 || params.self_kerr.size() != 2) {
    throw DimensionMismatchError(
        fmt::format("two-mode Hamiltonian needs 2 modes, got {}", params.mode_freqs.size()));
  }
  if (max_total_excitation && *max_total_excitation < 2) {
    throw TruncationError("max_total_excitation must keep the |11> state");
  }

  TruncatedHamiltonian h;
  h.levels_per_mode = levels_per_mode;
  h.max_total_excitation = max_total_excitation;
  for (int n1 = 0; n1 < levels_per_mode.first; ++n1) {
    for (int n2 = 0; n2 < levels_per_mode.second; ++n2) {
      if (max_total_excitation && n1 + n2 > *max_total_excitation) continue;
      h.basis_labels.emplace_back(n1, n2);
    }
  }

  const auto dim = static_cast<Eigen::Index>(h.basis_labels.size());
  h.matrix = Eigen::MatrixXd::Zero(dim, dim);
  const double w1 = params.mode_freqs[0];
  const double w2 = params.mode_freqs[1];
  const double a1 = params.self_kerr[0];
  const double a2 = params.self_kerr[1];
  const double chi = params.bare_cross_kerr_chi;
  const double g = params.exchange_g;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto [n1, n2] = h.basis_labels[static_cast<std::size_t>(i)];
    h.matrix(i, i) = w1 * n1 + w2 * n2 + 0.5 * a1 * n1 * (n1 - 1) + 0.5 * a2 * n2 * (n2 - 1) -
                     chi * n1 * n2;
    // a1 a2^dag moves one excitation from mode 1 to mode 2.
    if (n1 > 0) {
      const int j = h.index_of({n1 - 1, n2 + 1});
      if (j >= 0) {
        const double el = g * std::sqrt(static_cast<double>(n1)) * std::sqrt(n2 + 1.0);
        h.matrix(j, i) = el;
        h.matrix(i, j) = el;
      }
    }
  }
  return h;
}

circuit::KerrParams two_mode_params(double omega1, double omega2, double alpha1, double alpha2,
                                    double g, double chi) {
  circuit::KerrParams p;
  p.mode_freqs = {omega1, omega2};
  p.self_kerr = {alpha1, alpha2};
  p.cross_kerr = Eigen::MatrixXd::Zero(2, 2);
  p.cross_kerr(0, 1) = p.cross_kerr(1, 0) = chi;
  p.bare_cross_kerr_chi = chi;
  p.exchange_g = g;
  return p;
}

}  // namespace zzkit::spectrum

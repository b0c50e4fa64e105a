#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "zzkit/hamiltonian.hpp"

namespace zzkit::spectrum {

struct LabeledSpectrum {
  std::map<BasisLabel, double> energies;  // Hz
  std::map<BasisLabel, double> overlaps;  // |<bare|dressed>|^2
  std::map<BasisLabel, int> eigen_index;
  std::vector<BasisLabel> basis_labels;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, basis order of basis_labels
  bool used_optimal_assignment = false;

  static constexpr double ambiguity_threshold = 0.5;

  double energy(BasisLabel label) const;
  double overlap(BasisLabel label) const;
  bool ambiguous(BasisLabel label) const;
  /// True when any computational label (00, 01, 10, 11) is ambiguous.
  bool computational_ambiguous() const;
  Eigen::VectorXd eigenvector(BasisLabel label) const;
};

/// Dense diagonalization and overlap labeling. Each bare label takes its
/// maximum-overlap eigenvector; when two labels claim the same eigenvector
/// the assignment is redone optimally (Hungarian algorithm on the overlaps).
/// Throws DegenerateLabelError when a label ends up with (near) zero overlap.
LabeledSpectrum diagonalize_and_label(const TruncatedHamiltonian& h);

/// E11 - E10 - E01 + E00. Throws AmbiguousLabelError near resonance.
double zeta_exact(const LabeledSpectrum& spectrum);

struct ZetaValue {
  double zeta = 0.0;
  bool ambiguous = false;  // resonant convention was used
};

/// zeta_exact away from resonance; when the single-excitation labels are
/// ambiguous, E11 - E+ - E- + E00 with E+- the two hybridized
/// single-excitation eigenenergies, flagged.
ZetaValue zeta_with_resonant_convention(const LabeledSpectrum& spectrum);

/// Largest ||H v - E v|| / ||H|| over all eigenpairs.
double max_eigen_residual(const TruncatedHamiltonian& h, const LabeledSpectrum& spectrum);

}  // namespace zzkit::spectrum

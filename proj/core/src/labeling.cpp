#include "zzkit/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <set>

#include "zzkit/errors.hpp"

namespace zzkit::spectrum {

namespace {

constexpr double kAmbiguityTol = 1e-9;
constexpr double kDegenerateOverlap = 1e-6;

// Square assignment maximizing the summed weight (Hungarian algorithm with
// potentials, O(n^3)). Returns col[row].
std::vector<int> optimal_assignment(const Eigen::MatrixXd& weight) {
  const int n = static_cast<int>(weight.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) col[p[j] - 1] = j - 1;
  }
  return col;
}

BasisLabel label_at(const LabeledSpectrum& s, BasisLabel label) {
  if (!s.energies.count(label)) {
    throw InvalidArgument(fmt::format("label ({}, {}) is not in the truncated basis", label.first,
                                      label.second));
  }
  return label;
}

}  // namespace

double LabeledSpectrum::energy(BasisLabel label) const { return energies.at(label_at(*this, label)); }

double LabeledSpectrum::overlap(BasisLabel label) const { return overlaps.at(label_at(*this, label)); }

bool LabeledSpectrum::ambiguous(BasisLabel label) const {
  return overlap(label) < ambiguity_threshold + kAmbiguityTol;
}

bool LabeledSpectrum::computational_ambiguous() const {
  for (const BasisLabel& l : {BasisLabel{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
    if (ambiguous(l)) return true;
  }
  return false;
}

Eigen::VectorXd LabeledSpectrum::eigenvector(BasisLabel label) const {
  return eigenvectors.col(eigen_index.at(label_at(*this, label)));
}

LabeledSpectrum diagonalize_and_label(const TruncatedHamiltonian& h) {
  const Eigen::Index dim = h.matrix.rows();
  if (dim == 0 || h.matrix.cols() != dim ||
      static_cast<std::size_t>(dim) != h.basis_labels.size()) {
    throw DimensionMismatchError("Hamiltonian matrix does not match its basis");
  }
  const double scale = std::max(h.matrix.cwiseAbs().maxCoeff(), 1.0);
  if ((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("Hamiltonian is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eigensolver failed");

  LabeledSpectrum out;
  out.basis_labels = h.basis_labels;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  // ov(bare, eigen) = |<bare|v_eigen>|^2
  const Eigen::MatrixXd ov = out.eigenvectors.array().square().matrix();

  std::vector<int> assign(static_cast<std::size_t>(dim));
  std::set<int> taken;
  bool collision = false;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index best = 0;
    ov.row(i).maxCoeff(&best);
    assign[static_cast<std::size_t>(i)] = static_cast<int>(best);
    if (!taken.insert(static_cast<int>(best)).second) collision = true;
  }
  if (collision) {
    assign = optimal_assignment(ov);
    out.used_optimal_assignment = true;
  }

  for (Eigen::Index i = 0; i < dim; ++i) {
    const BasisLabel label = h.basis_labels[static_cast<std::size_t>(i)];
    const int k = assign[static_cast<std::size_t>(i)];
    const double o = ov(i, k);
    if (o < kDegenerateOverlap) {
      throw DegenerateLabelError(fmt::format(
          "bare state ({}, {}) has no distinct dressed partner (overlap {:.2e})", label.first,
          label.second, o));
    }
    out.energies[label] = out.eigenvalues(k);
    out.overlaps[label] = o;
    out.eigen_index[label] = k;
  }
  return out;
}

double zeta_exact(const LabeledSpectrum& s) {
  if (s.computational_ambiguous()) {
    throw AmbiguousLabelError("computational states are hybridized; use the resonant convention");
  }
  return s.energy({1, 1}) - s.energy({1, 0}) - s.energy({0, 1}) + s.energy({0, 0});
}

ZetaValue zeta_with_resonant_convention(const LabeledSpectrum& s) {
  ZetaValue out;
  out.ambiguous = s.computational_ambiguous();
  // The labels 10 and 01 always hold the two single-excitation eigenstates,
  // so the same combination covers E+ and E- once they hybridize.
  out.zeta = s.energy({1, 1}) - s.energy({1, 0}) - s.energy({0, 1}) + s.energy({0, 0});
  return out;
}

double max_eigen_residual(const TruncatedHamiltonian& h, const LabeledSpectrum& s) {
  const double norm = h.matrix.norm();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    const Eigen::VectorXd v = s.eigenvectors.col(k);
    worst = std::max(worst, (h.matrix * v - s.eigenvalues(k) * v).norm() / norm);
  }
  return worst;
}

}  // namespace zzkit::spectrum

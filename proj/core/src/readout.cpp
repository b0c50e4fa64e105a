#include "zzkit/readout.hpp"

#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"

namespace zzkit::dynamics {

namespace {

void check_stochastic(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionMismatchError("fidelity matrix must be square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if ((m.row(i).array() < -1e-12).any()) {
      throw StochasticityError(fmt::format("fidelity matrix row {} has negative entries", i));
    }
    const double s = m.row(i).sum();
    if (std::abs(s - 1.0) > 1e-9) {
      throw StochasticityError(fmt::format("fidelity matrix row {} sums to {:.12g}", i, s));
    }
  }
}

}  // namespace

Eigen::VectorXd apply_readout_matrix(const Eigen::VectorXd& populations, const Eigen::MatrixXd& fidelity) {
  check_stochastic(fidelity);
  if (populations.size() != fidelity.rows()) {
    throw DimensionMismatchError(fmt::format("{} populations for a {}x{} fidelity matrix", populations.size(),
                                             fidelity.rows(), fidelity.cols()));
  }
  Eigen::VectorXd out = fidelity.transpose() * populations;
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return out;
}

Eigen::VectorXd invert_readout_matrix(const Eigen::VectorXd& measured, const Eigen::MatrixXd& fidelity) {
  check_stochastic(fidelity);
  if (measured.size() != fidelity.rows()) throw DimensionMismatchError("size mismatch in readout inversion");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fidelity.transpose());
  if (!lu.isInvertible()) throw IllConditionedError("fidelity matrix is singular");
  return lu.solve(measured);
}

double measured_excited(double p_excited, const Eigen::Matrix2d& fidelity) {
  const Eigen::Vector2d p(1.0 - p_excited, p_excited);
  return apply_readout_matrix(p, fidelity)(1);
}

}  // namespace zzkit::dynamics

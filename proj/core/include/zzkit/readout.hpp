#pragma once

#include <Eigen/Dense>

namespace zzkit::dynamics {

/// measured_j = sum_i true_i M(i, j) for a row-stochastic confusion matrix M,
/// M(i, j) = P(measure j | prepared i). Throws StochasticityError when M is
/// not row-stochastic within 1e-9 and DimensionMismatchError on size mismatch.
Eigen::VectorXd apply_readout_matrix(const Eigen::VectorXd& populations, const Eigen::MatrixXd& fidelity);

/// Inverse correction: the true distribution that the matrix maps onto
/// `measured`. Throws IllConditionedError for a singular matrix.
Eigen::VectorXd invert_readout_matrix(const Eigen::VectorXd& measured, const Eigen::MatrixXd& fidelity);

/// Excited-state probability of one qubit after its 2x2 confusion matrix.
double measured_excited(double p_excited, const Eigen::Matrix2d& fidelity);

}  // namespace zzkit::dynamics

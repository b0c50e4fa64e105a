#pragma once

#include <complex>
#include <vector>

namespace zzkit::circuit {

/// One sample of a response function at real angular frequency omega (rad/s).
struct FrequencySample {
  double omega = 0.0;
  std::complex<double> value;
};

/// f(s) = sum_k residues[k] / (s - poles[k]) + direct_term, s = i omega (rad/s).
struct RationalFit {
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> residues;
  double direct_term = 0.0;
  double fit_error = 0.0;  // relative RMS over the fitted samples
  int iterations = 0;

  std::complex<double> evaluate(double omega) const;
};

struct VectorFitOptions {
  int max_iterations = 30;
  double convergence_tol = 1e-10;  // relative improvement between rounds
  double rank_tol = 1e-13;
  bool inverse_magnitude_weight = true;
  double divergence_threshold = 1e-2;  // fit_error above this after the budget is a failure
};

/// Gustavsen-Semlyen vector fitting with pole relocation. Unstable poles are
/// reflected into the left half plane; complex poles come in conjugate pairs.
/// Throws InvalidArgument on bad input, IllConditionedError when a least
/// squares system is rank deficient and FitDivergedError when the budget is
/// exhausted without a usable fit.
RationalFit vector_fit(const std::vector<FrequencySample>& samples, int n_poles,
                       const VectorFitOptions& opts = {});

}  // namespace zzkit::circuit

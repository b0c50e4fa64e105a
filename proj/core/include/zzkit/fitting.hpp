#pragma once

#include <vector>

namespace zzkit::dynamics {

/// y = amplitude * exp(-x / tau) + offset
struct ExponentialFit {
  double amplitude = 0.0;
  double tau = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};

/// y = a * exp(-x / tau) + c, Levenberg-Marquardt from a log-linear guess.
/// A recovery a - b exp(-x / tau) is the same model with amplitude = -b.
/// Throws FitError on failure.
ExponentialFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y);

/// y = offset + amplitude * cos(2 pi frequency x + phase), amplitude >= 0.
struct CosineFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
};

/// Periodogram initial guess refined by Levenberg-Marquardt. Throws FitError
/// when the peak-to-peak contrast is below min_contrast.
CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y, double min_contrast = 0.1);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace zzkit::dynamics

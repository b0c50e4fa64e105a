#pragma once

#include <string>

namespace zzkit::dynamics {

enum class PulseShape { rectangular, truncated_cosine, gaussian };

std::string to_string(PulseShape shape);
/// Accepts "rectangular", "truncated_cosine" and "gaussian".
PulseShape parse_pulse_shape(const std::string& name);

/// A single drive pulse. amplitude is the peak Rabi rate Omega/2pi in Hz and
/// carrier the drive frequency in Hz. The lab-frame drive term is
///   amplitude * f(t) * sin(2 pi carrier t + phase) * sigma_y
/// with f the unit-peak envelope, zero outside [start_time, start_time + duration].
struct PulseSpec {
  PulseShape shape = PulseShape::truncated_cosine;
  double amplitude = 0.0;
  double duration = 0.0;
  double carrier = 0.0;
  double phase = 0.0;
  double start_time = 0.0;
  double gaussian_sigma = 0.0;  // gaussian only, centred in the window
  int target_qubit = 1;

  void validate() const;
  double end_time() const { return start_time + duration; }
  /// Unit-peak envelope f(t).
  double shape_at(double t) const;
  /// amplitude * f(t), Hz.
  double envelope(double t) const { return amplitude * shape_at(t); }
};

/// Integral of the unit-peak envelope over the pulse window, seconds.
double envelope_area(PulseShape shape, double duration, double gaussian_sigma = 0.0);

/// Peak amplitude (Hz) giving a rotation angle theta: 2 pi A * area = theta.
double rotation_amplitude(PulseShape shape, double duration, double theta,
                          double gaussian_sigma = 0.0);

inline double pi_pulse_amplitude(PulseShape shape, double duration, double gaussian_sigma = 0.0) {
  return rotation_amplitude(shape, duration, 3.14159265358979323846, gaussian_sigma);
}

}  // namespace zzkit::dynamics

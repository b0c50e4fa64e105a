#include "zzkit/pulse.hpp"

#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

std::string to_string(PulseShape shape) {
  switch (shape) {
    case PulseShape::rectangular: return "rectangular";
    case PulseShape::truncated_cosine: return "truncated_cosine";
    case PulseShape::gaussian: return "gaussian";
  }
  return "unknown";
}

PulseShape parse_pulse_shape(const std::string& name) {
  if (name == "rectangular") return PulseShape::rectangular;
  if (name == "truncated_cosine") return PulseShape::truncated_cosine;
  if (name == "gaussian") return PulseShape::gaussian;
  throw InvalidArgument(fmt::format("unknown pulse shape '{}'", name));
}

void PulseSpec::validate() const {
  if (!(duration > 0.0)) throw InvalidArgument(fmt::format("pulse duration must be > 0, got {}", duration));
  if (!(amplitude >= 0.0)) throw InvalidArgument("pulse amplitude must be >= 0");
  if (target_qubit != 1 && target_qubit != 2) {
    throw InvalidArgument(fmt::format("target_qubit must be 1 or 2, got {}", target_qubit));
  }
  if (shape == PulseShape::gaussian && !(gaussian_sigma > 0.0)) {
    throw InvalidArgument("gaussian pulses need gaussian_sigma > 0");
  }
  if (!(carrier >= 0.0)) throw InvalidArgument("carrier must be >= 0");
}

double PulseSpec::shape_at(double t) const {
  const double x = t - start_time;
  if (x < 0.0 || x > duration) return 0.0;
  switch (shape) {
    case PulseShape::rectangular: return 1.0;
    case PulseShape::truncated_cosine: return 0.5 * (1.0 - std::cos(units::two_pi * x / duration));
    case PulseShape::gaussian: {
      const double u = (x - 0.5 * duration) / gaussian_sigma;
      return std::exp(-0.5 * u * u);
    }
  }
  return 0.0;
}

double envelope_area(PulseShape shape, double duration, double gaussian_sigma) {
  switch (shape) {
    case PulseShape::rectangular: return duration;
    case PulseShape::truncated_cosine: return 0.5 * duration;
    case PulseShape::gaussian:
      return gaussian_sigma * std::sqrt(units::two_pi) *
             std::erf(duration / (2.0 * std::sqrt(2.0) * gaussian_sigma));
  }
  return duration;
}

double rotation_amplitude(PulseShape shape, double duration, double theta, double gaussian_sigma) {
  if (!(duration > 0.0)) throw InvalidArgument("pulse duration must be > 0");
  if (shape == PulseShape::gaussian && !(gaussian_sigma > 0.0)) {
    throw InvalidArgument("gaussian pulses need gaussian_sigma > 0");
  }
  return theta / (units::two_pi * envelope_area(shape, duration, gaussian_sigma));
}

}  // namespace zzkit::dynamics

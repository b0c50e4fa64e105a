#pragma once

#include <optional>

#include "zzkit/pulse.hpp"

namespace zzkit::dynamics {

/// Fraction of the envelope power |F(f)|^2 inside
/// [center_offset - window/2, center_offset + window/2], F the unitary Fourier
/// transform of the complex baseband envelope (carrier removed) and f the
/// offset from the carrier in Hz. The spectrum is sampled on the DFT grid of a
/// zero-padded record of at least record_length (default 40 / window), which
/// must resolve the window in at least 20 bins; otherwise ResolutionError.
double pulse_spectral_power(const PulseSpec& pulse, double center_offset, double window,
                            std::optional<double> record_length = std::nullopt);

}  // namespace zzkit::dynamics

#pragma once

#include <complex>
#include <vector>

#include "zzkit/circuit.hpp"
#include "zzkit/vector_fit.hpp"

namespace zzkit::circuit {

/// Impedance of series-connected parallel RLC resonators at omega (rad/s).
std::complex<double> foster_impedance(const std::vector<FosterMode>& modes, double omega);

/// Impedance samples of a Foster network on the given angular frequency grid.
std::vector<FrequencySample> synthesize_impedance(const std::vector<FosterMode>& modes,
                                                  const std::vector<double>& omegas);

/// Y = 1/Z sample by sample. Throws InvalidArgument on a zero sample.
std::vector<FrequencySample> invert_samples(const std::vector<FrequencySample>& samples);

/// One Foster mode per complex pole pair of an impedance fit:
/// C = 1 / (2 Re r), L = 1 / (C |a|^2), R = 1 / (kappa C) with kappa = -2 Re a.
/// Poles with |Re a| <= lossless_tol * |a| are treated as lossless.
/// Modes are returned in ascending frequency. Throws NonPhysicalModeError for
/// real poles or non-positive L, C.
std::vector<FosterMode> foster_from_fit(const RationalFit& fit, double lossless_tol = 1e-7);

}  // namespace zzkit::circuit

#pragma once

namespace zzkit::spectrum {

inline constexpr double default_pole_guard_hz = 1e6;

// All inputs in Hz. delta = w1 - w2; anharmonicities may be given signed or
// as magnitudes, only |alpha| enters.

/// -chi + 2 g^2 (1/(delta + |a2|) - 1/(delta - |a1|)). Throws PoleError within
/// pole_guard of delta = |a1| or delta = -|a2|.
double zeta_perturbative(double g, double delta, double alpha1, double alpha2, double chi_bare = 0.0,
                         double pole_guard = default_pole_guard_hz);

/// High-detuning expansion of zeta_perturbative,
///   -chi - 2 g^2 (|a1| + |a2|) [1/D^2 + (|a1| - |a2|)/D^3 + (|a1|^2 - |a1||a2| + |a2|^2)/D^4],
/// keeping terms up to 1/D^order (order in 2..4). Throws DomainError unless
/// delta > 2 max(|a1|, |a2|).
double zeta_series_high_detuning(double g, double delta, double alpha1, double alpha2,
                                 double chi_bare, int order);

struct SwShifts {
  double de11 = 0.0;
  double de10 = 0.0;
  double de01 = 0.0;
};

/// Second-order energy shifts. dE11 - dE10 - dE01 equals zeta_perturbative
/// with chi = 0. Throws PoleError near delta = 0 and the zeta poles.
SwShifts schrieffer_wolff_shifts(double g, double delta, double alpha1, double alpha2,
                                 double pole_guard = default_pole_guard_hz);

}  // namespace zzkit::spectrum

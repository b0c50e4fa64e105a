#pragma once

#include <vector>

#include "zzkit/circuit.hpp"

namespace zzkit::spectrum {

struct CrossingPoint {
  double flux = 0.0;  // Phi_Q2 / Phi_0
  double q1_bare = 0.0;
  double q2_bare = 0.0;
  double lower = 0.0;  // dressed single-excitation energies, Hz
  double upper = 0.0;
};

struct CrossingResult {
  double j_hz = 0.0;         // half the minimum splitting
  double flux_at_min = 0.0;  // refined
  std::vector<CrossingPoint> points;
};

/// Sweeps the flux of q2 (q1 held at its own flux) and locates the minimum
/// single-excitation splitting, refined by Brent minimization between the
/// neighbours of the grid minimum. Throws NoCrossingError when the splitting
/// is monotone over the sweep.
CrossingResult avoided_crossing_j(const circuit::TransmonSpec& q1, const circuit::TransmonSpec& q2,
                                  const circuit::Coupling& coupling,
                                  const std::vector<double>& flux_sweep);

/// Dressed single-excitation energies at one q2 flux.
CrossingPoint single_excitation_point(const circuit::TransmonSpec& q1, circuit::TransmonSpec q2,
                                      const circuit::Coupling& coupling, double flux);

}  // namespace zzkit::spectrum

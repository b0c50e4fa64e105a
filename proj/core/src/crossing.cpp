#include "zzkit/crossing.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/labeling.hpp"

namespace zzkit::spectrum {

CrossingPoint single_excitation_point(const circuit::TransmonSpec& q1, circuit::TransmonSpec q2,
                                      const circuit::Coupling& coupling, double flux) {
  q2.squid.flux = flux;
  const circuit::KerrParams params = circuit::two_transmon_kerr(q1, q2, coupling);
  const LabeledSpectrum s = diagonalize_and_label(build_hamiltonian(params, {3, 3}, 2));
  CrossingPoint p;
  p.flux = flux;
  p.q1_bare = params.mode_freqs[0];
  p.q2_bare = params.mode_freqs[1];
  const double e0 = s.energy({0, 0});
  const double ea = s.energy({1, 0}) - e0;
  const double eb = s.energy({0, 1}) - e0;
  p.lower = std::min(ea, eb);
  p.upper = std::max(ea, eb);
  return p;
}

CrossingResult avoided_crossing_j(const circuit::TransmonSpec& q1, const circuit::TransmonSpec& q2,
                                  const circuit::Coupling& coupling,
                                  const std::vector<double>& flux_sweep) {
  if (flux_sweep.size() < 3) throw InvalidArgument("flux sweep needs at least 3 points");
  for (std::size_t i = 1; i < flux_sweep.size(); ++i) {
    if (!(flux_sweep[i] > flux_sweep[i - 1])) {
      throw InvalidArgument("flux sweep must be strictly increasing");
    }
  }

  CrossingResult out;
  out.points.reserve(flux_sweep.size());
  std::size_t imin = 0;
  for (std::size_t i = 0; i < flux_sweep.size(); ++i) {
    out.points.push_back(single_excitation_point(q1, q2, coupling, flux_sweep[i]));
    const auto& p = out.points.back();
    const auto& best = out.points[imin];
    if (p.upper - p.lower < best.upper - best.lower) imin = i;
  }
  if (imin == 0 || imin + 1 == flux_sweep.size()) {
    throw NoCrossingError("single-excitation splitting is monotone over the flux sweep");
  }

  auto gap = [&](double phi) {
    const CrossingPoint p = single_excitation_point(q1, q2, coupling, phi);
    return p.upper - p.lower;
  };
  std::uintmax_t iters = 200;
  const auto [phi, g] = boost::math::tools::brent_find_minima(
      gap, flux_sweep[imin - 1], flux_sweep[imin + 1], 26, iters);
  out.flux_at_min = phi;
  out.j_hz = 0.5 * g;
  return out;
}

}  // namespace zzkit::spectrum

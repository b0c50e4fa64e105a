#include "zzkit/foster.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"

namespace zzkit::circuit {

std::complex<double> foster_impedance(const std::vector<FosterMode>& modes, double omega) {
  const std::complex<double> s(0.0, omega);
  std::complex<double> z = 0.0;
  for (const auto& m : modes) {
    std::complex<double> y = s * m.capacitance_c + 1.0 / (s * m.inductance_l);
    if (std::isfinite(m.resistance_r)) y += 1.0 / m.resistance_r;
    z += 1.0 / y;
  }
  return z;
}

std::vector<FrequencySample> synthesize_impedance(const std::vector<FosterMode>& modes,
                                                  const std::vector<double>& omegas) {
  for (const auto& m : modes) m.validate();
  std::vector<FrequencySample> out;
  out.reserve(omegas.size());
  for (const double w : omegas) out.push_back({w, foster_impedance(modes, w)});
  return out;
}

std::vector<FrequencySample> invert_samples(const std::vector<FrequencySample>& samples) {
  std::vector<FrequencySample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.value == 0.0) {
      throw InvalidArgument(fmt::format("cannot invert zero sample at omega = {}", s.omega));
    }
    out.push_back({s.omega, 1.0 / s.value});
  }
  return out;
}

std::vector<FosterMode> foster_from_fit(const RationalFit& fit, double lossless_tol) {
  std::vector<FosterMode> modes;
  for (std::size_t k = 0; k < fit.poles.size(); ++k) {
    const auto a = fit.poles[k];
    if (a.real() > 0.0) {
      throw NonPhysicalModeError(fmt::format("fit pole {} lies in the right half plane", k));
    }
    if (a.imag() == 0.0) {
      throw NonPhysicalModeError(fmt::format("real fit pole at {} has no Foster resonator", a.real()));
    }
    if (a.imag() < 0.0) continue;
    const double re_r = fit.residues[k].real();
    FosterMode m;
    m.capacitance_c = 1.0 / (2.0 * re_r);
    m.inductance_l = 1.0 / (m.capacitance_c * std::norm(a));
    const double kappa = -2.0 * a.real();
    if (std::abs(a.real()) > lossless_tol * std::abs(a)) {
      m.resistance_r = 1.0 / (kappa * m.capacitance_c);
    }
    if (!(m.capacitance_c > 0.0) || !(m.inductance_l > 0.0) || !std::isfinite(m.capacitance_c)) {
      throw NonPhysicalModeError(fmt::format(
          "pole at {:.6g} rad/s gives L = {:.3g} H, C = {:.3g} F", std::abs(a), m.inductance_l,
          m.capacitance_c));
    }
    modes.push_back(m);
  }
  std::sort(modes.begin(), modes.end(),
            [](const FosterMode& x, const FosterMode& y) { return x.omega() < y.omega(); });
  return modes;
}

}  // namespace zzkit::circuit

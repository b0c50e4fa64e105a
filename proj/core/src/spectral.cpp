#include "zzkit/spectral.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "zzkit/errors.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

double pulse_spectral_power(const PulseSpec& pulse, double center_offset, double window,
                            std::optional<double> record_length) {
  pulse.validate();
  if (!(window > 0.0)) throw InvalidArgument("spectral window must be > 0");
  constexpr int kMinBins = 20;
  const double record = record_length.value_or(2.0 * kMinBins / window);
  if (record < pulse.duration) {
    throw ResolutionError(fmt::format("record of {:.3g} s is shorter than the {:.3g} s pulse", record,
                                      pulse.duration));
  }
  const double df = 1.0 / record;
  if (df > window / kMinBins) {
    throw ResolutionError(fmt::format(
        "record of {:.3g} s gives {:.3g} Hz bins; window {:.3g} Hz needs <= {:.3g} Hz", record, df, window,
        window / kMinBins));
  }

  // Sample finely enough for the band of interest and zero-pad to exactly the
  // record, so the window edges fall on DFT bins when window * record is an
  // integer (the default record). Edge bins get half weight (trapezoid rule).
  const double f_hi = std::abs(center_offset) + window;
  const double dt_max = std::min(pulse.duration / 256.0, 1.0 / (8.0 * f_hi));
  std::size_t n = 1;
  while (static_cast<double>(n) * dt_max < record) n <<= 1;
  const double dt = record / static_cast<double>(n);
  std::vector<std::complex<double>> x(n, 0.0);
  double total = 0.0;  // Parseval: sum |e|^2 dt
  for (std::size_t k = 0; k < n; ++k) {
    const double t = pulse.start_time + (static_cast<double>(k) + 0.5) * dt;
    if (t > pulse.end_time()) break;
    const double e = pulse.shape_at(t);
    x[k] = e;
    total += e * e * dt;
  }
  if (!(total > 0.0)) return 0.0;
  std::vector<std::complex<double>> spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, x);

  const double bin = 1.0 / record;
  const double lo = center_offset - 0.5 * window;
  const double hi = center_offset + 0.5 * window;
  const double eps = 1e-6 * bin;
  double in_window = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // Map FFT index to a signed frequency.
    const auto m = static_cast<long>(k) - (k >= n / 2 ? static_cast<long>(n) : 0L);
    const double f = static_cast<double>(m) * bin;
    if (f < lo - eps || f > hi + eps) continue;
    const double w = (std::abs(f - lo) <= eps || std::abs(f - hi) <= eps) ? 0.5 : 1.0;
    in_window += w * std::norm(spec[k] * dt) * bin;
  }
  return in_window / total;
}

}  // namespace zzkit::dynamics

#include "zzkit/perturbative.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"

namespace zzkit::spectrum {

namespace {

void check_poles(double delta, double a1, double a2, double guard) {
  if (std::abs(delta - a1) < guard) {
    throw PoleError(fmt::format("detuning {:.6g} Hz within {:.3g} Hz of the |11>-|20> pole", delta, guard));
  }
  if (std::abs(delta + a2) < guard) {
    throw PoleError(fmt::format("detuning {:.6g} Hz within {:.3g} Hz of the |11>-|02> pole", delta, guard));
  }
}

}  // namespace

double zeta_perturbative(double g, double delta, double alpha1, double alpha2, double chi_bare,
                         double pole_guard) {
  const double a1 = std::abs(alpha1);
  const double a2 = std::abs(alpha2);
  check_poles(delta, a1, a2, pole_guard);
  return -chi_bare + 2.0 * g * g * (1.0 / (delta + a2) - 1.0 / (delta - a1));
}

double zeta_series_high_detuning(double g, double delta, double alpha1, double alpha2,
                                 double chi_bare, int order) {
  if (order < 2 || order > 4) {
    throw InvalidArgument(fmt::format("series order must be 2, 3 or 4, got {}", order));
  }
  const double a1 = std::abs(alpha1);
  const double a2 = std::abs(alpha2);
  if (!(delta > 2.0 * std::max(a1, a2))) {
    throw DomainError(fmt::format("series needs delta > 2 max|alpha| = {:.6g} Hz, got {:.6g} Hz",
                                  2.0 * std::max(a1, a2), delta));
  }
  const double d2 = delta * delta;
  double bracket = 1.0 / d2;
  if (order >= 3) bracket += (a1 - a2) / (d2 * delta);
  if (order >= 4) bracket += (a1 * a1 - a1 * a2 + a2 * a2) / (d2 * d2);
  return -chi_bare - 2.0 * g * g * (a1 + a2) * bracket;
}

SwShifts schrieffer_wolff_shifts(double g, double delta, double alpha1, double alpha2,
                                 double pole_guard) {
  const double a1 = std::abs(alpha1);
  const double a2 = std::abs(alpha2);
  check_poles(delta, a1, a2, pole_guard);
  if (std::abs(delta) < pole_guard) {
    throw PoleError("single-excitation shifts diverge at zero detuning");
  }
  SwShifts s;
  s.de11 = -2.0 * g * g / (delta - a1) + 2.0 * g * g / (delta + a2);
  s.de10 = g * g / delta;
  s.de01 = -g * g / delta;
  return s;
}

}  // namespace zzkit::spectrum

#include "zzkit/circuit.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"
#include "zzkit/units.hpp"

namespace zzkit::circuit {

namespace {

Eigen::VectorXd charge_basis_eigenvalues(double ej, double ec, double ng, int cutoff) {
  const int dim = 2 * cutoff + 1;
  Eigen::VectorXd diag(dim);
  // Solved in units of E_C; the tridiagonal QL iteration is happier at O(1).
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(dim - 1, -0.5 * ej / ec);
  for (int k = 0; k < dim; ++k) {
    const double n = static_cast<double>(k - cutoff) - ng;
    diag(k) = 4.0 * n * n;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
    dense.diagonal() = diag;
    dense.diagonal(1) = sub;
    dense.diagonal(-1) = sub;
    solver.compute(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("charge-basis eigensolver failed");
    }
  }
  return solver.eigenvalues() * ec;
}

}  // namespace

void SquidSpec::validate() const {
  if (!(ej_sum > 0.0) || !std::isfinite(ej_sum)) {
    throw InvalidArgument(fmt::format("SQUID ej_sum must be positive, got {}", ej_sum));
  }
  // |d| = 1 is the single-junction limit, which is flux independent.
  if (!(std::abs(asymmetry_d) <= 1.0)) {
    throw InvalidArgument(fmt::format("SQUID asymmetry must satisfy |d| <= 1, got {}", asymmetry_d));
  }
  if (!std::isfinite(flux)) throw InvalidArgument("SQUID flux must be finite");
}

void TransmonSpec::validate() const {
  squid.validate();
  if (!(ec > 0.0)) throw InvalidArgument(fmt::format("E_C must be positive, got {}", ec));
  if (n_levels < 3) {
    throw InvalidArgument(fmt::format("n_levels must be >= 3, got {}", n_levels));
  }
  if (charge_basis_cutoff < 1) throw InvalidArgument("charge_basis_cutoff must be positive");
}

double effective_josephson_energy(const SquidSpec& squid) {
  const double c = std::cos(units::pi * squid.flux);
  const double s = std::sin(units::pi * squid.flux);
  const double d = squid.asymmetry_d;
  return squid.ej_sum * std::sqrt(c * c + d * d * s * s);
}

TransmonLevels transmon_spectrum_ej(double ej_hz, double ec_hz, int n_levels, int start_cutoff,
                                    const SpectrumOptions& opts) {
  if (!(ej_hz > 0.0) || !(ec_hz > 0.0)) {
    throw InvalidArgument(fmt::format("E_J and E_C must be positive (E_J={}, E_C={})", ej_hz, ec_hz));
  }
  if (ej_hz / ec_hz < 1.0) {
    throw InvalidArgument(fmt::format("E_J/E_C = {:.3g} < 1 is outside the supported regime", ej_hz / ec_hz));
  }
  if (n_levels < 3) throw InvalidArgument("n_levels must be >= 3");

  int cutoff = std::max(start_cutoff, (n_levels + 1) / 2);
  Eigen::VectorXd prev = charge_basis_eigenvalues(ej_hz, ec_hz, opts.offset_charge, cutoff);
  while (true) {
    const int next_cutoff = cutoff + 5;
    if (next_cutoff > opts.max_cutoff) {
      throw ConvergenceError(fmt::format(
          "transmon levels not stable to {} Hz below charge cutoff {}", opts.stability_hz,
          opts.max_cutoff));
    }
    Eigen::VectorXd next = charge_basis_eigenvalues(ej_hz, ec_hz, opts.offset_charge, next_cutoff);
    double shift = 0.0;
    for (int k = 0; k < n_levels; ++k) shift = std::max(shift, std::abs(next(k) - prev(k)));
    cutoff = next_cutoff;
    prev = std::move(next);
    if (shift < opts.stability_hz) break;
  }

  TransmonLevels out;
  out.level_energies.resize(n_levels);
  for (int k = 0; k < n_levels; ++k) out.level_energies[k] = prev(k) - prev(0);
  out.omega01 = out.level_energies[1];
  out.anharmonicity = (out.level_energies[2] - out.level_energies[1]) - out.omega01;
  out.ej_over_ec = ej_hz / ec_hz;
  out.cutoff_used = cutoff;
  return out;
}

TransmonLevels transmon_spectrum(const TransmonSpec& spec, const SpectrumOptions& opts) {
  spec.validate();
  return transmon_spectrum_ej(effective_josephson_energy(spec.squid), spec.ec, spec.n_levels,
                              spec.charge_basis_cutoff, opts);
}

std::pair<double, double> transmon_asymptotic(double ej_hz, double ec_hz) {
  return {std::sqrt(8.0 * ej_hz * ec_hz) - ec_hz, -ec_hz};
}

double solve_ej_for_frequency(double target_hz, double ec_hz) {
  if (!(target_hz > 0.0) || !(ec_hz > 0.0)) {
    throw InvalidArgument("target frequency and E_C must be positive");
  }
  auto f = [&](double ej) { return transmon_spectrum_ej(ej, ec_hz, 3).omega01 - target_hz; };
  const double guess = (target_hz + ec_hz) * (target_hz + ec_hz) / (8.0 * ec_hz);
  double lo = std::max(guess * 0.5, 1.0001 * ec_hz);
  double hi = guess * 2.0;
  if (f(lo) > 0.0) {
    throw DomainError(fmt::format("frequency {:.6g} Hz needs E_J/E_C < 1 at E_C = {:.6g} Hz",
                                  target_hz, ec_hz));
  }
  while (f(hi) < 0.0) hi *= 2.0;
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

double flux_for_frequency(const TransmonSpec& spec, double target_hz) {
  spec.validate();
  auto freq_at = [&](double phi) {
    TransmonSpec s = spec;
    s.squid.flux = phi;
    s.n_levels = 3;
    return transmon_spectrum(s).omega01;
  };
  const double f_max = freq_at(0.0);
  const double f_min = freq_at(0.5);
  if (target_hz > f_max || target_hz < f_min) {
    throw DomainError(fmt::format("target {:.6g} Hz outside tunable range [{:.6g}, {:.6g}] Hz",
                                  target_hz, f_min, f_max));
  }
  if (target_hz == f_max) return 0.0;
  if (target_hz == f_min) return 0.5;
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      [&](double phi) { return freq_at(phi) - target_hz; }, 0.0, 0.5, f_max - target_hz,
      f_min - target_hz, tol, iters);
  return 0.5 * (a + b);
}

double FosterMode::omega() const { return 1.0 / std::sqrt(inductance_l * capacitance_c); }
double FosterMode::frequency_hz() const { return omega() / units::two_pi; }
double FosterMode::impedance() const { return std::sqrt(inductance_l / capacitance_c); }
double FosterMode::kappa() const {
  if (std::isinf(resistance_r)) return 0.0;
  return 1.0 / (resistance_r * capacitance_c);
}

void FosterMode::validate() const {
  if (!(inductance_l > 0.0) || !std::isfinite(inductance_l)) {
    throw NonPhysicalModeError(fmt::format("Foster inductance must be positive, got {}", inductance_l));
  }
  if (!(capacitance_c > 0.0) || !std::isfinite(capacitance_c)) {
    throw NonPhysicalModeError(fmt::format("Foster capacitance must be positive, got {}", capacitance_c));
  }
  if (!(resistance_r > 0.0)) {
    throw NonPhysicalModeError(fmt::format("Foster resistance must be positive, got {}", resistance_r));
  }
}

JunctionParticipation single_port_participation(const std::vector<FosterMode>& modes,
                                                double ej_hz) {
  JunctionParticipation p;
  p.phi_zpf.resize(static_cast<Eigen::Index>(modes.size()), 1);
  for (std::size_t m = 0; m < modes.size(); ++m) {
    modes[m].validate();
    const double flux_zpf = std::sqrt(units::hbar * modes[m].impedance() / 2.0);
    p.phi_zpf(static_cast<Eigen::Index>(m), 0) = flux_zpf / units::reduced_flux_quantum;
  }
  p.ej_per_junction = {ej_hz};
  return p;
}

KerrParams kerr_from_foster(const std::vector<FosterMode>& modes,
                            const JunctionParticipation& participation) {
  const auto n_modes = static_cast<Eigen::Index>(modes.size());
  const auto n_junctions = static_cast<Eigen::Index>(participation.ej_per_junction.size());
  if (participation.phi_zpf.rows() != n_modes || participation.phi_zpf.cols() != n_junctions) {
    throw DimensionMismatchError(fmt::format(
        "participation matrix is {}x{}, expected {} modes x {} junctions",
        participation.phi_zpf.rows(), participation.phi_zpf.cols(), n_modes, n_junctions));
  }

  KerrParams out;
  out.mode_freqs.reserve(modes.size());
  for (const auto& mode : modes) {
    mode.validate();
    out.mode_freqs.push_back(mode.frequency_hz());
  }
  const Eigen::MatrixXd& phi = participation.phi_zpf;
  if ((phi.array() < 0.0).any()) {
    throw InvalidArgument("zero-point phase fluctuations must be non-negative");
  }
  if ((phi.array() > 0.5).any()) {
    out.warnings.push_back("phi_zpf above 0.5: outside the weakly anharmonic regime");
  }

  out.self_kerr.assign(modes.size(), 0.0);
  out.cross_kerr = Eigen::MatrixXd::Zero(n_modes, n_modes);
  for (Eigen::Index j = 0; j < n_junctions; ++j) {
    const double ej = participation.ej_per_junction[static_cast<std::size_t>(j)];
    for (Eigen::Index m = 0; m < n_modes; ++m) {
      const double pm2 = phi(m, j) * phi(m, j);
      out.self_kerr[static_cast<std::size_t>(m)] -= 0.5 * ej * pm2 * pm2;
      for (Eigen::Index n = 0; n < n_modes; ++n) {
        if (n == m) continue;
        out.cross_kerr(m, n) += ej * pm2 * phi(n, j) * phi(n, j);
      }
    }
  }
  if (n_modes == 2) out.bare_cross_kerr_chi = out.cross_kerr(0, 1);
  return out;
}

double capacitive_exchange(double c12, double c_shunt1, double c_shunt2, double omega1_hz,
                           double omega2_hz) {
  if (c12 < 0.0 || !(c_shunt1 > 0.0) || !(c_shunt2 > 0.0)) {
    throw InvalidArgument("capacitances must be positive (C12 >= 0)");
  }
  const double csum1 = c_shunt1 + c12;
  const double csum2 = c_shunt2 + c12;
  return c12 / (2.0 * std::sqrt(csum1 * csum2)) * std::sqrt(omega1_hz * omega2_hz);
}

double shunt_from_ec(double ec_hz, double c12) {
  const double shunt = units::capacitance_from_ec(ec_hz) - c12;
  if (!(shunt > 0.0)) {
    throw InvalidArgument(fmt::format("E_C = {} Hz leaves no room for C12 = {} F", ec_hz, c12));
  }
  return shunt;
}

namespace {

KerrParams uncoupled_pair(const TransmonSpec& q1, const TransmonSpec& q2) {
  const TransmonLevels l1 = transmon_spectrum(q1);
  const TransmonLevels l2 = transmon_spectrum(q2);
  KerrParams out;
  out.mode_freqs = {l1.omega01, l2.omega01};
  out.self_kerr = {l1.anharmonicity, l2.anharmonicity};
  out.cross_kerr = Eigen::MatrixXd::Zero(2, 2);
  for (const auto* l : {&l1, &l2}) {
    if (l->outside_transmon_regime()) {
      out.warnings.push_back(
          fmt::format("E_J/E_C = {:.3g} is below 20 (outside the transmon regime)", l->ej_over_ec));
    }
  }
  return out;
}

}  // namespace

KerrParams two_transmon_kerr(const TransmonSpec& q1, const TransmonSpec& q2,
                             double coupling_capacitance, std::pair<double, double> shunt_caps) {
  KerrParams out = uncoupled_pair(q1, q2);
  out.exchange_g = capacitive_exchange(coupling_capacitance, shunt_caps.first, shunt_caps.second,
                                       out.mode_freqs[0], out.mode_freqs[1]);
  if (coupling_capacitance > 0.2 * std::min(shunt_caps.first, shunt_caps.second)) {
    out.warnings.push_back("coupling capacitance exceeds 20% of a shunt capacitance");
  }
  return out;
}

KerrParams two_transmon_kerr_g(const TransmonSpec& q1, const TransmonSpec& q2, double g_hz) {
  KerrParams out = uncoupled_pair(q1, q2);
  out.exchange_g = g_hz;
  return out;
}

KerrParams two_transmon_kerr(const TransmonSpec& q1, const TransmonSpec& q2, const Coupling& coupling) {
  if (coupling.g_hz) return two_transmon_kerr_g(q1, q2, *coupling.g_hz);
  return two_transmon_kerr(q1, q2, coupling.c12, coupling.shunt_caps);
}

}  // namespace zzkit::circuit

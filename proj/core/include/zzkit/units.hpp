#pragma once

#include <numbers>

// All spectroscopic quantities at API boundaries are ordinary frequencies in
// Hz (E/h). Angular frequencies only appear inside the solvers.
namespace zzkit::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double hbar = planck_h / two_pi;            // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
// Reduced flux quantum hbar / 2e.
inline constexpr double reduced_flux_quantum = hbar / (2.0 * elementary_charge);

inline constexpr double kHz = 1e3;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
inline constexpr double ns = 1e-9;
inline constexpr double us = 1e-6;
inline constexpr double fF = 1e-15;

inline constexpr double angular(double hz) { return two_pi * hz; }

/// Charging energy E_C/h in Hz of a node with total capacitance c (farads).
inline constexpr double charging_energy_hz(double c_farads) {
  return elementary_charge * elementary_charge / (2.0 * c_farads * planck_h);
}

/// Inverse of charging_energy_hz.
inline constexpr double capacitance_from_ec(double ec_hz) {
  return elementary_charge * elementary_charge / (2.0 * ec_hz * planck_h);
}

}  // namespace zzkit::units

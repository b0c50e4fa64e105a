#include <doctest.h>

#include <cmath>
#include <random>

#include "zzkit/crossing.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/labeling.hpp"
#include "zzkit/pauli.hpp"
#include "zzkit/perturbative.hpp"

using namespace zzkit;
using namespace zzkit::spectrum;
using doctest::Approx;

namespace {

LabeledSpectrum solve(const circuit::KerrParams& p, std::pair<int, int> levels = {4, 4},
                      std::optional<int> max_exc = 4) {
  return diagonalize_and_label(build_hamiltonian(p, levels, max_exc));
}

}  // namespace

TEST_CASE("Hamiltonian matrix elements") {
  const auto p = two_mode_params(5e9, 4.5e9, -300e6, -250e6, 70e6, 2e6);
  const TruncatedHamiltonian h = build_hamiltonian(p, {3, 3}, std::nullopt);
  CHECK(h.matrix.rows() == 9);
  CHECK(h.matrix(h.index_of({2, 0}), h.index_of({1, 1})) == Approx(std::sqrt(2.0) * 70e6));
  CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.matrix(h.index_of({1, 1}), h.index_of({1, 1})) == Approx(5e9 + 4.5e9 - 2e6));
  CHECK(h.matrix(h.index_of({2, 0}), h.index_of({2, 0})) == Approx(10e9 - 300e6));

  const auto g0 = build_hamiltonian(two_mode_params(5e9, 4.5e9, -300e6, -250e6, 0.0), {3, 3}, std::nullopt);
  CHECK(g0.matrix.isDiagonal());
}

TEST_CASE("harmonic oscillators have an additive spectrum") {
  const LabeledSpectrum s = solve(two_mode_params(5e9, 4.2e9, 0.0, 0.0, 0.0), {4, 4}, std::nullopt);
  for (const auto& [label, e] : s.energies) CHECK(e == Approx(label.first * 5e9 + label.second * 4.2e9));
}

TEST_CASE("truncation guards") {
  const auto p = two_mode_params(5e9, 4.5e9, -300e6, -250e6, 70e6);
  CHECK_THROWS_AS(build_hamiltonian(p, {1, 3}), TruncationError);
  circuit::KerrParams three = p;
  three.mode_freqs.push_back(7e9);
  three.self_kerr.push_back(-200e6);
  CHECK_THROWS_AS(build_hamiltonian(three), DimensionMismatchError);
}

TEST_CASE("uncoupled labels are the bare states") {
  const LabeledSpectrum s = solve(two_mode_params(5e9, 4.5e9, -300e6, -250e6, 0.0));
  for (const auto& [label, ov] : s.overlaps) CHECK(ov == Approx(1.0));
  CHECK(s.energy({1, 1}) == Approx(9.5e9));
  CHECK(zeta_exact(s) == 0.0);
}

TEST_CASE("dispersive shift of the single excitation") {
  const double g = 10e6, delta = 1e9;
  const LabeledSpectrum s = solve(two_mode_params(5e9, 5e9 - delta, -300e6, -250e6, g), {3, 3}, std::nullopt);
  const double shift = s.energy({1, 0}) - 5e9;
  CHECK(std::abs(shift / (g * g / delta) - 1.0) < 0.05);
}

TEST_CASE("resonant modes are ambiguous and use the symmetric convention") {
  const LabeledSpectrum s = solve(two_mode_params(5e9, 5e9, -300e6, -250e6, 50e6));
  CHECK(s.overlap({1, 0}) == Approx(0.5).epsilon(1e-6));
  CHECK(s.ambiguous({1, 0}));
  CHECK(s.computational_ambiguous());
  CHECK_THROWS_AS(zeta_exact(s), AmbiguousLabelError);
  const ZetaValue z = zeta_with_resonant_convention(s);
  CHECK(z.ambiguous);
  const auto& ev = s.eigenvalues;
  CHECK(z.zeta == Approx(s.energy({1, 1}) - ev(1) - ev(2) + ev(0)));
}

TEST_CASE("harmonic exchange gives zero zeta") {
  const LabeledSpectrum s = solve(two_mode_params(5e9, 4.3e9, 0.0, 0.0, 150e6), {5, 5}, std::nullopt);
  CHECK(std::abs(zeta_exact(s)) < 1e-9 * 5e9);
}

TEST_CASE("eigenpair residuals") {
  const auto h = build_hamiltonian(two_mode_params(5e9, 4.3e9, -300e6, -250e6, 150e6, 1e6), {5, 5}, 6);
  CHECK(max_eigen_residual(h, diagonalize_and_label(h)) <= 1e-10);
}

TEST_CASE("bare cross-Kerr adds -chi") {
  const double chi = 3e6;
  auto shift = [&](double g) {
    const auto a = two_mode_params(5e9, 4e9, -300e6, -250e6, g, 0.0);
    const auto b = two_mode_params(5e9, 4e9, -300e6, -250e6, g, chi);
    return zeta_exact(solve(b)) - zeta_exact(solve(a));
  };
  CHECK(shift(0.0) == Approx(-chi).epsilon(1e-6));
  // With exchange, chi also moves |11> against |20>, |02>; the leftover is
  // of order g^2 chi / (delta - |alpha|)^2.
  const double g = 40e6;
  CHECK(std::abs(shift(g) + chi) < 2.0 * 2.0 * g * g * chi / (700e6 * 700e6));
}

TEST_CASE("truncation convergence in the dispersive regime") {
  const auto p = two_mode_params(6e9, 4.5e9, -320e6, -280e6, 40e6);
  const double z3 = zeta_exact(solve(p, {3, 3}, std::nullopt));
  const double z5 = zeta_exact(solve(p, {5, 5}, std::nullopt));
  CHECK(std::abs(z3 / z5 - 1.0) < 1e-3);
}

TEST_CASE("perturbative closed form") {
  CHECK(zeta_perturbative(0.0, 1e9, 300e6, 250e6) == 0.0);
  CHECK(zeta_perturbative(100e6, 1.3e9, 0.0, 0.0) == Approx(0.0).scale(1e6));
  // 2 g^2 (1/(D + |a2|) - 1/(D - |a1|)) evaluated by hand: -20.0335 MHz.
  CHECK(zeta_perturbative(240e6, 2e9, 351e6, 312e6) == Approx(-20.0335e6).epsilon(1e-5));
  CHECK(zeta_perturbative(240e6, 2e9, -351e6, -312e6) == zeta_perturbative(240e6, 2e9, 351e6, 312e6));
  CHECK(zeta_perturbative(0.0, 1e9, 300e6, 250e6, 2e6) == -2e6);
  CHECK_THROWS_AS(zeta_perturbative(50e6, 300.5e6, 300e6, 250e6), PoleError);
}

TEST_CASE("high-detuning series") {
  const double g = 60e6, a = 300e6, d = 3e9;
  CHECK(zeta_series_high_detuning(g, d, a, a, 1e6, 2) == Approx(-1e6 - 4 * g * g * a / (d * d)));
  CHECK(zeta_series_high_detuning(0.0, d, a, 250e6, 1e6, 4) == -1e6);
  const double series = zeta_series_high_detuning(g, 10 * a, a, 250e6, 0.0, 4);
  const double closed = zeta_perturbative(g, 10 * a, a, 250e6);
  CHECK(std::abs(series / closed - 1.0) < 2e-3);
  CHECK_THROWS_AS(zeta_series_high_detuning(g, 500e6, a, a, 0.0, 4), DomainError);
}

TEST_CASE("Schrieffer-Wolff shifts") {
  const SwShifts s = schrieffer_wolff_shifts(50e6, 1e9, 300e6, 250e6);
  CHECK(s.de10 == Approx(2.5e6));
  CHECK(s.de10 + s.de01 == Approx(0.0).scale(1.0));
  CHECK(s.de11 - s.de10 - s.de01 == Approx(zeta_perturbative(50e6, 1e9, 300e6, 250e6)));
  const SwShifts z = schrieffer_wolff_shifts(0.0, 1e9, 300e6, 250e6);
  CHECK(z.de11 == 0.0);
  CHECK(z.de10 == 0.0);
  CHECK(z.de01 == 0.0);
}

TEST_CASE("Pauli decomposition identities") {
  PauliDecomposition chip1;
  chip1.beta = {-13.72426610e9, 3.18923396e9, 8.05325187e6, 1.69065442e6, 4.59299123e9, 3.81259047e6};
  chip1.convention = ZConvention::excited_positive;
  CHECK(chip1.zeta() == Approx(15.25036188e6).epsilon(1e-12));
  const ConditionalFrequencies c = conditional_frequencies(chip1);
  CHECK(c.w1_given1 - c.w1_given0 == Approx(chip1.zeta()).epsilon(1e-9));
  CHECK(c.w2_given1 - c.w2_given0 == Approx(chip1.zeta()).epsilon(1e-9));

  const PauliDecomposition flat = pauli_from_energies(1e9, 1e9, 1e9, 1e9, 0.0);
  CHECK(flat.beta[1] == 0.0);
  CHECK(flat.beta[4] == 0.0);
  CHECK(flat.beta[5] == 0.0);

  PauliDecomposition none;
  none.beta = {1e9, 2e9, 0.0, 0.0, 3e9, 0.0};
  const ConditionalFrequencies n = conditional_frequencies(none);
  CHECK(n.w1_given1 == n.w1_given0);
  CHECK(n.w2_given1 == n.w2_given0);
}

TEST_CASE("Pauli round trip through the computational energies") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5e9, 5e9);
  for (auto conv : {ZConvention::ground_positive, ZConvention::excited_positive}) {
    for (int i = 0; i < 100; ++i) {
      const double e00 = u(rng), e01 = u(rng), e10 = u(rng), e11 = u(rng);
      const PauliDecomposition d = pauli_from_energies(e00, e01, e10, e11, 12e6, conv);
      const auto e = d.computational_energies();
      CHECK(e[0] == Approx(e00).scale(5e9).epsilon(1e-14));
      CHECK(e[1] == Approx(e01).scale(5e9).epsilon(1e-14));
      CHECK(e[2] == Approx(e10).scale(5e9).epsilon(1e-14));
      CHECK(e[3] == Approx(e11).scale(5e9).epsilon(1e-14));
      CHECK(d.beta[2] == 6e6);
      CHECK(d.beta[3] == 6e6);
      CHECK(d.zeta() == Approx(e11 - e10 - e01 + e00).scale(5e9).epsilon(1e-14));
    }
  }
}

TEST_CASE("Pauli decomposition of a labeled spectrum") {
  const LabeledSpectrum s = solve(two_mode_params(6e9, 4.5e9, -320e6, -280e6, 40e6));
  const PauliDecomposition d = pauli_decomposition(s, 40e6);
  CHECK(d.zeta() == Approx(zeta_exact(s)).epsilon(1e-9));
  const LabeledSpectrum r = solve(two_mode_params(5e9, 5e9, -300e6, -250e6, 50e6));
  CHECK_THROWS_AS(pauli_decomposition(r, 50e6), AmbiguousLabelError);
}

TEST_CASE("avoided crossing of two transmons with direct exchange") {
  circuit::TransmonSpec q1;
  q1.squid = {30e9, 0.0, 0.0};
  q1.ec = 300e6;
  circuit::TransmonSpec q2;
  q2.squid = {30e9, 0.0, 0.0};
  q2.ec = 300e6;
  std::vector<double> sweep;
  for (int i = 0; i <= 40; ++i) sweep.push_back(-0.2 + 0.01 * i);

  circuit::Coupling c;
  c.g_hz = 35e6;
  // Shift q1 so the crossing sits inside the sweep.
  q1.squid.ej_sum = circuit::solve_ej_for_frequency(
      circuit::transmon_spectrum([&] {
        auto t = q2;
        t.squid.flux = 0.1;
        return t;
      }()).omega01,
      q1.ec);
  const CrossingResult r = avoided_crossing_j(q1, q2, c, sweep);
  // Two coupled levels: the minimum splitting of the single-excitation pair is 2g.
  CHECK(r.j_hz == Approx(35e6).epsilon(1e-6));
  CHECK(std::abs(std::abs(r.flux_at_min) - 0.1) < 1e-4);

  c.g_hz = 0.0;
  const CrossingResult z = avoided_crossing_j(q1, q2, c, sweep);
  CHECK(z.j_hz == Approx(0.0).scale(1e6).epsilon(1e-3));

  std::vector<double> far{0.3, 0.32, 0.34, 0.36};
  c.g_hz = 35e6;
  CHECK_THROWS_AS(avoided_crossing_j(q1, q2, c, far), NoCrossingError);
}

#include <doctest.h>

#include <cmath>

#include "zzkit/driven_system.hpp"
#include "zzkit/errors.hpp"
#include "zzkit/evolution.hpp"
#include "zzkit/fitting.hpp"
#include "zzkit/protocols.hpp"
#include "zzkit/pulse.hpp"
#include "zzkit/readout.hpp"
#include "zzkit/spectral.hpp"
#include "zzkit/units.hpp"

using namespace zzkit;
using namespace zzkit::dynamics;
using doctest::Approx;

namespace {

TwoQubitModel model(double zeta, double jxx = 0.0, double jyy = 0.0) {
  TwoQubitModel m;
  m.omega1 = 6.3165e9;
  m.omega2 = 4.5075e9;
  m.zeta = zeta;
  m.jxx = jxx;
  m.jyy = jyy;
  return m;
}

PulseSpec pulse(PulseShape shape, double duration, double carrier, int qubit = 1, double start = 0.0) {
  PulseSpec p;
  p.shape = shape;
  p.duration = duration;
  p.amplitude = pi_pulse_amplitude(shape, duration);
  p.carrier = carrier;
  p.target_qubit = qubit;
  p.start_time = start;
  return p;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

constexpr double drift_limit = 1e-6;

}  // namespace

TEST_CASE("pulse envelopes and calibration") {
  CHECK(envelope_area(PulseShape::rectangular, 10e-9) == 10e-9);
  CHECK(envelope_area(PulseShape::truncated_cosine, 10e-9) == Approx(5e-9));
  const PulseSpec p = pulse(PulseShape::truncated_cosine, 20e-9, 5e9);
  CHECK(p.shape_at(10e-9) == Approx(1.0));
  CHECK(p.shape_at(-1e-9) == 0.0);
  CHECK(p.shape_at(21e-9) == 0.0);
  CHECK(units::two_pi * p.amplitude * envelope_area(p.shape, p.duration) == Approx(units::pi));
  CHECK(parse_pulse_shape("gaussian") == PulseShape::gaussian);
  CHECK_THROWS_AS(parse_pulse_shape("square"), InvalidArgument);
}

TEST_CASE("lab Hamiltonian without drive is the static one") {
  const TwoQubitModel m = model(19e6, 4e6, 1e6);
  PulseSpec off = pulse(PulseShape::rectangular, 10e-9, m.omega1);
  off.amplitude = 0.0;
  const auto h = lab_hamiltonian(m, {off});
  CHECK((h.at(3e-9) - m.static_hamiltonian()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.at(3e-9) - h.at(3e-9).adjoint()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("drive element after the frame transfer") {
  const TwoQubitModel m = model(19e6);
  const double w = m.transition(1, 0);
  PulseSpec p = pulse(PulseShape::rectangular, 100e-9, w);
  p.amplitude = 5e6;
  const auto lab = lab_hamiltonian(m, {p});
  // sin(2 pi w t) = 1 at t = 1/(4 w): the lab element is the full amplitude.
  const double t = 1.0 / (4.0 * w);
  const HilbertSpace s{2, 2};
  CHECK(std::abs(lab.at(t)(s.index(1, 0), s.index(0, 0))) == Approx(5e6).epsilon(1e-9));
  const auto rot = rotating_frame_transform(lab, {w, m.transition(2, 0)}, true);
  CHECK(std::abs(rot.at(50e-9)(s.index(1, 0), s.index(0, 0))) == Approx(2.5e6).epsilon(1e-12));

  // Two pulses add linearly.
  PulseSpec q = pulse(PulseShape::rectangular, 100e-9, m.transition(2, 0), 2);
  q.amplitude = 3e6;
  const auto both = lab_hamiltonian(m, {p, q});
  const auto only_q = lab_hamiltonian(m, {q});
  const Eigen::MatrixXcd sum = lab.at(t) + only_q.at(t) - m.static_hamiltonian();
  CHECK((both.at(t) - sum).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("rotating frame at the conditional lines leaves only zeta on |11>") {
  const TwoQubitModel m = model(19e6);
  for (auto conv : {spectrum::ZConvention::excited_positive, spectrum::ZConvention::ground_positive}) {
    const double sign = conv == spectrum::ZConvention::excited_positive ? -1.0 : 1.0;
    const auto c = rotating_z_coefficients(m, {m.omega1 + sign * 0.5 * m.zeta, m.omega2 + sign * 0.5 * m.zeta});
    const auto d = c.diagonal(conv);
    CHECK(d[1] - d[0] == Approx(0.0).scale(1.0));
    CHECK(d[2] - d[0] == Approx(0.0).scale(1.0));
    CHECK(d[3] - d[0] == Approx(m.zeta));
  }
  const auto none = rotating_z_coefficients(m, {m.omega1, m.omega2});
  CHECK(none.z1 == 0.0);
  CHECK(none.z2 == 0.0);
}

TEST_CASE("RWA frame reproduces the effective blockade Hamiltonian") {
  const TwoQubitModel m = model(19e6);
  const PulseSpec p1 = pulse(PulseShape::truncated_cosine, 60e-9, m.transition(1, 0));
  const PulseSpec p2 = pulse(PulseShape::truncated_cosine, 60e-9, m.transition(2, 0), 2, 20e-9);
  const auto rot = rotating_frame_transform(lab_hamiltonian(m, {p1, p2}), {p1.carrier, p2.carrier}, true);
  const auto eff = blockade_effective_hamiltonian(m.zeta, {p1, p2});
  for (double t : {0.0, 13e-9, 40e-9, 70e-9}) {
    Eigen::MatrixXcd d = rot.at(t) - eff.at(t);
    d.diagonal().array() -= d.trace() / 4.0;
    CHECK(d.cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("multi-level rotation without RWA is unsupported") {
  const auto kp = spectrum::two_mode_params(6e9, 4.5e9, -300e6, -250e6, 20e6);
  const auto lab = lab_hamiltonian(kp, {3, 3}, {});
  CHECK_THROWS_AS(rotating_frame_transform(lab, {6e9, 4.5e9}, false), UnsupportedError);
}

TEST_CASE("constant diagonal Hamiltonian keeps populations") {
  const TwoQubitModel m = model(19e6);
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {}), {m.omega1, m.omega2}, true);
  Eigen::VectorXcd psi(4);
  psi << 0.5, std::complex<double>(0.0, 0.5), -0.5, 0.5;
  const SimulationResult r = evolve_schrodinger(h, psi, linspace(0.0, 200e-9, 21));
  for (const auto& p : r.populations) CHECK((p - r.populations.front()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.max_norm_drift <= drift_limit);
}

TEST_CASE("resonant rectangular pi pulse flips the target") {
  const TwoQubitModel m = model(19e6);
  const PulseSpec p = pulse(PulseShape::rectangular, 40e-9, m.transition(1, 0));
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {p}), {p.carrier, m.transition(2, 0)}, true);
  const SimulationResult r = evolve_schrodinger(h, basis_state(h.space, 0, 0), {0.0, 40e-9});
  CHECK(r.excited(1, 1) == Approx(1.0).epsilon(1e-6));
  CHECK(r.max_norm_drift <= drift_limit);
  CHECK_THROWS_AS(evolve_schrodinger(h, 2.0 * basis_state(h.space, 0, 0), {0.0, 40e-9}), InvalidArgument);
}

TEST_CASE("detuned Rabi oscillation runs at the generalized Rabi frequency") {
  const TwoQubitModel m = model(0.0);
  const double rabi = 10e6, delta = 7e6;
  PulseSpec p = pulse(PulseShape::rectangular, 1e-6, m.transition(1, 0) - delta);
  p.amplitude = rabi;
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {p}), {p.carrier, m.transition(2, 0)}, true);
  const auto grid = linspace(0.0, 1e-6, 401);
  const SimulationResult r = evolve_schrodinger(h, basis_state(h.space, 0, 0), grid);
  std::vector<double> p1;
  for (std::size_t k = 0; k < grid.size(); ++k) p1.push_back(r.excited(k, 1));
  const CosineFit fit = fit_cosine(grid, p1);
  CHECK(fit.frequency == Approx(std::hypot(rabi, delta)).epsilon(1e-3));
  CHECK(r.max_norm_drift <= drift_limit);
}

TEST_CASE("lab frame without RWA tracks the rotating frame") {
  const TwoQubitModel m = model(19e6);
  const PulseSpec p = pulse(PulseShape::truncated_cosine, 30e-9, m.transition(1, 0));
  const auto lab = lab_hamiltonian(m, {p});
  const auto rot = rotating_frame_transform(lab, {p.carrier, m.transition(2, 0)}, true);
  const auto a = evolve_schrodinger(lab, basis_state(lab.space, 0, 0), {0.0, 30e-9});
  const auto b = evolve_schrodinger(rot, basis_state(rot.space, 0, 0), {0.0, 30e-9});
  CHECK(a.excited(1, 1) == Approx(b.excited(1, 1)).epsilon(0.02));
  CHECK(a.max_norm_drift <= drift_limit);
}

TEST_CASE("relaxation e-folds at T1") {
  const TwoQubitModel m = model(0.0);
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {}), {m.omega1, m.omega2}, true);
  DissipationSpec d;
  d.t1 = {7.35e-6, 9.57e-6};
  const Eigen::VectorXcd e = basis_state(h.space, 1, 0);
  const auto grid = linspace(0.0, 20e-6, 41);
  const SimulationResult r = evolve_lindblad(h, e * e.adjoint(), d, grid);
  std::vector<double> p1;
  for (std::size_t k = 0; k < grid.size(); ++k) p1.push_back(r.excited(k, 1));
  const ExponentialFit fit = fit_exponential(grid, p1);
  CHECK(fit.tau == Approx(7.35e-6).epsilon(0.01));
  CHECK(r.max_trace_drift <= drift_limit);
  CHECK(r.min_eigenvalue > -1e-8);
}

TEST_CASE("Lindblad without dissipation matches the Schroedinger solution") {
  const TwoQubitModel m = model(19e6);
  const PulseSpec p = pulse(PulseShape::truncated_cosine, 40e-9, m.transition(1, 0));
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {p}), {p.carrier, m.transition(2, 0)}, true);
  DissipationSpec d;
  d.t1 = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const Eigen::VectorXcd g = basis_state(h.space, 0, 0);
  const auto grid = linspace(0.0, 40e-9, 9);
  const auto a = evolve_lindblad(h, g * g.adjoint(), d, grid);
  const auto b = evolve_schrodinger(h, g, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK((a.populations[k] - b.populations[k]).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(a.max_trace_drift <= drift_limit);
}

TEST_CASE("pure dephasing decays coherence at 1/T2 and keeps populations") {
  const TwoQubitModel m = model(0.0);
  const auto h = rotating_frame_transform(lab_hamiltonian(m, {}), {m.omega1, m.omega2}, true);
  DissipationSpec d;
  const double inf = std::numeric_limits<double>::infinity();
  d.t1 = {inf, inf};
  d.t2 = {3e-6, inf};
  Eigen::VectorXcd plus = (basis_state(h.space, 0, 0) + basis_state(h.space, 1, 0)) / std::sqrt(2.0);
  const auto grid = linspace(0.0, 6e-6, 13);
  const auto r = evolve_lindblad(h, plus * plus.adjoint(), d, grid, {}, true);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double coh = std::abs(r.states[k](h.space.index(0, 0), h.space.index(1, 0)));
    CHECK(coh == Approx(0.5 * std::exp(-grid[k] / 3e-6)).epsilon(1e-6));
    CHECK(r.excited(k, 1) == Approx(0.5).epsilon(1e-9));
  }
  CHECK(r.max_trace_drift <= drift_limit);
}

TEST_CASE("dissipation spec validation") {
  DissipationSpec d;
  d.t1 = {1e-6, 1e-6};
  d.t2 = {3e-6, 0.0};
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  d.t2 = {1e-6, 0.0};
  d.state_prep_error = 2.0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
}

TEST_CASE("blockade protocol at 19 MHz") {
  // Frozen from an independent scipy DOP853 integration of the effective
  // blockade Hamiltonian (rtol 1e-12).
  const TwoQubitModel m = model(19e6);
  BlockadeSettings s;
  s.pulse_length = 200e-9;
  const BlockadePoint pos = blockade_point(m, 100e-9, s);
  const BlockadePoint neg = blockade_point(m, -100e-9, s);
  CHECK(pos.p1_e == Approx(9.350066086908657e-05).epsilon(1e-5));
  CHECK(neg.p1_e == Approx(0.9971097951672522).epsilon(1e-7));
  CHECK(pos.p1_e <= 0.1);
  CHECK(neg.p1_e >= 0.95);
  CHECK(pos.norm_drift <= drift_limit);
  CHECK(neg.norm_drift <= drift_limit);

  const ProtocolSpec proto = make_blockade_protocol(m, 100e-9, s);
  REQUIRE(proto.pulses.size() == 2);
  CHECK(proto.total_time == Approx(300e-9));
  CHECK(proto.pulses[0].target_qubit == 1);
  CHECK(proto.pulses[0].start_time == Approx(100e-9));
  CHECK(proto.pulses[1].start_time == 0.0);
}

TEST_CASE("no interaction, no blockade") {
  const TwoQubitModel m = model(0.0);
  BlockadeSettings s;
  s.pulse_length = 60e-9;
  for (double d : {20e-9, 50e-9, 100e-9}) {
    CHECK(blockade_point(m, d, s).p1_e == Approx(blockade_point(m, -d, s).p1_e).epsilon(1e-3));
  }
}

TEST_CASE("frames agree on a blockade point") {
  const TwoQubitModel m = model(19e6);
  BlockadeSettings s;
  s.pulse_length = 60e-9;
  const double rot = blockade_point(m, 30e-9, s).p1_e;
  s.frame = Frame::blockade_effective;
  CHECK(blockade_point(m, 30e-9, s).p1_e == Approx(rot).epsilon(1e-6));
  s.frame = Frame::lab;
  const BlockadePoint lab = blockade_point(m, 30e-9, s);
  CHECK(std::abs(lab.p1_e - rot) <= 0.02 * rot);
  CHECK(lab.norm_drift <= drift_limit);
  s.frame = Frame::blockade_effective;
  s.carriers = CarrierConvention::excited_conditioned;
  CHECK_THROWS_AS(blockade_point(m, 30e-9, s), InvalidArgument);
}

TEST_CASE("weak exchange does not change the blockade") {
  BlockadeSettings s;
  s.pulse_length = 60e-9;
  for (double d : {-40e-9, 0.0, 40e-9}) {
    const double a = blockade_point(model(19e6), d, s).p1_e;
    const double b = blockade_point(model(19e6, 8.05e6, 1.69e6), d, s).p1_e;
    CHECK(std::abs(a - b) < 0.01);
  }
}

TEST_CASE("delay sweep is anti-correlated with a crossover of about one pulse length") {
  const TwoQubitModel m = model(19e6);
  BlockadeSettings s;
  s.pulse_length = 100e-9;
  std::vector<double> d, p1, p2;
  for (int i = -30; i <= 30; ++i) {
    const BlockadePoint b = blockade_point(m, i * 10e-9, s);
    d.push_back(b.delay);
    p1.push_back(b.p1_e);
    p2.push_back(b.p2_e);
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double d1 = p1[i] - p1[i - 1], d2 = p2[i] - p2[i - 1];
    if (std::abs(d1) > 1e-3) CHECK(d1 * d2 < 0.0);
  }
  // Span over which P1 sits more than 1% of the step away from both plateaus.
  const double hi = p1.front(), lo = p1.back();
  const double upper = hi - 0.01 * (hi - lo), lower = lo + 0.01 * (hi - lo);
  auto crossing = [&](double level) {
    for (std::size_t i = 1; i < d.size(); ++i) {
      if ((p1[i - 1] - level) * (p1[i] - level) <= 0.0) {
        return d[i - 1] + (level - p1[i - 1]) * (d[i] - d[i - 1]) / (p1[i] - p1[i - 1]);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double width = crossing(lower) - crossing(upper);
  CHECK(width >= 0.5 * s.pulse_length);
  CHECK(width <= 2.0 * s.pulse_length);
}

TEST_CASE("numeric pi calibration stays near the area rule") {
  const TwoQubitModel m = model(19e6);
  BlockadeSettings s;
  s.pulse_length = 30e-9;
  const double a = calibrate_pi_amplitude_numeric(m, 1, s);
  CHECK(a == Approx(pi_pulse_amplitude(s.shape, s.pulse_length)).epsilon(0.02));
}

TEST_CASE("relaxing blockade matches the Lindblad oracle") {
  // Frozen from an independent scipy Lindblad integration.
  const TwoQubitModel m = model(19e6);
  BlockadeSettings s;
  s.pulse_length = 60e-9;
  DissipationSpec d;
  d.t1 = {7.35e-6, 9.57e-6};
  const BlockadePoint a = blockade_point(m, -2e-6, s, d);
  const BlockadePoint b = blockade_point(m, 2e-6, s, d);
  CHECK(a.p1_e == Approx(0.7591024104345863).epsilon(1e-6));
  CHECK(a.p2_e == Approx(0.3160644078091023).epsilon(1e-6));
  CHECK(b.p1_e == Approx(0.2715255683934784).epsilon(1e-6));
  CHECK(b.p2_e == Approx(0.8092219281330381).epsilon(1e-6));
  CHECK(a.trace_drift <= drift_limit);
  CHECK(b.trace_drift <= drift_limit);
}

TEST_CASE("spectral power") {
  PulseSpec rect = pulse(PulseShape::rectangular, 100e-9, 5e9);
  CHECK(pulse_spectral_power(rect, 0.0, 2e9, 1e-6) == Approx(1.0).epsilon(1e-3));
  const double null = pulse_spectral_power(rect, 1.0 / 100e-9, 1e5, 4e-4);
  const double peak = pulse_spectral_power(rect, 0.0, 1e5, 4e-4);
  CHECK(null < 1e-3 * peak);

  // Continuous Fourier integrals by adaptive quadrature (scipy).
  const PulseSpec short_p = pulse(PulseShape::truncated_cosine, 16e-9, 5e9);
  const PulseSpec long_p = pulse(PulseShape::truncated_cosine, 200e-9, 5e9);
  const double a = pulse_spectral_power(short_p, 19e6, 1e6);
  const double b = pulse_spectral_power(long_p, 19e6, 1e6);
  CHECK(a == Approx(0.009461065223164169).epsilon(1e-3));
  CHECK(b == Approx(1.933704980385127e-06).epsilon(1e-3));
  CHECK(a > 10.0 * b);
  CHECK_THROWS_AS(pulse_spectral_power(long_p, 19e6, 1e6, 100e-9), ResolutionError);
  CHECK_THROWS_AS(pulse_spectral_power(long_p, 19e6, 0.0), InvalidArgument);
}

TEST_CASE("conditional Ramsey") {
  const auto grid = linspace(0.0, 300e-9, 151);
  RamseySettings s;
  s.detuning = 20e6;
  const TwoQubitModel free = model(0.0);
  const RamseyResult g0 = run_conditional_ramsey(free, 0, grid, s);
  const RamseyResult g1 = run_conditional_ramsey(free, 1, grid, s);
  CHECK(g0.fringe_hz == Approx(20e6).epsilon(1e-3));
  CHECK(g1.fringe_hz == Approx(g0.fringe_hz).epsilon(1e-6));

  const TwoQubitModel m = model(15.25036188e6);
  const RamseyResult a = run_conditional_ramsey(m, 0, grid, s);
  const RamseyResult b = run_conditional_ramsey(m, 1, grid, s);
  CHECK(b.fringe_hz - a.fringe_hz == Approx(m.zeta).epsilon(1e-3));
  CHECK(a.max_norm_drift <= drift_limit);
  CHECK(b.max_norm_drift <= drift_limit);
  CHECK(a.contrast > 0.9);
}

TEST_CASE("Ramsey without contrast fails the fit") {
  RamseySettings s;
  s.detuning = 20e6;
  s.min_contrast = 1.5;
  CHECK_THROWS_AS(run_conditional_ramsey(model(0.0), 0, linspace(0.0, 100e-9, 51), s), FitError);
}

TEST_CASE("echo conditional phase") {
  const double z = 5e6, tau = 400e-9;
  CHECK(echo_conditional_phase_analytic(z, tau / 2, tau) == 0.0);
  CHECK(echo_conditional_phase_analytic(z, std::nullopt, tau) == Approx(units::two_pi * z * tau));
  const TwoQubitModel m = model(z);
  const EchoResult none = run_echo_conditional_phase(m, std::nullopt, tau);
  const EchoResult half = run_echo_conditional_phase(m, tau / 2, tau);
  const EchoResult quarter = run_echo_conditional_phase(m, tau / 4, tau);
  CHECK(none.phase == Approx(units::two_pi * z * tau).epsilon(5e-3));
  CHECK(std::abs(half.phase) < 5e-3 * units::two_pi * z * tau);
  CHECK(quarter.phase == Approx(-units::pi * z * tau).epsilon(5e-3));
  CHECK(quarter.max_norm_drift <= drift_limit);
}

TEST_CASE("readout confusion matrix") {
  Eigen::Vector2d truth(1.0, 0.0);
  Eigen::Matrix2d f;
  f << 0.95, 0.05, 0.10, 0.90;
  const Eigen::VectorXd meas = apply_readout_matrix(truth, f);
  CHECK(meas(0) == Approx(0.95));
  CHECK(meas(1) == Approx(0.05));
  CHECK((apply_readout_matrix(truth, Eigen::Matrix2d::Identity()) - truth).norm() == 0.0);
  Eigen::Vector2d p(0.3, 0.7);
  CHECK((invert_readout_matrix(apply_readout_matrix(p, f), f) - p).norm() < 1e-9);
  CHECK(measured_excited(1.0, f) == Approx(0.90));
  Eigen::Matrix2d bad;
  bad << 0.9, 0.2, 0.1, 0.9;
  CHECK_THROWS_AS(apply_readout_matrix(truth, bad), StochasticityError);
  Eigen::Matrix2d singular;
  singular << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(invert_readout_matrix(p, singular), IllConditionedError);
  CHECK_THROWS_AS(apply_readout_matrix(Eigen::Vector3d(1, 0, 0), f), DimensionMismatchError);
}

TEST_CASE("fits") {
  const auto x = linspace(0.0, 10.0, 50);
  std::vector<double> y, c;
  for (double t : x) {
    y.push_back(0.8 - 0.6 * std::exp(-t / 3.0));
    c.push_back(0.5 + 0.4 * std::cos(2 * units::pi * 0.7 * t + 0.3));
  }
  const ExponentialFit e = fit_exponential(x, y);
  CHECK(e.tau == Approx(3.0).epsilon(1e-8));
  CHECK(e.amplitude == Approx(-0.6).epsilon(1e-8));
  CHECK(e.offset == Approx(0.8).epsilon(1e-8));
  const CosineFit f = fit_cosine(x, c);
  CHECK(f.frequency == Approx(0.7).epsilon(1e-8));
  CHECK(f.amplitude == Approx(0.4).epsilon(1e-8));
  CHECK(spearman({1, 2, 3}, {10, 20, 30}) == Approx(1.0));
  CHECK(spearman({1, 2, 3}, {3, 2, 1}) == Approx(-1.0));
}

#include "zzkit/protocols.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fmt/format.h>

#include "zzkit/errors.hpp"
#include "zzkit/fitting.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

using cplx = std::complex<double>;

CarrierConvention parse_carrier_convention(const std::string& name) {
  if (name == "ground_conditioned") return CarrierConvention::ground_conditioned;
  if (name == "excited_conditioned") return CarrierConvention::excited_conditioned;
  throw InvalidArgument(fmt::format("unknown carrier convention '{}'", name));
}

std::string to_string(CarrierConvention c) {
  return c == CarrierConvention::ground_conditioned ? "ground_conditioned" : "excited_conditioned";
}

void ProtocolSpec::validate() const {
  if (!(total_time > 0.0)) throw InvalidArgument("protocol total_time must be > 0");
  for (const auto& p : pulses) p.validate();
  for (double t : readout_times) {
    if (t < 0.0 || t > total_time) {
      throw InvalidArgument(fmt::format("readout time {} s outside [0, {}] s", t, total_time));
    }
  }
}

namespace {

double carrier_for(const TwoQubitModel& m, int qubit, CarrierConvention c) {
  return m.transition(qubit, c == CarrierConvention::ground_conditioned ? 0 : 1);
}

double sigma_for(const BlockadeSettings& s, double length) {
  return s.shape == PulseShape::gaussian ? s.gaussian_sigma_fraction * length : 0.0;
}

std::array<double, 2> frame_for(const TwoQubitModel& model, const std::vector<PulseSpec>& pulses) {
  std::array<double, 2> f{model.transition(1, 0), model.transition(2, 0)};
  std::array<bool, 2> seen{false, false};
  for (const auto& p : pulses) {
    const auto i = static_cast<std::size_t>(p.target_qubit - 1);
    if (!seen[i]) {
      f[i] = p.carrier;
      seen[i] = true;
    }
  }
  return f;
}

TimeDependentHamiltonian build_for_frame(const TwoQubitModel& model, const std::vector<PulseSpec>& pulses,
                                         Frame frame, bool rwa, std::optional<std::array<double, 2>> frame_freqs = {}) {
  switch (frame) {
    case Frame::lab: return lab_hamiltonian(model, pulses);
    case Frame::rotating:
      return rotating_frame_transform(lab_hamiltonian(model, pulses), frame_freqs.value_or(frame_for(model, pulses)),
                                      rwa);
    case Frame::blockade_effective: {
      for (const auto& p : pulses) {
        if (std::abs(p.carrier - model.transition(p.target_qubit, 0)) > 1e-6 * p.carrier) {
          throw InvalidArgument("the blockade_effective frame assumes ground-conditioned carriers");
        }
      }
      return blockade_effective_hamiltonian(model.zeta, pulses);
    }
  }
  throw InvalidArgument("unknown frame");
}

std::vector<double> grid_with_zero(const std::vector<double>& times) {
  std::vector<double> g{0.0};
  for (double t : times) {
    if (t > 0.0) g.push_back(t);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

ProtocolSpec make_blockade_protocol(const TwoQubitModel& model, double delay, const BlockadeSettings& settings) {
  if (!(settings.pulse_length > 0.0)) throw InvalidArgument("pulse_length must be > 0");
  const double len = settings.pulse_length;
  const double sigma = sigma_for(settings, len);
  ProtocolSpec proto;
  proto.delay = delay;
  proto.frame = settings.frame;
  for (int q = 1; q <= 2; ++q) {
    PulseSpec p;
    p.shape = settings.shape;
    p.duration = len;
    p.gaussian_sigma = sigma;
    p.target_qubit = q;
    p.carrier = carrier_for(model, q, settings.carriers);
    p.amplitude = settings.numeric_calibration ? calibrate_pi_amplitude_numeric(model, q, settings)
                                               : pi_pulse_amplitude(settings.shape, len, sigma);
    // Positive delay: qubit 2 first.
    const bool first = (q == 2) == (delay > 0.0);
    p.start_time = first ? 0.0 : std::abs(delay);
    proto.pulses.push_back(p);
  }
  proto.total_time = std::abs(delay) + len + settings.readout_wait;
  proto.readout_times = {proto.total_time};
  return proto;
}

SimulationResult run_blockade_protocol(const TwoQubitModel& model, const ProtocolSpec& protocol,
                                       const std::optional<DissipationSpec>& dissipation,
                                       const IntegratorOptions& opts) {
  protocol.validate();
  const TimeDependentHamiltonian h = build_for_frame(model, protocol.pulses, protocol.frame, protocol.rwa);
  const std::vector<double> grid = grid_with_zero(protocol.readout_times);
  const Eigen::VectorXcd psi0 = basis_state(h.space, 0, 0);
  if (!dissipation) return evolve_schrodinger(h, psi0, grid, opts);
  const int dim = h.space.dim();
  const double eps = dissipation->state_prep_error;
  const Eigen::MatrixXcd rho0 =
      (1.0 - eps) * psi0 * psi0.adjoint() + (eps / dim) * Eigen::MatrixXcd::Identity(dim, dim);
  return evolve_lindblad(h, rho0, *dissipation, grid, opts);
}

BlockadePoint blockade_point(const TwoQubitModel& model, double delay, const BlockadeSettings& settings,
                             const std::optional<DissipationSpec>& dissipation, const IntegratorOptions& opts) {
  const ProtocolSpec proto = make_blockade_protocol(model, delay, settings);
  const SimulationResult r = run_blockade_protocol(model, proto, dissipation, opts);
  BlockadePoint out;
  out.delay = delay;
  out.pulse_length = settings.pulse_length;
  out.p1_e = r.excited(r.times.size() - 1, 1);
  out.p2_e = r.excited(r.times.size() - 1, 2);
  out.norm_drift = r.max_norm_drift;
  out.trace_drift = r.max_trace_drift;
  return out;
}

double calibrate_pi_amplitude_numeric(const TwoQubitModel& model, int qubit, const BlockadeSettings& settings) {
  const double len = settings.pulse_length;
  const double sigma = sigma_for(settings, len);
  const double a0 = pi_pulse_amplitude(settings.shape, len, sigma);
  auto excitation = [&](double amp) {
    PulseSpec p;
    p.shape = settings.shape;
    p.duration = len;
    p.gaussian_sigma = sigma;
    p.target_qubit = qubit;
    p.carrier = model.transition(qubit, 0);
    p.amplitude = amp;
    const Frame frame = settings.frame == Frame::lab ? Frame::lab : Frame::rotating;
    const TimeDependentHamiltonian h = build_for_frame(model, {p}, frame, true);
    const SimulationResult r = evolve_schrodinger(h, basis_state(h.space, 0, 0), {0.0, len});
    return -r.excited(1, qubit);
  };
  std::uintmax_t iters = 60;
  const auto best = boost::math::tools::brent_find_minima(excitation, 0.8 * a0, 1.2 * a0, 30, iters);
  return best.first;
}

RamseyResult run_conditional_ramsey(const TwoQubitModel& model, int spectator_state,
                                    const std::vector<double>& free_time_grid, const RamseySettings& settings,
                                    const IntegratorOptions& opts) {
  if (spectator_state != 0 && spectator_state != 1) throw InvalidArgument("spectator_state must be 0 or 1");
  if (free_time_grid.size() < 6) throw InvalidArgument("Ramsey needs at least 6 free times");
  for (std::size_t i = 0; i < free_time_grid.size(); ++i) {
    if (free_time_grid[i] < 0.0 || (i > 0 && !(free_time_grid[i] > free_time_grid[i - 1]))) {
      throw InvalidArgument("free times must be non-negative and strictly increasing");
    }
  }
  const double detuning = settings.detuning > 0.0 ? settings.detuning : std::max(2.0 * std::abs(model.zeta), 5e6);
  const double tp = settings.pulse_length;
  const double amp = rotation_amplitude(PulseShape::rectangular, tp, 0.5 * units::pi);
  const std::array<double, 2> frame{model.transition(1, 0) - detuning, model.transition(2, 0)};

  auto half_pi = [&](double start) {
    PulseSpec p;
    p.shape = PulseShape::rectangular;
    p.duration = tp;
    p.amplitude = amp;
    p.carrier = frame[0];
    p.start_time = start;
    p.target_qubit = 1;
    return p;
  };

  // First pulse, then one free evolution through all wait times, then the
  // closing pulse from each stored state.
  const TimeDependentHamiltonian h1 = rotating_frame_transform(lab_hamiltonian(model, {half_pi(0.0)}), frame, true);
  const Eigen::VectorXcd psi0 = basis_state(h1.space, 0, spectator_state);
  const SimulationResult r1 = evolve_schrodinger(h1, psi0, {0.0, tp}, opts, true);

  const TimeDependentHamiltonian hfree = rotating_frame_transform(lab_hamiltonian(model, {}), frame, true);
  std::vector<double> free_grid{tp};
  for (double t : free_time_grid) {
    if (t > 0.0) free_grid.push_back(tp + t);
  }
  const SimulationResult rf = evolve_schrodinger(hfree, r1.states.back().col(0), free_grid, opts, true);

  RamseyResult out;
  out.free_times = free_time_grid;
  out.max_norm_drift = std::max(r1.max_norm_drift, rf.max_norm_drift);
  std::size_t k_free = free_time_grid.front() > 0.0 ? 1 : 0;
  for (double t : free_time_grid) {
    const Eigen::VectorXcd psi = rf.states[t > 0.0 ? k_free++ : 0].col(0);
    const double start = tp + t;
    const TimeDependentHamiltonian h2 = rotating_frame_transform(lab_hamiltonian(model, {half_pi(start)}), frame, true);
    const SimulationResult r2 = evolve_schrodinger(h2, psi, {start, start + tp}, opts);
    out.p1_e.push_back(r2.excited(1, 1));
    out.max_norm_drift = std::max(out.max_norm_drift, r2.max_norm_drift);
  }
  const CosineFit fit = fit_cosine(out.free_times, out.p1_e, settings.min_contrast);
  out.fringe_hz = fit.frequency;
  out.contrast = 2.0 * fit.amplitude;
  return out;
}

double echo_conditional_phase_analytic(double zeta, std::optional<double> t_flip, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("free time must be > 0");
  if (!t_flip) return units::two_pi * zeta * tau;
  if (*t_flip < 0.0 || *t_flip > tau) throw InvalidArgument("flip time must lie within the free window");
  return units::two_pi * zeta * (2.0 * *t_flip - tau);
}

EchoResult run_echo_conditional_phase(const TwoQubitModel& model, std::optional<double> t_flip, double tau,
                                      int grid_points, const IntegratorOptions& opts) {
  if (!(tau > 0.0)) throw InvalidArgument("free time must be > 0");
  if (t_flip && (*t_flip <= 0.0 || *t_flip >= tau)) {
    throw InvalidArgument("flip time must lie strictly inside the free window");
  }
  if (grid_points < 3) throw InvalidArgument("echo needs at least 3 grid points");
  const std::array<double, 2> frame{model.transition(1, 0), model.transition(2, 0)};
  const TimeDependentHamiltonian h = rotating_frame_transform(lab_hamiltonian(model, {}), frame, true);

  EchoResult out;
  auto accumulated = [&](int spectator) {
    Eigen::VectorXcd psi = (basis_state(h.space, 0, spectator) + basis_state(h.space, 1, spectator)) / std::sqrt(2.0);
    double phase = 0.0;
    double last = 0.0;
    auto track = [&](const SimulationResult& r) {
      for (const auto& st : r.states) {
        // Qubit-1 coherence traced over qubit 2.
        const cplx c = std::conj(st(h.space.index(0, 0), 0)) * st(h.space.index(1, 0), 0) +
                       std::conj(st(h.space.index(0, 1), 0)) * st(h.space.index(1, 1), 0);
        const double a = -std::arg(c);
        double d = a - last;
        d -= units::two_pi * std::round(d / units::two_pi);
        phase += d;
        last = a;
      }
      out.max_norm_drift = std::max(out.max_norm_drift, r.max_norm_drift);
    };
    const double t_split = t_flip.value_or(tau);
    auto segment = [&](double t0, double t1) {
      const int n = std::max(3, static_cast<int>(std::lround(grid_points * (t1 - t0) / tau)));
      std::vector<double> g(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (n - 1);
      const SimulationResult r = evolve_schrodinger(h, psi, g, opts, true);
      track(r);
      psi = r.states.back().col(0);
    };
    {
      const cplx c = std::conj(psi(h.space.index(0, spectator))) * psi(h.space.index(1, spectator));
      last = -std::arg(c);
    }
    segment(0.0, t_split);
    if (t_flip) {
      // Instantaneous X on qubit 2.
      Eigen::VectorXcd flipped(psi.size());
      for (int n1 = 0; n1 < 2; ++n1) {
        for (int n2 = 0; n2 < 2; ++n2) flipped(h.space.index(n1, 1 - n2)) = psi(h.space.index(n1, n2));
      }
      psi = flipped;
      segment(t_split, tau);
    }
    return phase;
  };
  out.phase = accumulated(1) - accumulated(0);
  return out;
}

}  // namespace zzkit::dynamics

#include "zzkit/driven_system.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <map>

#include "zzkit/errors.hpp"
#include "zzkit/hamiltonian.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

using cplx = std::complex<double>;

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::lab: return "lab";
    case Frame::rotating: return "rotating";
    case Frame::blockade_effective: return "blockade_effective";
  }
  return "unknown";
}

Frame parse_frame(const std::string& name) {
  if (name == "lab") return Frame::lab;
  if (name == "rotating") return Frame::rotating;
  if (name == "blockade_effective") return Frame::blockade_effective;
  throw InvalidArgument(fmt::format("unknown frame '{}'", name));
}

std::string HilbertSpace::label(int idx) const { return fmt::format("{}{}", idx / d2, idx % d2); }

Eigen::MatrixXcd HilbertSpace::lowering(int mode) const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int n1 = 0; n1 < d1; ++n1) {
    for (int n2 = 0; n2 < d2; ++n2) {
      if (mode == 1 && n1 > 0) a(index(n1 - 1, n2), index(n1, n2)) = std::sqrt(static_cast<double>(n1));
      if (mode == 2 && n2 > 0) a(index(n1, n2 - 1), index(n1, n2)) = std::sqrt(static_cast<double>(n2));
    }
  }
  return a;
}

Eigen::MatrixXcd HilbertSpace::number(int mode) const {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) n(i, i) = mode == 1 ? i / d2 : i % d2;
  return n;
}

Eigen::MatrixXcd HilbertSpace::drive_operator(int mode) const {
  const Eigen::MatrixXcd a = lowering(mode);
  return cplx(0.0, 1.0) * (a - a.adjoint());
}

void TimeDependentHamiltonian::accumulate(double t, Eigen::MatrixXcd& out) const {
  for (const auto& term : terms) {
    const double env = term.envelope ? term.envelope(t) : 1.0;
    if (env == 0.0) continue;
    if (term.freq_hz == 0.0 && term.phase == 0.0) {
      out.noalias() += env * term.op;
    } else {
      out.noalias() += (env * std::polar(1.0, units::two_pi * term.freq_hz * t + term.phase)) * term.op;
    }
  }
}

Eigen::MatrixXcd TimeDependentHamiltonian::at(double t) const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  accumulate(t, h);
  return h;
}

double TimeDependentHamiltonian::max_frequency_hz() const {
  double f = 0.0;
  for (const auto& term : terms) f = std::max(f, std::abs(term.freq_hz));
  return f;
}

TwoQubitModel TwoQubitModel::from_pauli(const spectrum::PauliDecomposition& decomp) {
  const auto cf = spectrum::conditional_frequencies(decomp);
  if (!(cf.w1_given0 > 0.0) || !(cf.w2_given0 > 0.0)) {
    throw InvalidArgument(fmt::format(
        "Pauli table implies negative qubit frequencies ({:.6g}, {:.6g} Hz); check the Z convention",
        cf.w1_given0, cf.w2_given0));
  }
  TwoQubitModel m;
  m.zeta = decomp.zeta();
  m.omega1 = cf.w1_given0 + 0.5 * m.zeta;
  m.omega2 = cf.w2_given0 + 0.5 * m.zeta;
  m.jxx = decomp.beta[2];
  m.jyy = decomp.beta[3];
  return m;
}

double TwoQubitModel::transition(int qubit, int spectator_state) const {
  const double w = qubit == 1 ? omega1 : omega2;
  return spectator_state == 0 ? w - 0.5 * zeta : w + 0.5 * zeta;
}

namespace {

// Single-qubit Paulis in the (|0>, |1>) basis with Z|1> = +|1> and <0|Y|1> = i.
Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, 1), cplx(0, -1), 0;
  return m;
}
Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << -1, 0, 0, 1;
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::function<double(double)> envelope_of(const PulseSpec& p) {
  return [p](double t) { return p.envelope(t); };
}

void add_lab_drives(TimeDependentHamiltonian& h, const std::vector<PulseSpec>& pulses) {
  for (const auto& p : pulses) {
    p.validate();
    const Eigen::MatrixXcd d = h.space.drive_operator(p.target_qubit);
    // sin(x) = (e^{ix} - e^{-ix}) / 2i
    h.terms.push_back({d / cplx(0.0, 2.0), envelope_of(p), p.carrier, p.phase});
    h.terms.push_back({-d / cplx(0.0, 2.0), envelope_of(p), -p.carrier, -p.phase});
  }
  h.breakpoints = pulse_breakpoints(pulses);
}

}  // namespace

Eigen::MatrixXcd TwoQubitModel::static_hamiltonian() const {
  const Eigen::MatrixXcd id = Eigen::Matrix2cd::Identity();
  return 0.5 * omega1 * kron(pauli_z(), id) + 0.5 * omega2 * kron(id, pauli_z()) +
         0.25 * zeta * kron(pauli_z(), pauli_z()) + jxx * kron(pauli_x(), pauli_x()) +
         jyy * kron(pauli_y(), pauli_y());
}

std::vector<double> pulse_breakpoints(const std::vector<PulseSpec>& pulses) {
  std::vector<double> b;
  for (const auto& p : pulses) {
    b.push_back(p.start_time);
    b.push_back(p.end_time());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

TimeDependentHamiltonian lab_hamiltonian(const TwoQubitModel& model, const std::vector<PulseSpec>& pulses) {
  TimeDependentHamiltonian h;
  h.space = {2, 2};
  h.frame = Frame::lab;
  h.pauli_level = true;
  h.terms.push_back({model.static_hamiltonian(), {}, 0.0, 0.0});
  add_lab_drives(h, pulses);
  return h;
}

TimeDependentHamiltonian lab_hamiltonian(const circuit::KerrParams& params, std::pair<int, int> levels,
                                         const std::vector<PulseSpec>& pulses) {
  const spectrum::TruncatedHamiltonian th = spectrum::build_hamiltonian(params, levels, std::nullopt);
  TimeDependentHamiltonian h;
  h.space = {levels.first, levels.second};
  h.frame = Frame::lab;
  h.pauli_level = h.space.qubits();
  // build_hamiltonian uses the same lexicographic (n1, n2) order.
  h.terms.push_back({th.matrix.cast<cplx>(), {}, 0.0, 0.0});
  add_lab_drives(h, pulses);
  return h;
}

TimeDependentHamiltonian rotating_frame_transform(const TimeDependentHamiltonian& h_lab,
                                                  std::array<double, 2> drive_freqs, bool rwa,
                                                  double rwa_cutoff_hz) {
  if (h_lab.frame != Frame::lab) throw InvalidArgument("rotating_frame_transform expects a lab-frame Hamiltonian");
  if (!rwa && !h_lab.pauli_level) {
    throw UnsupportedError("multi-level Hamiltonians can only be rotated under the RWA; integrate in the lab frame instead");
  }
  const double cutoff = rwa_cutoff_hz > 0.0 ? rwa_cutoff_hz : 0.5 * std::min(drive_freqs[0], drive_freqs[1]);
  if (rwa && !(cutoff > 0.0)) throw InvalidArgument("RWA needs positive drive frequencies");

  const HilbertSpace& sp = h_lab.space;
  const int dim = sp.dim();
  // U = exp(i 2 pi sum_i f_i n_i t): element (k, l) picks up exp(i 2 pi (F_k - F_l) t).
  std::vector<double> fk(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) fk[k] = drive_freqs[0] * (k / sp.d2) + drive_freqs[1] * (k % sp.d2);

  TimeDependentHamiltonian out;
  out.space = sp;
  out.frame = Frame::rotating;
  out.frame_freqs = drive_freqs;
  out.pauli_level = h_lab.pauli_level;
  out.breakpoints = h_lab.breakpoints;

  Eigen::MatrixXcd static_part = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : h_lab.terms) {
    std::map<double, Eigen::MatrixXcd> by_freq;
    for (int k = 0; k < dim; ++k) {
      for (int l = 0; l < dim; ++l) {
        if (term.op(k, l) == cplx(0.0, 0.0)) continue;
        const double f = term.freq_hz + (fk[k] - fk[l]);
        // Exact cancellations (resonant components) should land on 0.
        const double key = std::abs(f) < 1e-6 ? 0.0 : f;
        auto [it, inserted] = by_freq.try_emplace(key, Eigen::MatrixXcd::Zero(dim, dim));
        it->second(k, l) = term.op(k, l);
      }
    }
    for (auto& [f, op] : by_freq) {
      if (rwa && std::abs(f) > cutoff) continue;
      if (f == 0.0 && !term.envelope) {
        static_part += op;
        continue;
      }
      out.terms.push_back({std::move(op), term.envelope, f, term.phase});
    }
  }
  // - sum_i f_i n_i, with the trace removed so no global phase spins at the
  // carrier frequency.
  for (int k = 0; k < dim; ++k) static_part(k, k) -= fk[k];
  static_part.diagonal().array() -= static_part.trace() / static_cast<double>(dim);
  out.terms.insert(out.terms.begin(), {static_part, {}, 0.0, 0.0});
  return out;
}

std::array<double, 4> RotatingZCoefficients::diagonal(spectrum::ZConvention convention) const {
  std::array<double, 4> d{};
  const double s = convention == spectrum::ZConvention::excited_positive ? 1.0 : -1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double a = i == 1 ? s : -s;
      const double b = j == 1 ? s : -s;
      d[static_cast<std::size_t>(2 * i + j)] = z1 * a + z2 * b + zz * a * b;
    }
  }
  return d;
}

RotatingZCoefficients rotating_z_coefficients(const TwoQubitModel& model, std::array<double, 2> frame_freqs) {
  RotatingZCoefficients c;
  c.z1 = 0.5 * (model.omega1 - frame_freqs[0]);
  c.z2 = 0.5 * (model.omega2 - frame_freqs[1]);
  c.zz = 0.25 * model.zeta;
  return c;
}

TimeDependentHamiltonian blockade_effective_hamiltonian(double zeta, const std::vector<PulseSpec>& pulses) {
  TimeDependentHamiltonian h;
  h.space = {2, 2};
  h.frame = Frame::blockade_effective;
  h.pauli_level = true;
  Eigen::MatrixXcd p11 = Eigen::MatrixXcd::Zero(4, 4);
  p11(3, 3) = zeta;
  h.terms.push_back({p11, {}, 0.0, 0.0});
  const Eigen::MatrixXcd id = Eigen::Matrix2cd::Identity();
  for (const auto& p : pulses) {
    p.validate();
    // Omega/2 (cos phi X + sin phi Y) = Omega/2 (e^{i phi} |0><1| + h.c.)
    Eigen::Matrix2cd up = Eigen::Matrix2cd::Zero();
    up(0, 1) = 0.5;
    const Eigen::MatrixXcd raise = p.target_qubit == 1 ? kron(up, id) : kron(id, up);
    h.terms.push_back({raise, envelope_of(p), 0.0, p.phase});
    h.terms.push_back({raise.adjoint(), envelope_of(p), 0.0, -p.phase});
  }
  h.breakpoints = pulse_breakpoints(pulses);
  return h;
}

}  // namespace zzkit::dynamics

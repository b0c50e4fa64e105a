#include "zzkit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "zzkit/errors.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

double SimulationResult::excited(std::size_t k, int qubit) const {
  const Eigen::VectorXd& p = populations.at(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < basis_labels.size(); ++i) {
    const char c = basis_labels[i][qubit == 1 ? 0 : 1];
    if (c != '0') acc += p(static_cast<Eigen::Index>(i));
  }
  return acc;
}

std::size_t SimulationResult::basis_index(const std::string& label) const {
  const auto it = std::find(basis_labels.begin(), basis_labels.end(), label);
  if (it == basis_labels.end()) throw InvalidArgument(fmt::format("no basis state '{}'", label));
  return static_cast<std::size_t>(it - basis_labels.begin());
}

Eigen::VectorXcd basis_state(const HilbertSpace& space, int n1, int n2) {
  if (n1 < 0 || n1 >= space.d1 || n2 < 0 || n2 >= space.d2) {
    throw InvalidArgument(fmt::format("state |{}{}> outside the truncated space", n1, n2));
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index(n1, n2)) = 1.0;
  return v;
}

void DissipationSpec::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!(t1[i] > 0.0)) throw InvalidArgument(fmt::format("T1 of qubit {} must be > 0", i + 1));
    if (t2[i] < 0.0) throw InvalidArgument(fmt::format("T2 of qubit {} must be >= 0", i + 1));
    if (t2[i] > 0.0 && std::isfinite(t1[i]) && t2[i] > 2.0 * t1[i] * (1.0 + 1e-12)) {
      throw InvalidArgument(fmt::format("T2 = {} s exceeds 2 T1 = {} s on qubit {}", t2[i], 2.0 * t1[i], i + 1));
    }
  }
  if (state_prep_error < 0.0 || state_prep_error > 1.0) {
    throw InvalidArgument("state_prep_error must lie in [0, 1]");
  }
}

std::vector<CollapseOperator> DissipationSpec::collapse_operators(const HilbertSpace& space) const {
  validate();
  std::vector<CollapseOperator> out;
  for (int q = 1; q <= 2; ++q) {
    const double t1q = t1[q - 1];
    const double t2q = t2[q - 1];
    if (std::isfinite(t1q)) out.push_back({std::sqrt(1.0 / t1q) * space.lowering(q)});
    if (t2q > 0.0 && std::isfinite(t2q)) {
      const double gamma_phi = 1.0 / t2q - (std::isfinite(t1q) ? 0.5 / t1q : 0.0);
      if (gamma_phi > 0.0) out.push_back({std::sqrt(2.0 * gamma_phi) * space.number(q)});
    }
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  // f(t, y, dy)
  std::function<void(double, const Mat&, Mat&)> f;
  // Returns the conserved quantity (norm^2 or trace) for drift control.
  std::function<double(const Mat&)> invariant;
  IntegratorOptions opts;
  double max_step = 0.0;
};

double error_norm(const Mat& err, const Mat& y0, const Mat& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

struct RunStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Integrates y from t0 to each grid point, calling `record` at every one.
void integrate(const Stepper& s, Mat y, const std::vector<double>& grid, const std::vector<double>& breakpoints,
               const std::function<void(std::size_t, const Mat&)>& record, RunStats& stats) {
  const double t0 = grid.front();
  std::vector<double> stops;
  stops.reserve(grid.size() + breakpoints.size());
  for (double b : breakpoints) {
    if (b > t0 && b < grid.back()) stops.push_back(b);
  }
  stops.insert(stops.end(), grid.begin() + 1, grid.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  // Each step may spend a share of the drift budget proportional to its length,
  // so the total drift over the run stays within norm_tolerance.
  const double span = grid.back() - t0;
  double inv = s.invariant(y);
  record(0, y);
  std::size_t next_grid = 1;

  Mat k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1, tmp = k1, y1 = k1, err = k1;
  double t = t0;
  double h = std::min(s.max_step, 1e-12);
  s.f(t, y, k1);
  {
    const double fn = k1.cwiseAbs().maxCoeff();
    if (fn > 0.0) h = std::min(s.max_step, 0.01 * std::max(y.cwiseAbs().maxCoeff(), 1e-3) / fn);
  }
  bool fsal_valid = true;

  for (const double stop : stops) {
    while (t < stop) {
      if (stats.steps + stats.rejected > s.opts.max_steps) {
        throw StiffnessError(fmt::format("step budget of {} exhausted at t = {:.6g} s", s.opts.max_steps, t));
      }
      bool last = false;
      double hs = std::min(h, s.max_step);
      if (t + hs >= stop || stop - (t + hs) < 1e-3 * hs) {
        hs = stop - t;
        last = true;
      }
      if (!fsal_valid) {
        s.f(t, y, k1);
        fsal_valid = true;
      }
      tmp = y + hs * (a21 * k1);
      s.f(t + c2 * hs, tmp, k2);
      tmp = y + hs * (a31 * k1 + a32 * k2);
      s.f(t + c3 * hs, tmp, k3);
      tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      s.f(t + c4 * hs, tmp, k4);
      tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      s.f(t + c5 * hs, tmp, k5);
      tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      s.f(t + hs, tmp, k6);
      y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      s.f(t + hs, y1, k7);
      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double en = error_norm(err, y, y1, s.opts.atol, s.opts.rtol);
      const double inv1 = s.invariant(y1);
      const bool drift_bad = std::abs(inv1 - inv) > s.opts.norm_tolerance * hs / span;
      if (!std::isfinite(en)) en = 1e10;

      if (en <= 1.0 && !drift_bad) {
        t = last ? stop : t + hs;
        y = y1;
        inv = inv1;
        k1 = k7;
        ++stats.steps;
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // Keep the proposal from the unclipped step when the clip shortened it.
        h = last ? std::max(h, hs * fac) : hs * fac;
      } else {
        ++stats.rejected;
        h = drift_bad && en <= 1.0 ? 0.5 * hs : hs * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
        if (h < s.opts.min_step) {
          throw StiffnessError(fmt::format(
              "step size underflow ({:.3g} s) at t = {:.6g} s; the carrier may be under-resolved", h, t));
        }
      }
    }
    while (next_grid < grid.size() && grid[next_grid] <= t) {
      record(next_grid, y);
      ++next_grid;
    }
  }
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("time grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("time grid must be strictly increasing");
  }
}

double default_max_step(const TimeDependentHamiltonian& h, const std::vector<double>& grid,
                        const IntegratorOptions& opts) {
  if (opts.max_step > 0.0) return opts.max_step;
  double fmax = h.max_frequency_hz();
  if (h.frame == Frame::lab) {
    // Static energies set the fastest lab-frame phase rotation.
    for (const auto& term : h.terms) {
      if (term.freq_hz != 0.0 || term.envelope) continue;
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (term.op + term.op.adjoint()),
                                                                    Eigen::EigenvaluesOnly).eigenvalues();
      fmax = std::max(fmax, ev.maxCoeff() - ev.minCoeff());
    }
  }
  const double span = grid.back() - grid.front();
  double step = span > 0.0 ? span : 1.0;
  if (fmax > 0.0) step = std::min(step, 1.0 / (opts.steps_per_period * fmax));
  return step;
}

SimulationResult make_result(const TimeDependentHamiltonian& h, const std::vector<double>& grid) {
  SimulationResult r;
  r.times = grid;
  r.populations.resize(grid.size());
  for (int i = 0; i < h.space.dim(); ++i) r.basis_labels.push_back(h.space.label(i));
  return r;
}

}  // namespace

SimulationResult evolve_schrodinger(const TimeDependentHamiltonian& h, const Eigen::VectorXcd& psi0,
                                    const std::vector<double>& grid, const IntegratorOptions& opts,
                                    bool keep_states) {
  check_grid(grid);
  if (psi0.size() != h.space.dim()) throw DimensionMismatchError("initial state does not match the Hamiltonian");
  if (std::abs(psi0.squaredNorm() - 1.0) > opts.norm_tolerance) throw InvalidArgument("initial state must be normalized");

  Stepper s;
  s.opts = opts;
  s.max_step = default_max_step(h, grid, opts);
  Mat hbuf(h.space.dim(), h.space.dim());
  s.f = [&](double t, const Mat& y, Mat& dy) {
    hbuf.setZero();
    h.accumulate(t, hbuf);
    dy.noalias() = cplx(0.0, -units::two_pi) * (hbuf * y);
  };
  s.invariant = [](const Mat& y) { return y.squaredNorm(); };

  SimulationResult r = make_result(h, grid);
  if (keep_states) r.states.resize(grid.size());
  RunStats stats;
  integrate(s, psi0, grid, h.breakpoints,
            [&](std::size_t k, const Mat& y) {
              r.populations[k] = y.col(0).cwiseAbs2();
              r.max_norm_drift = std::max(r.max_norm_drift, std::abs(y.squaredNorm() - 1.0));
              if (keep_states) r.states[k] = y;
            },
            stats);
  r.steps = stats.steps;
  r.rejected_steps = stats.rejected;
  return r;
}

SimulationResult evolve_lindblad(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                 const std::vector<CollapseOperator>& collapse,
                                 const std::vector<double>& grid, const IntegratorOptions& opts,
                                 bool keep_states) {
  check_grid(grid);
  const int dim = h.space.dim();
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw DimensionMismatchError("initial density matrix does not match the Hamiltonian");
  }
  if (std::abs(rho0.trace().real() - 1.0) > opts.norm_tolerance) throw InvalidArgument("initial density matrix must have unit trace");
  {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (rho0 + rho0.adjoint()),
                                                                  Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.minCoeff() < -1e-10) throw InvalidArgument("initial density matrix is not positive semidefinite");
  }
  for (const auto& c : collapse) {
    if (c.op.rows() != dim || c.op.cols() != dim) throw DimensionMismatchError("collapse operator has wrong size");
  }

  Mat anti = Mat::Zero(dim, dim);
  for (const auto& c : collapse) anti += c.op.adjoint() * c.op;

  Stepper s;
  s.opts = opts;
  s.max_step = default_max_step(h, grid, opts);
  Mat hbuf(dim, dim);
  Mat heff(dim, dim);
  s.f = [&](double t, const Mat& rho, Mat& drho) {
    hbuf.setZero();
    h.accumulate(t, hbuf);
    // -i 2 pi (H rho - rho H) - 1/2 {L^dag L, rho} + sum L rho L^dag
    heff = cplx(0.0, -units::two_pi) * hbuf - 0.5 * anti;
    drho.noalias() = heff * rho;
    drho.noalias() += rho * heff.adjoint();
    for (const auto& c : collapse) drho.noalias() += c.op * rho * c.op.adjoint();
  };
  s.invariant = [](const Mat& y) { return y.trace().real(); };

  SimulationResult r = make_result(h, grid);
  if (keep_states) r.states.resize(grid.size());
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  RunStats stats;
  integrate(s, rho0, grid, h.breakpoints,
            [&](std::size_t k, const Mat& rho) {
              r.populations[k] = rho.diagonal().real();
              r.max_trace_drift = std::max(r.max_trace_drift, std::abs(rho.trace().real() - 1.0));
              const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Mat>(
                  0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
              r.min_eigenvalue = std::min(r.min_eigenvalue, ev.minCoeff());
              if (ev.minCoeff() < -1e-8) {
                throw PositivityError(fmt::format("density matrix eigenvalue {:.3g} at t = {:.6g} s",
                                                  ev.minCoeff(), grid[k]));
              }
              if (keep_states) r.states[k] = rho;
            },
            stats);
  r.steps = stats.steps;
  r.rejected_steps = stats.rejected;
  return r;
}

SimulationResult evolve_lindblad(const TimeDependentHamiltonian& h, const Eigen::MatrixXcd& rho0,
                                 const DissipationSpec& dissipation, const std::vector<double>& grid,
                                 const IntegratorOptions& opts, bool keep_states) {
  return evolve_lindblad(h, rho0, dissipation.collapse_operators(h.space), grid, opts, keep_states);
}

}  // namespace zzkit::dynamics

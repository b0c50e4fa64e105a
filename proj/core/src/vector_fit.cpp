#include "zzkit/vector_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "zzkit/errors.hpp"

namespace zzkit::circuit {

using cplx = std::complex<double>;

std::complex<double> RationalFit::evaluate(double omega) const {
  const cplx s(0.0, omega);
  cplx acc(direct_term, 0.0);
  for (std::size_t k = 0; k < poles.size(); ++k) acc += residues[k] / (s - poles[k]);
  return acc;
}

namespace {

// Poles are kept with one representative per conjugate pair (Im > 0) plus
// any real poles. The real-valued basis for a pair a is
//   phi1 = 1/(s-a) + 1/(s-conj a),  phi2 = i/(s-a) - i/(s-conj a),
// so coefficients (c1, c2) map to the residue c1 + i c2 at a.
struct PoleSet {
  std::vector<cplx> pairs;
  std::vector<double> reals;

  int basis_size() const { return static_cast<int>(2 * pairs.size() + reals.size()); }
};

void fill_basis(const PoleSet& p, cplx s, Eigen::Ref<Eigen::VectorXcd> row) {
  int col = 0;
  for (const cplx a : p.pairs) {
    const cplx t1 = 1.0 / (s - a);
    const cplx t2 = 1.0 / (s - std::conj(a));
    row(col++) = t1 + t2;
    row(col++) = cplx(0.0, 1.0) * (t1 - t2);
  }
  for (const double a : p.reals) row(col++) = 1.0 / (s - a);
}

// Column-scaled least squares with a rank check.
Eigen::VectorXd solve_ls(Eigen::MatrixXd a, const Eigen::VectorXd& b, double rank_tol) {
  Eigen::VectorXd scale(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double n = a.col(j).norm();
    scale(j) = n > 0.0 ? 1.0 / n : 1.0;
    a.col(j) *= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(rank_tol);
  if (qr.rank() < a.cols()) {
    throw IllConditionedError(fmt::format("vector fit least-squares system is rank deficient ({} of {})",
                                          qr.rank(), a.cols()));
  }
  Eigen::VectorXd x = qr.solve(b);
  return x.cwiseProduct(scale);
}

std::vector<double> weights_for(const std::vector<FrequencySample>& samples, bool inverse_mag) {
  std::vector<double> w(samples.size(), 1.0);
  if (!inverse_mag) return w;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double m = std::abs(samples[k].value);
    w[k] = m > 0.0 ? 1.0 / m : 1.0;
  }
  return w;
}

// One pole-relocation step. Returns the zeros of sigma(s) as the new poles.
PoleSet relocate(const PoleSet& p, const std::vector<cplx>& s, const std::vector<cplx>& f,
                 const std::vector<double>& w, double rank_tol) {
  const int n = p.basis_size();
  const auto k_count = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(2 * k_count, 2 * n + 1);
  Eigen::VectorXd b(2 * k_count);
  Eigen::VectorXcd phi(n);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    fill_basis(p, s[k], phi);
    const double wk = w[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) {
      const cplx lhs = wk * phi(j);
      const cplx rhs = -wk * f[k] * phi(j);
      a(2 * k, j) = lhs.real();
      a(2 * k + 1, j) = lhs.imag();
      a(2 * k, n + 1 + j) = rhs.real();
      a(2 * k + 1, n + 1 + j) = rhs.imag();
    }
    a(2 * k, n) = wk;
    a(2 * k + 1, n) = 0.0;
    b(2 * k) = wk * f[k].real();
    b(2 * k + 1) = wk * f[k].imag();
  }
  const Eigen::VectorXd x = solve_ls(std::move(a), b, rank_tol);
  const Eigen::VectorXd ctilde = x.tail(n);

  Eigen::MatrixXd amat = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd bvec = Eigen::VectorXd::Zero(n);
  int col = 0;
  for (const cplx pole : p.pairs) {
    amat(col, col) = pole.real();
    amat(col, col + 1) = pole.imag();
    amat(col + 1, col) = -pole.imag();
    amat(col + 1, col + 1) = pole.real();
    bvec(col) = 2.0;
    col += 2;
  }
  for (const double pole : p.reals) {
    amat(col, col) = pole;
    bvec(col) = 1.0;
    ++col;
  }
  const Eigen::MatrixXd h = amat - bvec * ctilde.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(h, false);
  if (es.info() != Eigen::Success) throw FitDivergedError("pole relocation eigensolver failed");

  PoleSet out;
  const Eigen::VectorXcd zeros = es.eigenvalues();
  const double scale_ref = std::max(1.0, zeros.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < zeros.size(); ++i) {
    cplx z = zeros(i);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw FitDivergedError("pole relocation produced non-finite poles");
    }
    if (z.real() > 0.0) z = cplx(-z.real(), z.imag());
    if (std::abs(z.imag()) <= 1e-12 * scale_ref) {
      out.reals.push_back(z.real());
    } else if (z.imag() > 0.0) {
      out.pairs.push_back(z);
    }
  }
  if (out.basis_size() != n) {
    throw FitDivergedError("pole relocation broke conjugate-pair structure");
  }
  return out;
}

struct ResidueFit {
  Eigen::VectorXd coeffs;
  double direct = 0.0;
  double error = std::numeric_limits<double>::infinity();
};

ResidueFit fit_residues(const PoleSet& p, const std::vector<cplx>& s, const std::vector<cplx>& f,
                        const std::vector<double>& w, double rank_tol) {
  const int n = p.basis_size();
  const auto k_count = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(2 * k_count, n + 1);
  Eigen::VectorXd b(2 * k_count);
  Eigen::VectorXcd phi(n);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    fill_basis(p, s[k], phi);
    const double wk = w[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) {
      a(2 * k, j) = wk * phi(j).real();
      a(2 * k + 1, j) = wk * phi(j).imag();
    }
    a(2 * k, n) = wk;
    a(2 * k + 1, n) = 0.0;
    b(2 * k) = wk * f[k].real();
    b(2 * k + 1) = wk * f[k].imag();
  }
  const Eigen::VectorXd x = solve_ls(std::move(a), b, rank_tol);
  ResidueFit out;
  out.coeffs = x.head(n);
  out.direct = x(n);

  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    fill_basis(p, s[k], phi);
    cplx model(out.direct, 0.0);
    for (int j = 0; j < n; ++j) model += out.coeffs(j) * phi(j);
    num += std::norm(f[k] - model);
    den += std::norm(f[k]);
  }
  out.error = std::sqrt(num / den);
  return out;
}

RationalFit to_rational(const PoleSet& p, const ResidueFit& r, double scale) {
  RationalFit fit;
  int col = 0;
  for (const cplx a : p.pairs) {
    const cplx res(r.coeffs(col), r.coeffs(col + 1));
    col += 2;
    fit.poles.push_back(a * scale);
    fit.residues.push_back(res * scale);
    fit.poles.push_back(std::conj(a) * scale);
    fit.residues.push_back(std::conj(res) * scale);
  }
  for (const double a : p.reals) {
    fit.poles.emplace_back(a * scale, 0.0);
    fit.residues.emplace_back(r.coeffs(col++) * scale, 0.0);
  }
  fit.direct_term = r.direct;
  fit.fit_error = r.error;
  return fit;
}

}  // namespace

RationalFit vector_fit(const std::vector<FrequencySample>& samples, int n_poles,
                       const VectorFitOptions& opts) {
  if (n_poles < 1) throw InvalidArgument("vector_fit needs at least one pole");
  if (samples.size() < 4 * static_cast<std::size_t>(n_poles)) {
    throw InvalidArgument(fmt::format("vector_fit needs >= {} samples for {} poles, got {}",
                                      4 * n_poles, n_poles, samples.size()));
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(samples[k].omega > 0.0)) throw InvalidArgument("sample frequencies must be positive");
    if (k > 0 && !(samples[k].omega > samples[k - 1].omega)) {
      throw InvalidArgument("sample frequencies must be strictly increasing");
    }
    if (!std::isfinite(samples[k].value.real()) || !std::isfinite(samples[k].value.imag())) {
      throw InvalidArgument("sample values must be finite");
    }
  }

  const double w_max = samples.back().omega;
  const double w_min = samples.front().omega / w_max;
  std::vector<cplx> s(samples.size());
  std::vector<cplx> f(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    s[k] = cplx(0.0, samples[k].omega / w_max);
    f[k] = samples[k].value;
  }
  const std::vector<double> w = weights_for(samples, opts.inverse_magnitude_weight);

  PoleSet poles;
  const int n_pairs = n_poles / 2;
  for (int i = 0; i < n_pairs; ++i) {
    const double beta =
        n_pairs == 1 ? 0.5 * (w_min + 1.0) : w_min + (1.0 - w_min) * i / (n_pairs - 1.0);
    poles.pairs.emplace_back(-beta / 100.0, beta);
  }
  if (n_poles % 2 == 1) poles.reals.push_back(-0.5 * (w_min + 1.0));

  ResidueFit best_r = fit_residues(poles, s, f, w, opts.rank_tol);
  PoleSet best_p = poles;
  double prev = best_r.error;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    poles = relocate(poles, s, f, w, opts.rank_tol);
    const ResidueFit r = fit_residues(poles, s, f, w, opts.rank_tol);
    if (!std::isfinite(r.error)) throw FitDivergedError("vector fit residual is not finite");
    if (r.error < best_r.error) {
      best_r = r;
      best_p = poles;
    }
    if (std::abs(prev - r.error) <= opts.convergence_tol * std::max(prev, 1e-300) ||
        r.error < 1e-14) {
      converged = true;
      ++it;
      break;
    }
    prev = r.error;
  }
  if (!converged && best_r.error > opts.divergence_threshold) {
    throw FitDivergedError(fmt::format("vector fit did not converge in {} rounds (error {:.3g})",
                                       opts.max_iterations, best_r.error));
  }
  RationalFit fit = to_rational(best_p, best_r, w_max);
  fit.iterations = it;
  return fit;
}

}  // namespace zzkit::circuit

#include "zzkit/fitting.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "zzkit/errors.hpp"
#include "zzkit/units.hpp"

namespace zzkit::dynamics {

namespace {

// Least-squares functor for Eigen's LevenbergMarquardt with analytic Jacobian.
template <typename Model>
struct Residuals : Eigen::DenseFunctor<double> {
  const std::vector<double>& x;
  const std::vector<double>& y;
  Model model;

  Residuals(const std::vector<double>& xs, const std::vector<double>& ys, Model m)
      : Eigen::DenseFunctor<double>(Model::n_params, static_cast<int>(xs.size())), x(xs), y(ys), model(m) {}

  int operator()(const InputType& p, ValueType& fvec) const {
    for (std::size_t i = 0; i < x.size(); ++i) fvec(static_cast<Eigen::Index>(i)) = model.value(p, x[i]) - y[i];
    return 0;
  }
  int df(const InputType& p, JacobianType& jac) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      model.gradient(p, x[i], jac.row(static_cast<Eigen::Index>(i)));
    }
    return 0;
  }
};

struct ExpModel {
  static constexpr int n_params = 3;  // a, rate, c
  double value(const Eigen::VectorXd& p, double x) const { return p(0) * std::exp(-p(1) * x) + p(2); }
  template <typename Row>
  void gradient(const Eigen::VectorXd& p, double x, Row row) const {
    const double e = std::exp(-p(1) * x);
    row(0) = e;
    row(1) = -p(0) * x * e;
    row(2) = 1.0;
  }
};

struct CosModel {
  static constexpr int n_params = 4;  // offset, a (cos), b (sin), frequency
  double value(const Eigen::VectorXd& p, double x) const {
    const double w = units::two_pi * p(3) * x;
    return p(0) + p(1) * std::cos(w) + p(2) * std::sin(w);
  }
  template <typename Row>
  void gradient(const Eigen::VectorXd& p, double x, Row row) const {
    const double w = units::two_pi * p(3) * x;
    row(0) = 1.0;
    row(1) = std::cos(w);
    row(2) = std::sin(w);
    row(3) = units::two_pi * x * (-p(1) * std::sin(w) + p(2) * std::cos(w));
  }
};

template <typename Model>
double run_lm(const std::vector<double>& x, const std::vector<double>& y, Eigen::VectorXd& p, Model m) {
  Residuals<Model> functor(x, y, m);
  Eigen::LevenbergMarquardt<Residuals<Model>> lm(functor);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(p);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !p.allFinite()) {
    throw FitError("Levenberg-Marquardt failed");
  }
  Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
  functor(p, r);
  return std::sqrt(r.squaredNorm() / static_cast<double>(x.size()));
}

void check_xy(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
  if (x.size() != y.size()) throw InvalidArgument("x and y differ in length");
  if (x.size() < min_points) throw FitError(fmt::format("need at least {} points to fit", min_points));
}

}  // namespace

ExponentialFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y) {
  check_xy(x, y, 4);
  // Guess: offset from the tail, rate from a log-linear fit of the rest.
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double span = *xmax_it - *xmin_it;
  if (!(span > 0.0)) throw FitError("x values have no spread");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  const double y_first = y[order.front()];
  const double y_last = y[order.back()];
  const double c0 = y_last;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i : order) {
    const double d = (y[i] - c0) * (y_first > c0 ? 1.0 : -1.0);
    if (d <= 1e-12 * std::abs(y_first - c0)) continue;
    const double ly = std::log(d);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++n;
  }
  double rate = 3.0 / span;
  if (n >= 2) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (slope < 0.0 && std::isfinite(slope)) rate = -slope;
  }
  Eigen::VectorXd p(3);
  p << (y_first - c0) * std::exp(rate * *xmin_it), rate, c0;
  const double rms = run_lm(x, y, p, ExpModel{});
  if (!(p(1) > 0.0)) throw FitError("exponential fit returned a non-decaying rate");
  ExponentialFit out;
  out.amplitude = p(0);
  out.tau = 1.0 / p(1);
  out.offset = p(2);
  out.rms_residual = rms;
  return out;
}

CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y, double min_contrast) {
  check_xy(x, y, 6);
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double contrast = *ymax - *ymin;
  if (contrast < min_contrast) {
    throw FitError(fmt::format("fringe contrast {:.3g} is below {:.3g}", contrast, min_contrast));
  }
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double span = *xmax_it - *xmin_it;
  double dt_min = span;
  for (std::size_t i = 1; i < x.size(); ++i) dt_min = std::min(dt_min, std::abs(x[i] - x[i - 1]));
  if (!(span > 0.0) || !(dt_min > 0.0)) throw FitError("x values must be distinct");

  // Periodogram on a grid four times finer than 1/span, up to Nyquist.
  const double df = 0.25 / span;
  const double f_nyq = 0.5 / dt_min;
  double best_f = df;
  double best_pow = -1.0;
  for (double f = df; f <= f_nyq; f += df) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = units::two_pi * f * x[i];
      c += (y[i] - mean) * std::cos(w);
      s += (y[i] - mean) * std::sin(w);
    }
    const double pw = c * c + s * s;
    if (pw > best_pow) {
      best_pow = pw;
      best_f = f;
    }
  }
  // Linear least squares for offset and quadratures at the guessed frequency.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = units::two_pi * best_f * x[i];
    a.row(static_cast<Eigen::Index>(i)) << 1.0, std::cos(w), std::sin(w);
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::Vector3d lin = a.colPivHouseholderQr().solve(b);
  Eigen::VectorXd p(4);
  p << lin(0), lin(1), lin(2), best_f;
  const double rms = run_lm(x, y, p, CosModel{});

  CosineFit out;
  out.offset = p(0);
  out.amplitude = std::hypot(p(1), p(2));
  out.phase = std::atan2(-p(2), p(1));
  out.frequency = p(3);
  if (out.frequency < 0.0) {
    out.frequency = -out.frequency;
    out.phase = -out.phase;
  }
  out.rms_residual = rms;
  return out;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman needs two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace zzkit::dynamics

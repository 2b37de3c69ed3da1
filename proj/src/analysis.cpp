#include "cuspke/analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cuspke/errors.hpp"

namespace cuspke::analysis {

namespace {

using boost::math::quadrature::gauss_kronrod;

void check_ratio_args(double c, double k, double x) {
  if (!(c > 0.0)) throw ConfigError("tail_ratio: c must be positive");
  if (!(k > -1.5)) throw ConfigError("tail_ratio: k must exceed -3/2");
  if (!(x > 0.0)) throw ConfigError("tail_ratio: x must be positive");
}

}  // namespace

DecayFit decay_fit(const std::vector<double>& xs, const std::vector<double>& values, double x_lo,
                   double x_hi, std::optional<double> fixed_delta) {
  if (xs.size() != values.size()) throw ConfigError("decay_fit: length mismatch");
  if (!(x_lo > 0.0 && x_lo < x_hi)) throw ConfigError("decay_fit: empty window");
  std::vector<int> idx;
  int sign = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < x_lo || xs[i] > x_hi) continue;
    const double v = values[i];
    if (!std::isfinite(v) || v == 0.0)
      throw NumericalError("decay_fit: zero or non-finite value in the window");
    const int sg = v > 0 ? 1 : -1;
    if (sign != 0 && sg != sign) throw NumericalError("decay_fit: sign change in the window");
    sign = sg;
    idx.push_back(static_cast<int>(i));
  }
  const int m = static_cast<int>(idx.size());
  if (m < 8) throw NumericalError("decay_fit: fewer than 8 nodes in the window");

  const int cols = fixed_delta ? 2 : 3;
  Eigen::MatrixXd a(m, cols);
  Eigen::VectorXd y(m);
  for (int r = 0; r < m; ++r) {
    const double x = xs[idx[r]];
    a(r, 0) = 1.0;
    a(r, 1) = std::log(x);
    y(r) = std::log(std::abs(values[idx[r]]));
    if (fixed_delta)
      y(r) += *fixed_delta / std::sqrt(x);
    else
      a(r, 2) = -1.0 / std::sqrt(x);
  }
  // Column scaling keeps the normal matrix well conditioned.
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  const Eigen::VectorXd sol =
      (a * scale.cwiseInverse().asDiagonal()).colPivHouseholderQr().solve(y).cwiseQuotient(scale);
  DecayFit fit;
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  fit.nodes = m;
  fit.amplitude = sign * std::exp(sol(0));
  fit.p = sol(1);
  fit.delta = fixed_delta ? *fixed_delta : sol(2);
  fit.rms = std::sqrt((a * sol - y).squaredNorm() / m);
  return fit;
}

double window_x(double lambda, double s_bessel) {
  if (!(lambda > 0.0) || !(s_bessel > 0.0)) throw ConfigError("window_x: arguments must be positive");
  return 4.0 * lambda / (s_bessel * s_bessel);
}

double tail_ratio_r1(double c, double k, double x) {
  check_ratio_args(c, k, x);
  // t = x tau, u = C (tau^{-1/2} - 1): R1 = 2 int_0^inf e^{-u} (1 + u/C)^{-(2k+3)} du
  const double C = c / std::sqrt(x);
  auto f = [&](double u) { return std::exp(-u - (2.0 * k + 3.0) * std::log1p(u / C)); };
  double err = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13, &err);
  if (!(err <= 1e-10)) throw NumericalError("tail_ratio_r1: quadrature did not converge");
  return 2.0 * v;
}

double tail_ratio_r2(double c, double k, double x, double x0) {
  check_ratio_args(c, k, x);
  if (!(x0 > x)) throw ConfigError("tail_ratio_r2: need x < x0");
  // u = C (1 - tau^{-1/2}): R2 = 2 int_0^U e^{-u} (1 - u/C)^{-(2k+3)} du
  const double C = c / std::sqrt(x);
  const double U = C * (1.0 - std::sqrt(x / x0));
  auto f = [&](double u) { return std::exp(-u - (2.0 * k + 3.0) * std::log1p(-u / C)); };
  double err = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(f, 0.0, U, 15, 1e-13, &err);
  if (!(err <= 1e-10 * std::max(1.0, v))) throw NumericalError("tail_ratio_r2: quadrature did not converge");
  return 2.0 * v;
}

double tail_ratio_admissible_x0(double c, double k, double eps) {
  if (!(eps > 0.0)) throw ConfigError("tail_ratio: eps must be positive");
  check_ratio_args(c, k, 1.0);
  const double r = eps / (2.0 + eps) * c / (2.0 * k + 3.0);
  return r * r;
}

TailRatioReport tail_ratio_check(double c, double k, double x_max, double eps, int samples,
                            double x_min) {
  check_ratio_args(c, k, x_max);
  if (!(x_min > 0.0 && x_min < x_max)) throw ConfigError("tail_ratio: need 0 < x_min < x_max");
  if (samples < 2) throw ConfigError("tail_ratio: need at least 2 samples");
  TailRatioReport rep;
  rep.c = c;
  rep.k = k;
  rep.eps = eps;
  rep.x0_admissible = tail_ratio_admissible_x0(c, k, eps);
  auto log_grid = [&](double lo, double hi, int i) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (samples - 1));
  };
  for (int i = 0; i < samples; ++i) {
    const double x = log_grid(x_min, x_max, i);
    const double r = tail_ratio_r1(c, k, x);
    rep.r1.push_back({x, r});
    rep.sup_r1 = std::max(rep.sup_r1, r);
  }
  rep.r1_limit = rep.r1.front().ratio;
  const double x2_hi = std::min(x_max, rep.x0_admissible);
  if (x_min < x2_hi) {
    for (int i = 0; i < samples; ++i) {
      const double x = log_grid(x_min, x2_hi, i);
      if (!(x < rep.x0_admissible)) continue;
      const double r = tail_ratio_r2(c, k, x, rep.x0_admissible);
      rep.r2.push_back({x, r});
      rep.sup_r2 = std::max(rep.sup_r2, r);
    }
  }
  rep.r1_below_two = rep.sup_r1 < 2.0;
  rep.r1_limit_ok = std::abs(rep.r1_limit - 2.0) <= 0.02;
  rep.r2_below = rep.sup_r2 < 2.0 + eps;
  return rep;
}

double log_envelope(int n, double lambda1, double x) {
  return (-0.5 * n + 0.25) * std::log(x) - 2.0 * std::sqrt(lambda1 / x);
}

EnvelopeReport envelope_check(const std::vector<double>& xs, const std::vector<double>& sup_values,
                              int n, double lambda1, double C, double x_star, double x0, double N) {
  if (xs.size() != sup_values.size()) throw ConfigError("envelope_check: length mismatch");
  if (!(x_star > 0.0 && x_star <= x0)) throw ConfigError("envelope_check: need 0 < x_star <= x0");
  if (!(N > 0.0 && N < 1.0)) throw ConfigError("envelope_check: N must lie in (0,1)");
  if (!(C > 0.0)) throw ConfigError("envelope_check: C must be positive");
  EnvelopeReport rep;
  rep.min_log_margin = std::numeric_limits<double>::infinity();
  const double log_c = std::log(C);
  const double h_star = log_envelope(n, lambda1, x_star);
  for (size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (x > x0 * (1 + 1e-14)) continue;
    const double bound = x >= x_star ? log_c + log_envelope(n, lambda1, x)
                                     : log_c + h_star + N * std::log(x / x_star);
    const double v = std::abs(sup_values[i]);
    const double margin = v == 0.0 ? std::numeric_limits<double>::infinity() : bound - std::log(v);
    rep.min_log_margin = std::min(rep.min_log_margin, margin);
    if (!(margin >= 0.0) && rep.pass) {
      rep.pass = false;
      rep.first_violation = static_cast<int>(i);
    }
  }
  return rep;
}

double barrier_sign(int n, double p) { return (p - 1.0) * (p + n + 1.0) / (n + 1.0); }

}  // namespace cuspke::analysis

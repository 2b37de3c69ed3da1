#include "cuspke/radial.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "cuspke/errors.hpp"

namespace cuspke::radial {

namespace {

using State = std::array<double, 1>;

double calabi_rhs(int n, double a, double b, double psi) {
  return std::pow((n + 1.0) * std::max(0.0, std::exp(psi + a) + b), 1.0 / (n + 1));
}

}  // namespace

double CalabiTrajectory::first_integral(int i) const {
  return std::pow(psi_prime[i], n + 1) / (n + 1) - std::exp(psi[i] + a) - b;
}

double CalabiTrajectory::max_drift() const {
  double worst = 0.0;
  const double ref = first_integral(0);
  for (size_t i = 0; i < psi.size(); ++i)
    worst = std::max(worst, std::abs(first_integral(static_cast<int>(i)) - ref));
  return worst;
}

double calabi_barrier(int n, double a, double b, double t0, double psi0) {
  if (!(b < 0.0)) throw ConfigError("calabi_barrier: only defined for b < 0");
  const double w0 = std::exp(psi0 + a) + b;
  if (!(w0 > 0.0)) throw ConfigError("calabi_barrier: e^{psi0+a} + b must be positive");
  // w = e^{u+a} + b = y^{(n+1)/n} removes the endpoint singularity.
  const double e = (n + 1.0) / n;
  const double y0 = std::pow(w0, 1.0 / e);
  auto f = [&](double y) { return e / (std::pow(y, e) - b); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, y0, 15, 1e-14);
  return t0 - std::pow(n + 1.0, -1.0 / (n + 1)) * integral;
}

CalabiTrajectory integrate_calabi(int n, double a, double b, double t0, double psi0, double t_end,
                                  double tol, int samples) {
  namespace odeint = boost::numeric::odeint;
  if (n < 2) throw ConfigError("integrate_calabi: n must be at least 2");
  if (!(t_end < t0)) throw ConfigError("integrate_calabi: t_end must lie below t0");
  if (samples < 2) throw ConfigError("integrate_calabi: need at least 2 samples");
  if (!(tol > 0.0)) throw ConfigError("integrate_calabi: tol must be positive");
  if (!(std::exp(psi0 + a) + b > 0.0))
    throw ConfigError("integrate_calabi: e^{psi(t0)+a} + b must be positive");

  double barrier = -std::numeric_limits<double>::infinity();
  if (b < 0.0) barrier = calabi_barrier(n, a, b, t0, psi0);

  CalabiTrajectory tr;
  tr.n = n;
  tr.a = a;
  tr.b = b;
  std::vector<double> times;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t_end - t0) * i / (samples - 1);
    if (t <= barrier) break;
    times.push_back(t);
  }
  auto system = [&](const State& y, State& dy, double) { dy[0] = calabi_rhs(n, a, b, y[0]); };
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  State y{psi0};
  const double dt0 = -std::min(1e-3, 0.1 * std::abs(t_end - t0) / samples);
  odeint::integrate_times(stepper, system, y, times.begin(), times.end(), dt0,
                          [&](const State& s, double t) {
                            tr.t_nodes.push_back(t);
                            tr.psi.push_back(s[0]);
                            tr.psi_prime.push_back(calabi_rhs(n, a, b, s[0]));
                          });
  for (double p : tr.psi_prime)
    if (!(p > 0.0)) throw NumericalError("integrate_calabi: psi' lost positivity");
  if (b < 0.0 && t_end <= barrier) {
    const double reached = tr.t_nodes.empty() ? t0 : tr.t_nodes.back();
    throw CalabiBreakdown("integrate_calabi: b < 0 trajectory ends at t = " + std::to_string(barrier),
                          barrier, reached);
  }
  return tr;
}

double empirical_psi_prime_limit(int n, double b, double a) {
  // Nodes every 0.5 in t so that -20, -40 and -80 are hit exactly.
  const auto tr = integrate_calabi(n, a, b, 0.0, 0.0, -80.0, 1e-12, 161);
  auto at = [&](double t) {
    for (size_t i = 0; i < tr.t_nodes.size(); ++i)
      if (std::abs(tr.t_nodes[i] - t) < 1e-9) return tr.psi_prime[i];
    throw NumericalError("empirical_psi_prime_limit: sample missing");
  };
  const double p0 = at(-20.0), p1 = at(-40.0), p2 = at(-80.0);
  const double d1 = p1 - p0, d2 = p2 - p1;
  const double denom = d2 - d1;
  if (std::abs(denom) <= 1e-15 * std::abs(p2) || std::abs(d2) >= std::abs(d1)) return p2;
  return p2 - d2 * d2 / denom;
}

ConeAngle cone_angle(int n, double b) {
  if (!(b > 0.0)) throw ConfigError("cone_angle: b must be positive");
  const double c = std::pow((n + 1.0) * b, 1.0 / (n + 1));
  return {2.0 * std::numbers::pi * c, 2.0 * std::numbers::pi * empirical_psi_prime_limit(n, b)};
}

double radial_volume_ratio(int n, double x, double dpsi, double d2psi) {
  const double f1 = n + 1.0 + x * dpsi;
  const double f2 = n + 1.0 + x * (2.0 * dpsi + x * d2psi);
  if (!(f1 > 0.0) || !(f2 > 0.0))
    throw MetricDegenerate("radial_volume_ratio: degenerate factor at x = " + std::to_string(x));
  return std::pow(f1 / (n + 1.0), n - 1) * (f2 / (n + 1.0));
}

Profile radial_volume_ratio(int n, const RadialGrid& grid, const Profile& psi) {
  Profile d1, d2;
  grid.differentiate(psi, d1, d2);
  Profile out(psi.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = radial_volume_ratio(n, grid.x(i), d1[i], d2[i]);
  return out;
}

double PowerSeries::operator()(double x) const {
  double acc = 0.0;
  for (int k = K; k >= 1; --k) acc = (acc + coeffs[k - 1]) * x;
  return acc;
}

namespace {

using Poly = std::vector<double>;  // index = power, truncated at the size

// log(1 + y) - y for a series y without constant term. Uses (1 + y) L' = y'
// rather than summing powers of y, which cancels badly for large coefficients.
Poly q_of(const Poly& y) {
  Poly L(y.size(), 0.0);
  for (size_t k = 1; k < y.size(); ++k) {
    double acc = k * y[k];
    for (size_t j = 1; j < k; ++j) acc -= j * L[j] * y[k - j];
    L[k] = acc / k;
  }
  for (size_t k = 1; k < y.size(); ++k) L[k] -= y[k];
  return L;
}

// Right-hand side -(n+1)[(n-1) q(x psi') + q(x (x psi)'')] up to degree `deg`.
Poly formal_rhs(int n, const std::vector<double>& c, int deg) {
  Poly u(deg + 1, 0.0), v(deg + 1, 0.0);
  for (int k = 1; k <= deg && k <= static_cast<int>(c.size()); ++k) {
    u[k] = k * c[k - 1] / (n + 1.0);
    v[k] = k * (k + 1.0) * c[k - 1] / (n + 1.0);
  }
  const Poly qu = q_of(u), qv = q_of(v);
  Poly r(deg + 1);
  for (int k = 0; k <= deg; ++k) r[k] = -(n + 1.0) * ((n - 1.0) * qu[k] + qv[k]);
  return r;
}

}  // namespace

PowerSeries expand_formal(int n, double C1, int K) {
  if (n < 2) throw ConfigError("expand_formal: n must be at least 2");
  if (K < 1) throw ConfigError("expand_formal: K must be at least 1");
  PowerSeries s;
  s.n = n;
  s.K = K;
  s.coeffs.assign(K, 0.0);
  s.coeffs[0] = C1;
  for (int k = 2; k <= K; ++k) {
    // Order k on the right only involves C_1..C_{k-1}.
    const Poly r = formal_rhs(n, s.coeffs, k);
    s.coeffs[k - 1] = r[k] / ((k - 1.0) * (k + n + 1.0));
  }
  return s;
}

double tangent_cone_coefficient(int n, double c, int k) {
  if (k < 1) throw ConfigError("tangent_cone_coefficient: k must be at least 1");
  return (n + 1.0) * std::pow(-c, k) / k;
}

std::vector<double> series_residual(const PowerSeries& s, int degree) {
  std::vector<double> c(s.coeffs);
  c.resize(std::max<size_t>(c.size(), degree), 0.0);
  for (int k = s.K + 1; k <= degree; ++k) c[k - 1] = 0.0;
  const Poly r = formal_rhs(s.n, c, degree);
  std::vector<double> out(degree + 1, 0.0);
  for (int k = 1; k <= degree; ++k) {
    const double ck = k <= s.K ? s.coeffs[k - 1] : 0.0;
    out[k] = (k - 1.0) * (k + s.n + 1.0) * ck - r[k];
  }
  return out;
}

L0Result radial_rep_l0_detail(int n, const RadialGrid& grid, const Profile& g0, double u_x0) {
  const int N = grid.size();
  if (static_cast<int>(g0.size()) != N) throw ConfigError("radial_rep_l0: profile length mismatch");
  for (double v : g0)
    if (!std::isfinite(v)) throw NumericalError("radial_rep_l0: non-finite inhomogeneity");
  const double h = grid.step();

  // Power fit g0 ~ a x^p on the innermost nodes for the tail below x_{N-1}.
  L0Result res;
  const int m = std::min(8, N);
  bool zero = true, same_sign = true;
  for (int i = N - m; i < N; ++i) {
    if (g0[i] != 0.0) zero = false;
    if (g0[i] * g0[N - 1] <= 0.0) same_sign = false;
  }
  double p = 2.0;
  if (zero) {
    p = std::numeric_limits<double>::infinity();
  } else if (same_sign) {
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd y(m);
    for (int r = 0; r < m; ++r) {
      const int i = N - m + r;
      a(r, 0) = 1.0;
      a(r, 1) = std::log(grid.x(i));
      y(r) = std::log(std::abs(g0[i]));
    }
    p = a.colPivHouseholderQr().solve(y)(1);
    if (!(p > 1.0))
      throw NumericalError("radial_rep_l0: inhomogeneity decays like x^" + std::to_string(p) +
                           ", at least x^{1+eps} is needed");
  }
  res.tail_power = p;

  // Integrals in s with dt = -2 s^{-3} ds.
  const auto w1 = interval_integrals<double>(N, [&](int i) {
    const double s = grid.s(i);
    return 2.0 * std::pow(s, -2 * n - 3) * g0[i];
  });
  const auto w2 = interval_integrals<double>(N, [&](int i) { return 2.0 * grid.s(i) * g0[i]; });

  std::vector<double> inner(N), outer(N);  // int_0^x t^n g, int_x^{x0} t^{-2} g
  const double xl = grid.x(N - 1);
  inner[N - 1] = (zero ? 0.0 : g0[N - 1] * std::pow(xl, n + 1) / (n + 1.0 + p));
  for (int i = N - 2; i >= 0; --i) inner[i] = inner[i + 1] + h * w1[i];
  outer[0] = 0.0;
  for (int i = 1; i < N; ++i) outer[i] = outer[i - 1] + h * w2[i - 1];

  const double x0 = grid.x0();
  const double lin = u_x0 / x0 + std::pow(x0, -n - 2) / (n + 2.0) * inner[0];
  // Splitting int_x^{x0} = int_0^{x0} - int_0^x moves the full t^{-2} integral into the x term.
  const double below = zero ? 0.0 : g0[N - 1] / (xl * (p - 1.0));
  res.linear_coefficient = lin - (outer[N - 1] + below) / (n + 2.0);
  res.u.resize(N);
  for (int i = 0; i < N; ++i) {
    const double x = grid.x(i);
    res.u[i] = lin * x - std::pow(x, -n - 1) / (n + 2.0) * inner[i] - x / (n + 2.0) * outer[i];
  }
  res.u[0] = u_x0;
  return res;
}

Profile radial_rep_l0(int n, const RadialGrid& grid, const Profile& g0, double u_x0) {
  return radial_rep_l0_detail(n, grid, g0, u_x0).u;
}

Profile l0_residual(int n, const RadialGrid& grid, const Profile& u, const Profile& g) {
  Profile d1, d2;
  grid.differentiate(u, d1, d2);
  Profile r(u.size(), 0.0);
  for (int i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid.x(i);
    r[i] = x * x * d2[i] + (n + 1.0) * x * d1[i] - (n + 1.0) * u[i] - g[i];
  }
  return r;
}

}  // namespace cuspke::radial

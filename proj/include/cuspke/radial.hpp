#pragma once

#include <vector>

#include "cuspke/grid.hpp"

namespace cuspke::radial {

// Solution of the Calabi ODE in t = -sigma, sampled at decreasing t.
struct CalabiTrajectory {
  int n = 2;
  double a = 0.0, b = 0.0;
  std::vector<double> t_nodes;
  std::vector<double> psi;
  std::vector<double> psi_prime;

  // (psi')^{n+1}/(n+1) - e^{psi+a} - b at node i.
  double first_integral(int i) const;
  double max_drift() const;
};

// Integrates d psi/dt = ((n+1)(e^{psi+a} + b))^{1/(n+1)} from (t0, psi0) down to
// t_end < t0, recording `samples` equally spaced nodes. Throws CalabiBreakdown
// when b < 0 and the trajectory reaches its lower t-barrier.
CalabiTrajectory integrate_calabi(int n, double a, double b, double t0, double psi0, double t_end,
                                  double tol, int samples = 201);

// Barrier t* = t0 - (n+1)^{-1/(n+1)} int_{psi*}^{psi0} (e^{u+a}+b)^{-1/(n+1)} du for b < 0.
double calabi_barrier(int n, double a, double b, double t0, double psi0);

struct ConeAngle {
  double angle;            // 2 pi ((n+1) b)^{1/(n+1)}
  double empirical_angle;  // 2 pi times the extrapolated limit of psi'
};
ConeAngle cone_angle(int n, double b);
// Aitken extrapolation of psi' sampled at t = -20, -40, -80.
double empirical_psi_prime_limit(int n, double b, double a = 0.0);

// (n+1 + x psi')^{n-1} (n+1 + x (x psi)'') / (n+1)^n
double radial_volume_ratio(int n, double x, double dpsi, double d2psi);
Profile radial_volume_ratio(int n, const RadialGrid& grid, const Profile& psi);

struct PowerSeries {
  int n = 2;
  int K = 0;
  std::vector<double> coeffs;  // coeffs[k-1] = C_k, k = 1..K

  double coeff(int k) const { return coeffs[k - 1]; }
  double operator()(double x) const;
};

// Coefficients of the formal solution psi = sum C_k x^k of
// x^2 psi'' + (n+1) x psi' - (n+1) psi = -(n+1) [(n-1) q(x psi') + q(x (x psi)'')]
// with q(t) = log(1 + t/(n+1)) - t/(n+1).
PowerSeries expand_formal(int n, double C1, int K);
// Coefficient of x^k in -(n+1) log(1 + c x).
double tangent_cone_coefficient(int n, double c, int k);

// Residual of the series in the equation above, truncated at degree `degree`.
std::vector<double> series_residual(const PowerSeries& s, int degree);

struct L0Result {
  Profile u;
  double linear_coefficient = 0.0;  // bracketed coefficient of x
  double tail_power = 0.0;          // fitted decay power of g0 at the inner end
};
// u with x^2 u'' + (n+1) x u' - (n+1) u = g0 and u(x0) = u_x0 from the x, x^{-n-1}
// variation-of-parameters formula.
L0Result radial_rep_l0_detail(int n, const RadialGrid& grid, const Profile& g0, double u_x0);
Profile radial_rep_l0(int n, const RadialGrid& grid, const Profile& g0, double u_x0);

// x^2 u'' + (n+1) x u' - (n+1) u - g on the grid (endpoints set to 0).
Profile l0_residual(int n, const RadialGrid& grid, const Profile& u, const Profile& g);

}  // namespace cuspke::radial

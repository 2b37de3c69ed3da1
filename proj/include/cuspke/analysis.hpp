#pragma once

#include <optional>
#include <vector>

namespace cuspke::analysis {

// log|v| = log(amplitude) + p log x - delta / sqrt(x)
struct DecayFit {
  double x_lo = 0.0, x_hi = 0.0;
  double delta = 0.0;
  double p = 0.0;
  double amplitude = 0.0;
  double rms = 0.0;
  int nodes = 0;
};

// fixed_delta empty: fit delta too.
DecayFit decay_fit(const std::vector<double>& xs, const std::vector<double>& values,
                   double x_lo, double x_hi, std::optional<double> fixed_delta = std::nullopt);
// Window given by s_B = 2 sqrt(lambda) / sqrt(x).
double window_x(double lambda, double s_bessel);

struct TailRatioSample {
  double x;
  double ratio;
};
struct TailRatioReport {
  double c = 0.0, k = 0.0, eps = 0.0;
  std::vector<TailRatioSample> r1;
  std::vector<TailRatioSample> r2;
  double sup_r1 = 0.0;
  double r1_limit = 0.0;  // R1 at the smallest sampled x
  double sup_r2 = 0.0;
  double x0_admissible = 0.0;
  bool r1_below_two = false;
  bool r1_limit_ok = false;  // within 1% of 2
  bool r2_below = false;
  bool pass() const { return r1_below_two && r1_limit_ok && r2_below; }
};

// R1(x) = c int_0^x t^k e^{-c/sqrt t} dt / (x^{k+3/2} e^{-c/sqrt x})
double tail_ratio_r1(double c, double k, double x);
// R2(x) = c int_x^{x0} t^k e^{c/sqrt t} dt / (x^{k+3/2} e^{c/sqrt x})
double tail_ratio_r2(double c, double k, double x, double x0);
// Largest x0 for which R2 < 2 + eps is claimed.
double tail_ratio_admissible_x0(double c, double k, double eps);
TailRatioReport tail_ratio_check(double c, double k, double x_max, double eps, int samples = 60,
                            double x_min = 1e-12);

struct EnvelopeReport {
  bool pass = true;
  int first_violation = -1;
  double min_log_margin = 0.0;  // min over nodes of log(bound / |u|)
};
// log H(x) with H(x) = x^{-n/2+1/4} e^{-2 sqrt(lambda1/x)}.
double log_envelope(int n, double lambda1, double x);
// sup_values[i] = max over the torus of |u| at xs[i].
EnvelopeReport envelope_check(const std::vector<double>& xs, const std::vector<double>& sup_values,
                              int n, double lambda1, double C, double x_star, double x0, double N);

// Coefficient of x^p in L_h(x^p).
double barrier_sign(int n, double p);

}  // namespace cuspke::analysis

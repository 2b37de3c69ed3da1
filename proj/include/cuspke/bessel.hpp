#pragma once

#include "cuspke/model.hpp"

namespace cuspke::bessel {

// value = mantissa * e^{exponent}
struct ScaledBessel {
  double mantissa = 0.0;
  double exponent = 0.0;
  double value() const;
  double log_value() const;
};

// (e^{-s} I_alpha(s), s)
ScaledBessel bessel_i_scaled(int alpha, double s);
// (e^{s} K_alpha(s), -s)
ScaledBessel bessel_k_scaled(int alpha, double s);
// Derivatives through I' = (I_{a-1} + I_{a+1})/2 and K' = -(K_{a-1} + K_{a+1})/2,
// with the same exponent as the value.
ScaledBessel bessel_i_prime_scaled(int alpha, double s);
ScaledBessel bessel_k_prime_scaled(int alpha, double s);

// Argument above which both functions use the asymptotic series.
double switch_point(int alpha);

struct WronskianResiduals {
  double abel;  // |I K' - I' K + 1/s| * s
  double mode;  // |(H1 H2' - H1' H2) 2 t^{n+1} - 1| with n = alpha - 2
};
WronskianResiduals wronskian_residuals(int alpha, double s);

// H1 = x^{-n/2} I_{n+2}(2 sqrt(lambda/x)), H2 the same with K.
struct HPair {
  ScaledBessel h1;
  ScaledBessel h2;
  double lambda = 0.0;
  int n = 2;
  double x = 0.0;
};
HPair h_pair(int n, double lambda, double x);
HPair h_pair(const CuspModel& model, double lambda, double x);

namespace detail {
double i_series_scaled(int alpha, double s);
double i_asymptotic_scaled(int alpha, double s);
double k_series_scaled(int alpha, double s);
double k_integral_scaled(int alpha, double s);
double k_asymptotic_scaled(int alpha, double s);
// Smallest term of the asymptotic series relative to its leading term.
double asymptotic_truncation_bound(int alpha, double s);
}  // namespace detail

}  // namespace cuspke::bessel

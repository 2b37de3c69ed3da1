#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cuspke/bessel.hpp"

using namespace cuspke;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// Ascending series in 50 digits, scaled by e^{-s}.
double i_oracle(int a, double s) {
  cpp_bin_float_50 half = cpp_bin_float_50(s) / 2, q = half * half, term = 1, sum = 0;
  for (int j = 1; j <= a; ++j) term *= half / j;
  for (int k = 0; k < 400; ++k) {
    sum += term;
    term *= q / ((k + 1) * (k + 1 + a));
    if (term < sum * 1e-45) break;
  }
  return static_cast<double>(sum * exp(-cpp_bin_float_50(s)));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("I mantissa matches a 50-digit series") {
  for (int a : {3, 4, 5, 6, 7, 8})
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 17.0, 19.9, 20.1, 25.0, 30.0}) {
      CAPTURE(a);
      CAPTURE(s);
      CHECK(rel(bessel::bessel_i_scaled(a, s).mantissa, i_oracle(a, s)) < 1e-12);
    }
}

TEST_CASE("I4(2) unscaled") {
  // 50-digit series: 0.0507285699791802382...
  const auto v = bessel::bessel_i_scaled(4, 2.0);
  CHECK(v.value() == doctest::Approx(0.050728569979180238).epsilon(1e-13));
  CHECK(rel(v.value(), i_oracle(4, 2.0) * std::exp(2.0)) < 1e-13);
}

TEST_CASE("frozen scaled values") {
  struct Row {
    int a;
    double s, i, k;
  };
  // mpmath at 40 digits
  const Row rows[] = {{4, 2, 0.0068653653863206851486, 16.225745976182285657},
                      {5, 25, 0.048225415779992174617, 0.40672630818867786473},
                      {8, 100, 0.028963775789019244511, 0.17208170624029418205},
                      {4, 500, 0.017562167212435701524, 0.056938787178342033343},
                      {6, 0.5, 2.0750844834613875439e-7, 400164.16438837910969},
                      {7, 19.5, 0.025402169347972486686, 0.95014929925146632393},
                      {7, 21, 0.026809887580479772725, 0.84261008205088950642}};
  for (const auto& r : rows) {
    CAPTURE(r.a);
    CAPTURE(r.s);
    CHECK(rel(bessel::bessel_i_scaled(r.a, r.s).mantissa, r.i) < 1e-10);
    CHECK(rel(bessel::bessel_k_scaled(r.a, r.s).mantissa, r.k) < 1e-10);
    CHECK(bessel::bessel_i_scaled(r.a, r.s).exponent == r.s);
    CHECK(bessel::bessel_k_scaled(r.a, r.s).exponent == -r.s);
  }
}

TEST_CASE("leading asymptotics") {
  for (int a : {4, 6}) {
    double prev_i = 1e300, prev_k = 1e300;
    for (double s : {1e3, 1e4, 1e5, 1e6}) {
      const double ei = std::abs(bessel::bessel_i_scaled(a, s).mantissa * std::sqrt(2 * M_PI * s) - 1);
      const double ek = std::abs(bessel::bessel_k_scaled(a, s).mantissa * std::sqrt(2 * s / M_PI) - 1);
      // first correction is (4a^2 - 1)/(8s)
      CHECK(ei < (4.0 * a * a) / (8 * s) * 1.1);
      CHECK(ek < (4.0 * a * a) / (8 * s) * 1.1);
      CHECK(ei < prev_i);
      CHECK(ek < prev_k);
      prev_i = ei;
      prev_k = ek;
    }
  }
}

TEST_CASE("positivity and monotonicity of K") {
  for (int a : {4, 5, 8}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double s = 0.05; s < 800; s *= 1.07) {
      const auto k = bessel::bessel_k_scaled(a, s);
      const auto i = bessel::bessel_i_scaled(a, s);
      REQUIRE(k.mantissa > 0);
      REQUIRE(i.mantissa > 0);
      CHECK(k.log_value() < prev);
      prev = k.log_value();
    }
  }
}

TEST_CASE("Wronskian identities") {
  const auto w = bessel::wronskian_residuals(4, 2.0);
  CHECK(w.abel <= 1e-10);
  CHECK(w.mode <= 1e-10);
  const auto w500 = bessel::wronskian_residuals(4, 500.0);
  CHECK(w500.abel <= 1e-10);
  CHECK(w500.mode <= 1e-10);
  // I K' - I' K = -1/s, assembled with exponents combined first
  const auto i = bessel::bessel_i_scaled(4, 2.0), ip = bessel::bessel_i_prime_scaled(4, 2.0);
  const auto k = bessel::bessel_k_scaled(4, 2.0), kp = bessel::bessel_k_prime_scaled(4, 2.0);
  CHECK(i.mantissa * kp.mantissa - ip.mantissa * k.mantissa == doctest::Approx(-0.5).epsilon(1e-12));
  double worst = 0;
  for (int a = 4; a <= 8; ++a)
    for (int t = 0; t < 120; ++t) {
      const double s = 0.5 * std::pow(1000.0, t / 119.0);
      const auto r = bessel::wronskian_residuals(a, s);
      worst = std::max({worst, r.abel, r.mode});
    }
  CHECK(worst <= 1e-9);
}

TEST_CASE("series and asymptotic branches overlap") {
  for (int a : {4, 5, 6, 7, 8}) {
    const double sw = bessel::switch_point(a);
    for (double s = sw / 2; s <= 2 * sw; s *= 1.05) {
      CAPTURE(a);
      CAPTURE(s);
      CHECK(rel(bessel::detail::i_series_scaled(a, s), bessel::detail::i_asymptotic_scaled(a, s)) < 1e-9);
      const double kref = bessel::detail::k_integral_scaled(a, s);
      CHECK(rel(bessel::detail::k_asymptotic_scaled(a, s), kref) < 1e-9);
    }
    // the K series is only used up to s = 2, where it hands over to the integral
    for (double s = 1.0; s <= 4.0; s *= 1.05)
      CHECK(rel(bessel::detail::k_series_scaled(a, s), bessel::detail::k_integral_scaled(a, s)) < 1e-9);
  }
}

TEST_CASE("H pair: ODE residual, monotonicity, product size") {
  const int n = 2;
  const double lam = M_PI * M_PI;
  // Independent check: fourth-order differences in s = x^{-1/2} on a uniform grid.
  const double h = 2e-3;
  const int N = static_cast<int>((10.0 - 1.5) / h) + 1;
  const auto ref = bessel::h_pair(n, lam, 1.0 / (1.5 * 1.5));
  for (int which : {1, 2}) {
    std::vector<double> v(N);
    for (int i = 0; i < N; ++i) {
      const double s = 1.5 + i * h;
      const auto p = bessel::h_pair(n, lam, 1.0 / (s * s));
      const auto& a = which == 1 ? p.h1 : p.h2;
      const auto& b = which == 1 ? ref.h1 : ref.h2;
      v[i] = a.mantissa / b.mantissa * std::exp(a.exponent - b.exponent);
    }
    double worst = 0.0;
    for (int i = 2; i + 2 < N; ++i) {
      const double s = 1.5 + i * h, x = 1.0 / (s * s);
      const double vs = (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) / (12 * h);
      const double vss = (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * h * h);
      const double vx = -0.5 * s * s * s * vs;
      const double vxx = 0.75 * std::pow(s, 5) * vs + 0.25 * std::pow(s, 6) * vss;
      const double r = x * x * vxx + (n + 1) * x * vx - (n + 1) * v[i] - lam / x * v[i];
      worst = std::max(worst, std::abs(r) / (lam / x * std::abs(v[i])));
    }
    CAPTURE(which);
    CHECK(worst < 1e-7);
    // x decreases as s grows
    for (int i = 1; i < N; ++i) {
      if (which == 1) CHECK(v[i] > v[i - 1]);
      else CHECK(v[i] < v[i - 1]);
    }
  }
  // log H2 + 2 sqrt(lam/x) - (-n/2 + 1/4) log x tends to a constant
  auto g = [&](double x) {
    return bessel::h_pair(n, lam, x).h2.log_value() + 2 * std::sqrt(lam / x) + 0.75 * std::log(x);
  };
  const double lim = 0.5 * std::log(M_PI / 2) - 0.5 * std::log(2 * std::sqrt(lam));
  CHECK(std::abs(g(1e-6) - lim) < std::abs(g(1e-3) - lim));
  CHECK(std::abs(g(1e-8) - lim) < 1e-3);
  // H1 H2 x^{n - 1/2} -> 1/(4 sqrt(lam))
  for (double x : {1e-4, 1e-6}) {
    const auto h = bessel::h_pair(n, lam, x);
    const double prod = h.h1.mantissa * h.h2.mantissa * std::exp(h.h1.exponent + h.h2.exponent);
    CHECK(std::abs(h.h1.exponent + h.h2.exponent) < 1e-9);
    CHECK(prod * std::pow(x, n - 0.5) == doctest::Approx(1.0 / (4.0 * std::sqrt(lam))).epsilon(0.01));
  }
}

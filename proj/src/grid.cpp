#include "cuspke/grid.hpp"

#include <cmath>
#include <string>

#include "cuspke/errors.hpp"

namespace cuspke {

RadialGrid::RadialGrid(double s0, double h, int nodes) : h_(h), s_(nodes), x_(nodes) {
  for (int i = 0; i < nodes; ++i) {
    s_[i] = s0 + h * i;
    x_[i] = 1.0 / (s_[i] * s_[i]);
  }
}

RadialGrid RadialGrid::uniform_in_s(double x0, double s_max, int nodes) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw ConfigError("grid: x0 must lie in (0,1)");
  if (nodes < 5) throw ConfigError("grid: at least 5 nodes are needed, got " + std::to_string(nodes));
  const double s0 = 1.0 / std::sqrt(x0);
  if (!(s_max > s0)) throw ConfigError("grid: s_max must exceed 1/sqrt(x0)");
  return RadialGrid(s0, (s_max - s0) / (nodes - 1), nodes);
}

RadialGrid RadialGrid::with_step(double x0, double s_max, double step) {
  if (!(step > 0.0)) throw ConfigError("grid: step must be positive");
  const double s0 = 1.0 / std::sqrt(x0);
  const int nodes = static_cast<int>(std::ceil((s_max - s0) / step)) + 1;
  return uniform_in_s(x0, s0 + step * (nodes - 1), nodes);
}

RadialGrid RadialGrid::refined() const { return RadialGrid(s_.front(), h_ / 2, 2 * size() - 1); }

int RadialGrid::find_node(double x, double rtol) const {
  const double s = 1.0 / std::sqrt(x);
  const long i = std::lround((s - s_.front()) / h_);
  if (i < 0 || i >= size()) return -1;
  return std::abs(x_[i] - x) <= rtol * x ? static_cast<int>(i) : -1;
}

template <class T>
void RadialGrid::differentiate(const std::vector<T>& f, std::vector<T>& fx,
                               std::vector<T>& fxx) const {
  const int n = size();
  if (static_cast<int>(f.size()) != n) throw ConfigError("grid: profile length does not match grid");
  fx.assign(n, T(0));
  fxx.assign(n, T(0));
  const double h = h_;
  for (int i = 0; i < n; ++i) {
    T fs, fss;
    if (i == 0) {
      fs = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2 * h);
      fss = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    } else if (i == n - 1) {
      fs = (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2 * h);
      fss = (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) / (h * h);
    } else {
      fs = (f[i + 1] - f[i - 1]) / (2 * h);
      fss = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
    }
    // x = s^{-2}: d/dx = -(s^3/2) d/ds
    const double s = s_[i], s3 = s * s * s;
    fx[i] = -0.5 * s3 * fs;
    fxx[i] = 0.75 * s3 * s * s * fs + 0.25 * s3 * s3 * fss;
  }
}

template void RadialGrid::differentiate<double>(const std::vector<double>&, std::vector<double>&,
                                                std::vector<double>&) const;
template void RadialGrid::differentiate<std::complex<double>>(
    const std::vector<std::complex<double>>&, std::vector<std::complex<double>>&,
    std::vector<std::complex<double>>&) const;

}  // namespace cuspke

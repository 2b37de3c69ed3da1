#pragma once

#include <complex>
#include <vector>

namespace cuspke {

using Profile = std::vector<double>;
using CProfile = std::vector<std::complex<double>>;

// Radial nodes uniform in s = 1/sqrt(x). Node 0 is x0; x decreases with the index.
class RadialGrid {
 public:
  static RadialGrid uniform_in_s(double x0, double s_max, int nodes);
  // Same spacing rule, but the node count is chosen from a target step in s.
  static RadialGrid with_step(double x0, double s_max, double step);

  int size() const { return static_cast<int>(s_.size()); }
  double s(int i) const { return s_[i]; }
  double x(int i) const { return x_[i]; }
  double x0() const { return x_.front(); }
  double step() const { return h_; }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ss() const { return s_; }

  // Endpoints use one-sided stencils and are excluded from residual norms.
  bool interior(int i) const { return i > 0 && i + 1 < size(); }

  // Index of the node at x (relative tolerance rtol), or -1.
  int find_node(double x, double rtol = 1e-12) const;

  // f_x and f_xx from second-order differences in s plus the chain rule.
  template <class T>
  void differentiate(const std::vector<T>& f, std::vector<T>& fx, std::vector<T>& fxx) const;

  // Twice the nodes, same endpoints.
  RadialGrid refined() const;

 private:
  RadialGrid(double s0, double h, int nodes);
  double h_ = 0.0;
  std::vector<double> s_;
  std::vector<double> x_;
};

// w[k] = integral of the cubic through four neighbouring samples over [k, k+1]
// (unit spacing in the index, multiply by the step). `at(j)` returns sample j.
template <class T, class At>
std::vector<T> interval_integrals(int nodes, At&& at) {
  std::vector<T> w(nodes > 1 ? nodes - 1 : 0);
  if (nodes < 4) {
    for (int k = 0; k + 1 < nodes; ++k) w[k] = 0.5 * (at(k) + at(k + 1));
    return w;
  }
  for (int k = 0; k + 1 < nodes; ++k) {
    if (k == 0)
      w[k] = (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3)) / 24.0;
    else if (k == nodes - 2)
      w[k] = (9.0 * at(k + 1) + 19.0 * at(k) - 5.0 * at(k - 1) + at(k - 2)) / 24.0;
    else
      w[k] = (-at(k - 1) + 13.0 * at(k) + 13.0 * at(k + 1) - at(k + 2)) / 24.0;
  }
  return w;
}

}  // namespace cuspke

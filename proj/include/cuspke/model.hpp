#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cuspke {

using cplx = std::complex<double>;

// Flat torus D = C^{n-1}/Lambda with Kaehler potential phi(z') = -<A z', z'> on the
// universal cover, and h = scale * e^{-phi} |z_n|^2 on the line bundle.
//
// Real coordinates are ordered (x_1..x_{n-1}, y_1..y_{n-1}) with z_a = x_a + i y_a.
struct CuspModel {
  int n = 2;
  Eigen::MatrixXd lattice;  // columns are the basis vectors of Lambda
  Eigen::MatrixXcd A;
  double scale = 1.0;

  // Square unit lattice, A = identity.
  static CuspModel standard(int n);

  int torus_dim() const { return n - 1; }
  int real_dim() const { return 2 * (n - 1); }

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  Eigen::VectorXcd to_complex(const Eigen::VectorXd& v) const;
  double phi(const Eigen::VectorXcd& z) const;
  // phi_a = d phi / d z_a = -sum_b A_ab conj(z_b)
  Eigen::VectorXcd phi_z(const Eigen::VectorXcd& z) const;
  // Symmetric S with phi(v) = -v^T S v in real coordinates.
  Eigen::MatrixXd real_form() const;
};

struct CuspPoint {
  Eigen::VectorXcd z;  // z' on the universal cover
  double x = 0.5;      // 1/sigma, sigma = -log h
  double theta = 0.0;

  double rho(int n) const;
};

}  // namespace cuspke

#include "cuspke/model.hpp"

#include <cmath>
#include <string>

#include "cuspke/errors.hpp"

namespace cuspke {

CuspModel CuspModel::standard(int n) {
  CuspModel m;
  m.n = n;
  m.lattice = Eigen::MatrixXd::Identity(2 * (n - 1), 2 * (n - 1));
  m.A = Eigen::MatrixXcd::Identity(n - 1, n - 1);
  m.scale = 1.0;
  return m;
}

void CuspModel::validate() const {
  if (n < 2) throw ConfigError("model: n must be at least 2, got " + std::to_string(n));
  const int d = n - 1;
  if (lattice.rows() != 2 * d || lattice.cols() != 2 * d)
    throw ConfigError("model: lattice must be " + std::to_string(2 * d) + "x" +
                      std::to_string(2 * d));
  if (!lattice.allFinite()) throw ConfigError("model: lattice has non-finite entries");
  const double det = lattice.determinant();
  double norms = 1.0;
  for (int j = 0; j < lattice.cols(); ++j) norms *= lattice.col(j).norm();
  if (!(std::abs(det) > 1e-12 * norms)) throw ConfigError("model: lattice basis is singular");
  if (A.rows() != d || A.cols() != d)
    throw ConfigError("model: A must be " + std::to_string(d) + "x" + std::to_string(d));
  if (!A.allFinite()) throw ConfigError("model: A has non-finite entries");
  const double scaleA = std::max(1.0, A.norm());
  if ((A - A.adjoint()).norm() > 1e-12 * scaleA) throw ConfigError("model: A is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw ConfigError("model: A is not positive definite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("model: scale must be positive");
}

Eigen::VectorXcd CuspModel::to_complex(const Eigen::VectorXd& v) const {
  const int d = n - 1;
  Eigen::VectorXcd z(d);
  for (int a = 0; a < d; ++a) z(a) = cplx(v(a), v(a + d));
  return z;
}

double CuspModel::phi(const Eigen::VectorXcd& z) const {
  // -sum z_a A_ab conj(z_b), so that phi_{a bbar} = -A_ab
  return -std::real(z.conjugate().dot(A * z.conjugate()));
}

Eigen::VectorXcd CuspModel::phi_z(const Eigen::VectorXcd& z) const {
  return -(A * z.conjugate());
}

Eigen::MatrixXd CuspModel::real_form() const {
  const int d = n - 1;
  Eigen::MatrixXd ar = A.real(), ai = A.imag();
  Eigen::MatrixXd s(2 * d, 2 * d);
  s << ar, ai, -ai, ar;
  return s;
}

double CuspPoint::rho(int n) const { return -std::sqrt((n + 1) / 2.0) * std::log(x); }

}  // namespace cuspke

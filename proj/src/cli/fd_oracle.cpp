#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "cuspke/cli.hpp"
#include "cuspke/errors.hpp"

namespace cuspke::cli {

std::vector<double> fd_torus_eigenvalues(const CuspModel& model, int resolution, int count) {
  model.validate();
  if (model.n != 2) throw ConfigError("fd oracle: only n = 2 is supported");
  if (resolution < 8) throw ConfigError("fd oracle: resolution must be at least 8");
  if (count < 1) throw ConfigError("fd oracle: count must be positive");
  const int M = resolution, N = M * M;
  const double h = 1.0 / M;
  const double a = model.A(0, 0).real();
  // Laplacian in lattice coordinates w, v = B w.
  const Eigen::Matrix2d ginv = (model.lattice.transpose() * model.lattice).inverse();
  const double k = -1.0 / (4.0 * a);
  auto id = [M](int i, int j) { return ((i + M) % M) * M + (j + M) % M; };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * N);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const int r = id(i, j);
      const double c11 = k * ginv(0, 0) / (h * h), c22 = k * ginv(1, 1) / (h * h);
      const double c12 = k * 2.0 * ginv(0, 1) / (4.0 * h * h);
      trip.emplace_back(r, r, -2.0 * c11 - 2.0 * c22);
      trip.emplace_back(r, id(i + 1, j), c11);
      trip.emplace_back(r, id(i - 1, j), c11);
      trip.emplace_back(r, id(i, j + 1), c22);
      trip.emplace_back(r, id(i, j - 1), c22);
      if (c12 != 0.0) {
        trip.emplace_back(r, id(i + 1, j + 1), c12);
        trip.emplace_back(r, id(i - 1, j - 1), c12);
        trip.emplace_back(r, id(i + 1, j - 1), -c12);
        trip.emplace_back(r, id(i - 1, j + 1), -c12);
      }
    }
  Eigen::SparseMatrix<double> L(N, N);
  L.setFromTriplets(trip.begin(), trip.end());

  const double shift = 1.0;
  Eigen::SparseMatrix<double> K = L;
  for (int r = 0; r < N; ++r) K.coeffRef(r, r) += shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) throw NumericalError("fd oracle: factorization failed");

  const int b = count + 4;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd V(N, b);
  for (int c = 0; c < b; ++c)
    for (int r = 0; r < N; ++r) V(r, c) = nd(rng);
  auto orthonormalize = [&](Eigen::MatrixXd& X) {
    for (int c = 0; c < X.cols(); ++c) X.col(c).array() -= X.col(c).mean();  // drop constants
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    X = qr.householderQ() * Eigen::MatrixXd::Identity(N, X.cols());
  };
  orthonormalize(V);
  Eigen::VectorXd ritz = Eigen::VectorXd::Zero(b), prev;
  for (int it = 0; it < 500; ++it) {
    Eigen::MatrixXd W(N, b);
    for (int c = 0; c < b; ++c) W.col(c) = ldlt.solve(V.col(c));
    orthonormalize(W);
    const Eigen::MatrixXd T = W.transpose() * (L * W);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
    V = W * es.eigenvectors();
    prev = ritz;
    ritz = es.eigenvalues();
    if (it > 3 && ((ritz - prev).head(count).cwiseAbs().array() <= 1e-12 * ritz.head(count).array()).all())
      break;
  }
  std::vector<double> out(ritz.data(), ritz.data() + count);
  return out;
}

}  // namespace cuspke::cli

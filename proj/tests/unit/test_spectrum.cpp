#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cuspke/cli.hpp"
#include "cuspke/errors.hpp"
#include "cuspke/spectrum.hpp"

using namespace cuspke;

namespace {

CuspModel lattice2(double b11, double b21, double b12, double b22, double a = 1.0) {
  CuspModel m = CuspModel::standard(2);
  m.lattice << b11, b12, b21, b22;
  m.A(0, 0) = a;
  return m;
}

// lambda = pi^2 c^H A^{-1} c over a brute-force box of dual vectors.
std::vector<double> brute_force(const CuspModel& m, int box, int count) {
  const int D = m.real_dim(), d = m.torus_dim();
  const Eigen::MatrixXd dual = m.lattice.transpose().inverse();
  const Eigen::MatrixXcd ainv = m.A.inverse();
  std::vector<double> out;
  Eigen::VectorXi idx = Eigen::VectorXi::Constant(D, -box);
  while (true) {
    const Eigen::VectorXd xi = dual * idx.cast<double>();
    Eigen::VectorXcd c(d);
    for (int a = 0; a < d; ++a) c(a) = cplx(xi(a), -xi(d + a));
    out.push_back(M_PI * M_PI * (c.adjoint() * ainv * c)(0).real());
    int k = 0;
    while (k < D && idx(k) == box) idx(k++) = -box;
    if (k == D) break;
    ++idx(k);
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

}  // namespace

TEST_CASE("dual lattice") {
  CHECK(spectrum::dual_lattice(CuspModel::standard(2)).isApprox(Eigen::MatrixXd::Identity(2, 2)));
  CuspModel m = CuspModel::standard(2);
  m.lattice *= 2.0;
  CHECK(spectrum::dual_lattice(m).isApprox(0.5 * Eigen::MatrixXd::Identity(2, 2)));
  // basis vectors (1, 0) and (0.5, 1)
  m = lattice2(1, 0, 0.5, 1);
  const Eigen::MatrixXd dual = spectrum::dual_lattice(m);
  CHECK((m.lattice.transpose() * dual).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
  Eigen::MatrixXd expect(2, 2);
  expect << 1, 0, -0.5, 1;
  CHECK(dual.isApprox(expect, 1e-14));
  m = lattice2(1, 2, 2, 4);
  CHECK_THROWS_AS(spectrum::dual_lattice(m), ConfigError);
}

TEST_CASE("square torus") {
  const auto e = spectrum::eigenvalues_up_to(CuspModel::standard(2), 12);
  REQUIRE(e.size() == 12);
  CHECK(e[0].lambda == 0.0);
  CHECK(e[0].m.isZero());
  for (int k = 1; k <= 4; ++k) CHECK(e[k].lambda == doctest::Approx(M_PI * M_PI).epsilon(1e-14));
  CHECK(e[5].lambda == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-14));
  for (size_t k = 1; k < e.size(); ++k) CHECK(e[k].lambda >= e[k - 1].lambda);
  CHECK(spectrum::first_eigenvalue(CuspModel::standard(2)) == doctest::Approx(9.8696044010893586));
}

TEST_CASE("rectangular torus and scaling of A") {
  CHECK(spectrum::first_eigenvalue(lattice2(1, 0, 0, 2)) == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-14));
  const auto a1 = spectrum::eigenvalues_up_to(lattice2(1, 0, 0.3, 1.2), 30);
  const auto a2 = spectrum::eigenvalues_up_to(lattice2(1, 0, 0.3, 1.2, 2.0), 30);
  for (int k = 0; k < 30; ++k) CHECK(a2[k].lambda == doctest::Approx(0.5 * a1[k].lambda).epsilon(1e-14));
}

TEST_CASE("relabeling the lattice basis leaves the spectrum unchanged") {
  const CuspModel m = lattice2(1, 0.2, 0.4, 1.3, 1.6);
  CuspModel swapped = m, sheared = m;
  swapped.lattice.col(0) = m.lattice.col(1);
  swapped.lattice.col(1) = m.lattice.col(0);
  sheared.lattice.col(1) = m.lattice.col(0) + m.lattice.col(1);
  const auto e = spectrum::eigenvalues_up_to(m, 40);
  const auto es = spectrum::eigenvalues_up_to(swapped, 40);
  const auto eh = spectrum::eigenvalues_up_to(sheared, 40);
  for (int k = 0; k < 40; ++k) {
    CHECK(es[k].lambda == doctest::Approx(e[k].lambda).epsilon(1e-12));
    CHECK(eh[k].lambda == doctest::Approx(e[k].lambda).epsilon(1e-12));
  }
}

TEST_CASE("closed form against brute-force enumeration, complex A") {
  CuspModel m = CuspModel::standard(3);
  m.A << cplx(2.0, 0.0), cplx(0.3, 0.4), cplx(0.3, -0.4), cplx(1.0, 0.0);
  m.lattice(0, 1) = 0.3;
  m.lattice(2, 3) = 0.2;
  m.lattice(3, 3) = 1.1;
  const auto e = spectrum::eigenvalues_up_to(m, 25);
  const auto ref = brute_force(m, 3, 25);
  for (int k = 0; k < 25; ++k) {
    CAPTURE(k);
    CHECK(e[k].lambda == doctest::Approx(ref[k]).epsilon(1e-12));
    CHECK(e[k].lambda == doctest::Approx(M_PI * M_PI * (e[k].c.adjoint() * m.A.inverse() * e[k].c)(0).real()).epsilon(1e-12));
  }
  const auto below = spectrum::eigenvalues_below(m, ref[10] * 1.0000001);
  CHECK(below.size() >= 11);
  for (const auto& s : below) CHECK(s.lambda <= ref[10] * 1.0000001);
}

TEST_CASE("finite-difference eigensolver agrees with the character formula") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int t = 0; t < 3; ++t) {
    const CuspModel m = lattice2(1 + u(rng), u(rng), u(rng), 1 + u(rng), 1.0 + std::abs(u(rng)));
    std::vector<double> distinct;
    for (const auto& e : spectrum::eigenvalues_up_to(m, 12))
      if (e.lambda > 0 && (distinct.empty() || e.lambda > distinct.back() * (1 + 1e-9))) distinct.push_back(e.lambda);
    const auto f64 = cli::fd_torus_eigenvalues(m, 64, 4);
    const auto f128 = cli::fd_torus_eigenvalues(m, 128, 4);
    // fd values come with multiplicity: the first two are the +-xi pair of lambda_1
    const double l1 = distinct[0], l2 = distinct[1];
    CAPTURE(t);
    CHECK(std::abs(f128[0] - l1) / l1 < 5e-3);
    CHECK(std::abs(f128[2] - l2) / l2 < 5e-3);
    const double order = std::log2(std::abs(f64[0] - l1) / std::abs(f128[0] - l1));
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("torus basis: characters orthonormal on the collocation grid") {
  CuspModel m = lattice2(1, 0, 0.4, 1.3, 1.6);
  const spectrum::TorusBasis b(m, 9.0);
  CHECK(b.mode(b.zero_mode()).lambda == 0.0);
  CHECK(b.lambda1() == doctest::Approx(spectrum::first_eigenvalue(m)));
  for (int k = 0; k < b.size(); ++k) {
    CHECK(b.mode(k).lambda <= 9.0 * b.lambda1() * (1 + 1e-12));
    CHECK(b.mode(b.conjugate(k)).m == -b.mode(k).m);
    CHECK(b.distinct_lambdas()[b.lambda_class(k)] == doctest::Approx(b.mode(k).lambda));
    CHECK(b.index_of(b.mode(k).m) == k);
  }
  double worst = 0.0;
  std::vector<cplx> e(b.size()), back(b.size());
  std::vector<cplx> vals(b.points());
  for (int k = 0; k < b.size(); ++k) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[k] = 1.0;
    b.synthesize(e.data(), vals.data());
    // value at a collocation point is the character itself
    const Eigen::VectorXd p = b.point(b.points() / 3);
    const cplx chi = std::exp(cplx(0, 2 * M_PI * b.mode(k).xi.dot(p)));
    CHECK(std::abs(vals[b.points() / 3] - chi) < 1e-12);
    for (int j = 0; j < b.size(); ++j) {
      cplx ip = 0.0;
      std::vector<cplx> vj(b.points());
      if (j != k && j % 7 != 0) continue;
      std::fill(back.begin(), back.end(), cplx(0.0));
      back[j] = 1.0;
      b.synthesize(back.data(), vj.data());
      for (int p = 0; p < b.points(); ++p) ip += vals[p] * std::conj(vj[p]);
      ip /= static_cast<double>(b.points());
      worst = std::max(worst, std::abs(ip - (j == k ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-12);
  // real round trip
  std::vector<cplx> c(b.size(), 0.0);
  const int k1 = b.index_of(b.mode(1).m);
  c[k1] = cplx(0.3, -0.2);
  c[b.conjugate(k1)] = cplx(0.3, 0.2);
  c[0] = 0.7;
  std::vector<double> rv(b.points());
  b.synthesize(c.data(), rv.data());
  double tail = 1.0, total = 0.0;
  b.analyze(rv.data(), back.data(), &tail, &total);
  for (int k = 0; k < b.size(); ++k) CHECK(std::abs(back[k] - c[k]) < 1e-13);
  CHECK(tail < 1e-13 * total);
}

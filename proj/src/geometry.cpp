#include "cuspke/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "cuspke/errors.hpp"

namespace cuspke::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

void check_point(const CuspModel& model, const CuspPoint& p) {
  if (!(p.x > 0.0 && p.x < 1.0)) throw ConfigError("geometry: x must lie in (0,1)");
  if (p.z.size() != model.n - 1) throw ConfigError("geometry: z' has the wrong dimension");
}

// Eigenvalues of a small Hermitian matrix; closed form for 2x2.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 1) return Eigen::VectorXd::Constant(1, m(0, 0).real());
  if (m.rows() == 2) {
    const double p = m(0, 0).real(), r = m(1, 1).real();
    const double q2 = std::norm(m(0, 1));
    const double mid = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), std::sqrt(q2));
    const double det = p * r - q2;
    double big = mid >= 0 ? mid + rad : mid - rad;
    double small = big != 0.0 ? det / big : 0.0;
    Eigen::VectorXd e(2);
    e << std::min(big, small), std::max(big, small);
    return e;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// First and second x-derivatives of one profile at node i.
template <class T>
void node_derivatives(const RadialGrid& g, const std::vector<T>& f, int i, T& fx, T& fxx) {
  const double h = g.step();
  const int n = g.size();
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
  const double s = g.s(i), s3 = s * s * s;
  fx = -0.5 * s3 * fs;
  fxx = 0.75 * s3 * s * s * fs + 0.25 * s3 * s3 * fss;
}

Eigen::VectorXcd metric_vector(const CuspModel& model, const CuspPoint& p, Frame frame) {
  const int d = model.n - 1;
  Eigen::VectorXcd w(model.n);
  w.head(d) = model.phi_z(p.z);
  w(d) = frame == Frame::LogRadial ? cplx(-1.0) : -1.0 / zn(model, p);
  return w;
}

// Pointwise data shared by the residual and the nonlinear source.
struct Sweep {
  const CuspModel& model;
  const Field& f;
  int n, d;
  Eigen::MatrixXcd linv;  // inverse Cholesky factor of A
  std::vector<CProfile> fx, fxx;

  Sweep(const CuspModel& m, const Field& field) : model(m), f(field), n(m.n), d(m.n - 1) {
    if (field.nodes() < 5) throw ConfigError("geometry: at least 5 radial nodes are needed");
    Eigen::LLT<Eigen::MatrixXcd> llt(model.A);
    if (llt.info() != Eigen::Success) throw ConfigError("geometry: A is not positive definite");
    linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(d, d));
    fx.resize(f.modes.size());
    fxx.resize(f.modes.size());
    for (size_t k = 0; k < f.modes.size(); ++k) f.grid->differentiate(f.modes[k], fx[k], fxx[k]);
  }

  // Runs `visit(node, point, mu, value)` for every collocation point of node i,
  // where mu are the eigenvalues of g^{-1} f_hess and value is f itself.
  template <class Visit>
  void node(int i, Visit&& visit) const {
    const auto& basis = *f.basis;
    const int K = basis.size(), P = basis.points();
    const double x = f.grid->x(i);
    std::vector<cplx> c0(K), c1(K), c2(K), tmp(K);
    for (int k = 0; k < K; ++k) {
      c0[k] = f.modes[k][i];
      c1[k] = fx[k][i];
      c2[k] = fxx[k][i];
    }
    std::vector<double> v0(P), v1(P), v2(P);
    basis.synthesize(c0.data(), v0.data());
    basis.synthesize(c1.data(), v1.data());
    basis.synthesize(c2.data(), v2.data());
    std::vector<std::vector<cplx>> ff(d * d, std::vector<cplx>(P)), fxz(d, std::vector<cplx>(P));
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        for (int k = 0; k < K; ++k) {
          const auto& c = basis.mode(k).c;
          tmp[k] = -kPi * kPi * c(a) * std::conj(c(b)) * c0[k];
        }
        basis.synthesize(tmp.data(), ff[a * d + b].data());
      }
      for (int k = 0; k < K; ++k) tmp[k] = cplx(0.0, kPi) * basis.mode(k).c(a) * c1[k];
      basis.synthesize(tmp.data(), fxz[a].data());
    }
    const double np1 = n + 1.0;
    Eigen::MatrixXcd F(d, d), pt(n, n), gh(n, n);
    Eigen::VectorXcd fz(d);
    for (int p = 0; p < P; ++p) {
      for (int a = 0; a < d; ++a) {
        fz(a) = fxz[a][p];
        for (int b = 0; b < d; ++b) F(a, b) = ff[a * d + b][p];
      }
      F = 0.5 * (F + F.adjoint()).eval();
      const double fxv = v1[p], fxxv = v2[p];
      pt.topLeftCorner(d, d) = linv * F * linv.adjoint() / (np1 * x);
      pt.topLeftCorner(d, d).diagonal().array() += x * fxv / np1;
      pt.topRightCorner(d, 1) = std::sqrt(x) / np1 * (linv * fz);
      pt.bottomLeftCorner(1, d) = pt.topRightCorner(d, 1).adjoint();
      pt(d, d) = (x * x * fxxv + 2.0 * x * fxv) / np1;
      const Eigen::VectorXd mu = hermitian_eigenvalues(pt);

      // Positivity of g + f_hess in the adapted frame.
      gh.topLeftCorner(d, d) = np1 * x * model.A + F + x * x * fxv * model.A;
      gh.topRightCorner(d, 1) = x * x * fz;
      gh.bottomLeftCorner(1, d) = gh.topRightCorner(d, 1).adjoint();
      gh(d, d) = np1 * x * x + x * x * x * x * fxxv + 2.0 * x * x * x * fxv;
      const double trace_g = np1 * (x * model.A.trace().real() + x * x);
      const double low = hermitian_eigenvalues(gh).minCoeff();
      if (!(low > 1e-10 * trace_g / n) || !(mu.minCoeff() > -1.0)) {
        std::ostringstream os;
        os << "perturbed metric degenerate at node " << i << " (x = " << x << "), torus point "
           << p << " (" << basis.point(p).transpose() << "), smallest eigenvalue " << low;
        throw MetricDegenerate(os.str());
      }
      visit(p, mu, v0[p]);
    }
  }
};

}  // namespace

double log1p_minus(double t) {
  if (std::abs(t) < 0.05) {
    // -t^2/2 + t^3/3 - ...
    double term = -t * t, sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double piece = term / k;
      sum += piece;
      if (std::abs(piece) < 1e-18 * std::abs(sum)) break;
      term *= -t;
    }
    return sum;
  }
  return std::log1p(t) - t;
}

double log_abs_zn(const CuspModel& model, const CuspPoint& p) {
  return 0.5 * (model.phi(p.z) - 1.0 / p.x - std::log(model.scale));
}

cplx zn(const CuspModel& model, const CuspPoint& p) {
  return std::polar(std::exp(log_abs_zn(model, p)), p.theta);
}

HermitianForm metric_coefficients(const CuspModel& model, const CuspPoint& p, Frame frame) {
  model.validate();
  check_point(model, p);
  const int d = model.n - 1;
  const Eigen::VectorXcd w = metric_vector(model, p, frame);
  Eigen::MatrixXcd g = p.x * p.x * (w * w.adjoint());
  g.topLeftCorner(d, d) += p.x * model.A;
  HermitianForm out;
  out.entries = (model.n + 1.0) * g;
  out.frame = frame;
  return out;
}

HermitianForm inverse_metric(const CuspModel& model, const CuspPoint& p, Frame frame) {
  model.validate();
  check_point(model, p);
  const int d = model.n - 1;
  const double x = p.x, np1 = model.n + 1.0;
  const Eigen::VectorXcd w = metric_vector(model, p, frame);
  const Eigen::VectorXcd u = w.head(d);
  const cplx v = w(d);
  const Eigen::MatrixXcd ainv = model.A.inverse();
  const double q = inverse_q(model, p.z);
  Eigen::MatrixXcd m(model.n, model.n);
  m.topLeftCorner(d, d) = ainv / x;
  m.topRightCorner(d, 1) = -(ainv * u) / (x * v);
  m.bottomLeftCorner(1, d) = m.topRightCorner(d, 1).adjoint();
  m(d, d) = (1.0 - q * x) / (x * x * std::norm(v));
  HermitianForm out;
  out.entries = m / np1;
  out.frame = frame;
  return out;
}

double inverse_q(const CuspModel& model, const Eigen::VectorXcd& z) {
  const Eigen::VectorXcd u = model.phi_z(z);
  return -std::real(u.dot(model.A.inverse() * u));
}

Eigen::MatrixXd cross_section_metric(const CuspModel& model, double eps, const CuspPoint& p) {
  if (!(eps > 0.0)) throw ConfigError("cross_section_metric: eps must be positive");
  if (!(eps * eps < 1.0)) throw ConfigError("cross_section_metric: eps^2 must be below 1");
  model.validate();
  const int d = model.n - 1;
  Eigen::VectorXd v(2 * d);
  for (int a = 0; a < d; ++a) {
    v(a) = p.z(a).real();
    v(a + d) = p.z(a).imag();
  }
  const Eigen::MatrixXd s = model.real_form();
  const Eigen::VectorXd grad = -2.0 * s * v;
  const Eigen::MatrixXd hess = -2.0 * s;
  const double e2 = eps * eps;
  auto px = [&](int a) { return grad(a); };
  auto py = [&](int a) { return grad(a + d); };
  Eigen::MatrixXd g(2 * d + 1, 2 * d + 1);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double xx = hess(a, b), yy = hess(a + d, b + d);
      const double xy = hess(a, b + d), yx = hess(a + d, b);
      g(a, b) = -0.5 * (xx + yy) + 0.5 * e2 * py(a) * py(b);
      g(a, b + d) = -0.5 * (xy - yx) - 0.5 * e2 * py(a) * px(b);
      g(a + d, b) = -0.5 * (yx - xy) - 0.5 * e2 * px(a) * py(b);
      g(a + d, b + d) = -0.5 * (yy + xx) + 0.5 * e2 * px(a) * px(b);
    }
    g(a, 2 * d) = g(2 * d, a) = e2 * py(a);
    g(a + d, 2 * d) = g(2 * d, a + d) = -e2 * px(a);
  }
  g(2 * d, 2 * d) = 2.0 * e2;
  return g;
}

NormalCurvature normal_and_mean_curvature(const CuspModel& model, double eps) {
  if (!(eps > 0.0)) throw ConfigError("normal_and_mean_curvature: eps must be positive");
  const double root = std::sqrt(2.0 * (model.n + 1));
  return {-1.0 / (eps * eps) / root, -model.n / root};
}

HermitianForm hessian_from_jet(const CuspModel& model, const CuspPoint& p, const FieldJet& jet,
                               Frame frame) {
  check_point(model, p);
  const int d = model.n - 1;
  const double x = p.x, x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
  const Eigen::VectorXcd u = model.phi_z(p.z);
  Eigen::MatrixXcd h(model.n, model.n);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const cplx uu = u(a) * std::conj(u(b));
      h(a, b) = jet.fzzbar(a, b) - x2 * (u(a) * std::conj(jet.fxz(b)) + std::conj(u(b)) * jet.fxz(a)) +
                (2.0 * x3 * uu + x2 * model.A(a, b)) * jet.fx + x4 * uu * jet.fxx;
    }
    h(a, d) = -2.0 * x3 * u(a) * jet.fx + x2 * jet.fxz(a) - x4 * u(a) * jet.fxx;
    h(d, a) = std::conj(h(a, d));
  }
  h(d, d) = x4 * jet.fxx + 2.0 * x3 * jet.fx;
  if (frame == Frame::Holomorphic) {
    const cplx z = zn(model, p);
    for (int a = 0; a < d; ++a) {
      h(a, d) /= std::conj(z);
      h(d, a) /= z;
    }
    h(d, d) /= std::norm(z);
  }
  return {h, frame};
}

FieldJet field_jet(const Field& f, int node, const Eigen::VectorXd& v) {
  if (!f.grid->interior(node))
    throw ConfigError("field_jet: node " + std::to_string(node) +
                      " is a boundary node with one-sided stencils");
  const auto& basis = *f.basis;
  const int d = basis.model().n - 1;
  FieldJet jet;
  jet.fz = Eigen::VectorXcd::Zero(d);
  jet.fxz = Eigen::VectorXcd::Zero(d);
  jet.fzzbar = Eigen::MatrixXcd::Zero(d, d);
  cplx f0 = 0.0, f1 = 0.0, f2 = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    const auto& e = basis.mode(k);
    cplx dx, dxx;
    node_derivatives(*f.grid, f.modes[k], node, dx, dxx);
    const cplx chi = std::polar(1.0, 2.0 * kPi * e.xi.dot(v));
    const cplx c0 = f.modes[k][node] * chi;
    f0 += c0;
    f1 += dx * chi;
    f2 += dxx * chi;
    for (int a = 0; a < d; ++a) {
      jet.fz(a) += cplx(0.0, kPi) * e.c(a) * c0;
      jet.fxz(a) += cplx(0.0, kPi) * e.c(a) * dx * chi;
      for (int b = 0; b < d; ++b) jet.fzzbar(a, b) += -kPi * kPi * e.c(a) * std::conj(e.c(b)) * c0;
    }
  }
  jet.f = f0.real();
  jet.fx = f1.real();
  jet.fxx = f2.real();
  return jet;
}

HermitianForm holomorphic_hessian(const CuspModel& model, const Field& f, const CuspPoint& p,
                                  Frame frame) {
  const int node = f.grid->find_node(p.x, 1e-10);
  if (node < 0) throw ConfigError("holomorphic_hessian: x is not a grid node");
  const int d = model.n - 1;
  Eigen::VectorXd v(2 * d);
  for (int a = 0; a < d; ++a) {
    v(a) = p.z(a).real();
    v(a + d) = p.z(a).imag();
  }
  return hessian_from_jet(model, p, field_jet(f, node, v), frame);
}

Eigen::VectorXd relative_eigenvalues(const CuspModel& model, double x, const FieldJet& jet) {
  const int d = model.n - 1, n = model.n;
  const double np1 = n + 1.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(model.A);
  const Eigen::MatrixXcd linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(d, d));
  Eigen::MatrixXcd pt(n, n);
  pt.topLeftCorner(d, d) = linv * jet.fzzbar * linv.adjoint() / (np1 * x);
  pt.topLeftCorner(d, d).diagonal().array() += x * jet.fx / np1;
  pt.topRightCorner(d, 1) = std::sqrt(x) / np1 * (linv * jet.fxz);
  pt.bottomLeftCorner(1, d) = pt.topRightCorner(d, 1).adjoint();
  pt(d, d) = (x * x * jet.fxx + 2.0 * x * jet.fx) / np1;
  return hermitian_eigenvalues(0.5 * (pt + pt.adjoint()));
}

double log_volume_ratio(const CuspModel& model, double x, const FieldJet& jet) {
  const Eigen::VectorXd mu = relative_eigenvalues(model, x, jet);
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (!(mu(i) > -1.0)) throw MetricDegenerate("log_volume_ratio: perturbed metric degenerate");
    s += std::log1p(mu(i));
  }
  return s;
}

Field linearized_apply(const CuspModel& model, const Field& f) {
  const auto& g = *f.grid;
  if (g.size() < 5) throw ConfigError("linearized_apply: at least 5 radial nodes are needed");
  const double np1 = model.n + 1.0;
  Field out = Field::zeros(f.grid, f.basis);
  CProfile fx, fxx;
  for (int k = 0; k < f.basis->size(); ++k) {
    const double lam = f.basis->mode(k).lambda;
    g.differentiate(f.modes[k], fx, fxx);
    for (int i = 0; i < g.size(); ++i) {
      const double x = g.x(i);
      out.modes[k][i] =
          (x * x * fxx[i] + np1 * x * fx[i] - np1 * f.modes[k][i] - lam / x * f.modes[k][i]) / np1;
    }
  }
  return out;
}

ResidualReport monge_ampere_residual_report(const CuspModel& model, const Field& f) {
  Sweep sw(model, f);
  const auto& basis = *f.basis;
  ResidualReport rep;
  rep.residual = Field::zeros(f.grid, f.basis);
  std::vector<double> vals(basis.points());
  std::vector<cplx> coeffs(basis.size());
  double tail_max = 0.0, total_max = 0.0;
  for (int i = 0; i < f.nodes(); ++i) {
    sw.node(i, [&](int p, const Eigen::VectorXd& mu, double value) {
      double s = 0.0;
      for (int j = 0; j < mu.size(); ++j) s += std::log1p(mu(j));
      vals[p] = s - value;
    });
    double tail = 0.0, total = 0.0;
    basis.analyze(vals.data(), coeffs.data(), &tail, &total);
    tail_max = std::max(tail_max, tail);
    total_max = std::max(total_max, total);
    for (int k = 0; k < basis.size(); ++k) rep.residual.modes[k][i] = coeffs[k];
    if (f.grid->interior(i))
      for (double v : vals) rep.sup_interior = std::max(rep.sup_interior, std::abs(v));
  }
  rep.residual.tail_norm = total_max > 0.0 ? tail_max / total_max : 0.0;
  return rep;
}

Field monge_ampere_residual(const CuspModel& model, const Field& f) {
  return monge_ampere_residual_report(model, f).residual;
}

Field nonlinear_source(const CuspModel& model, const Field& f) {
  Sweep sw(model, f);
  const auto& basis = *f.basis;
  const double np1 = model.n + 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  Field out = Field::zeros(f.grid, f.basis);
  std::vector<double> vals(basis.points());
  std::vector<cplx> coeffs(basis.size());
  double tail_max = 0.0, total_max = 0.0;
  for (int i = 0; i < f.nodes(); ++i) {
    double scale = 0.0;
    sw.node(i, [&](int p, const Eigen::VectorXd& mu, double) {
      double q = 0.0, m2 = 0.0;
      for (int j = 0; j < mu.size(); ++j) {
        q += log1p_minus(mu(j));
        m2 += mu(j) * mu(j);
      }
      vals[p] = -np1 * q;
      scale = std::max(scale, np1 * m2);
    });
    double tail = 0.0, total = 0.0;
    basis.analyze(vals.data(), coeffs.data(), &tail, &total);
    tail_max = std::max(tail_max, tail);
    total_max = std::max(total_max, total);
    // Coefficients below the rounding level of this node carry no information.
    const double floor = 1e3 * eps * scale;
    for (int k = 0; k < basis.size(); ++k)
      out.modes[k][i] = std::abs(coeffs[k]) < floor ? cplx(0.0) : coeffs[k];
  }
  out.tail_norm = total_max > 0.0 ? tail_max / total_max : 0.0;
  return out;
}

}  // namespace cuspke::geometry

#include "cuspke/modes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cuspke/bessel.hpp"
#include "cuspke/errors.hpp"
#include "cuspke/geometry.hpp"
#include "cuspke/radial.hpp"

namespace cuspke::modes {

namespace {

constexpr double kMaxExponent = 700.0;

// Integral over [s_k, s_{k+1}] of g(s) e^{sign * root (s - s_ref)} with s_ref = s_k
// (sign = -1) or s_{k+1} (sign = +1); four-point cubic rule on the weighted samples.
template <class T>
T weighted_interval(const std::vector<T>& g, int k, double rh, double sign, int N) {
  // Weight of sample j relative to the reference node.
  auto wt = [&](int j) {
    const int off = sign < 0 ? j - k : j - (k + 1);
    return std::exp(sign * rh * off);
  };
  auto at = [&](int j) { return g[j] * wt(j); };
  if (k == 0) return (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3)) / 24.0;
  if (k == N - 2) return (9.0 * at(k + 1) + 19.0 * at(k) - 5.0 * at(k - 1) + at(k - 2)) / 24.0;
  return (-at(k - 1) + 13.0 * at(k) + 13.0 * at(k + 1) - at(k + 2)) / 24.0;
}

}  // namespace

ModeKernel::ModeKernel(int n, double lambda, std::shared_ptr<const RadialGrid> grid)
    : n_(n), lambda_(lambda), root_(2.0 * std::sqrt(lambda)), grid_(std::move(grid)) {
  if (!(lambda > 0.0)) throw ConfigError("mode kernel: lambda must be positive");
  if (grid_->size() < 5) throw ConfigError("mode kernel: at least 5 radial nodes are needed");
  if (2.0 * root_ * grid_->step() > kMaxExponent)
    throw NumericalError("mode kernel: exponent combination overflows; refine the grid");
  const int N = grid_->size();
  h1_.resize(N);
  h2_.resize(N);
  weight_.resize(N);
  for (int i = 0; i < N; ++i) {
    const auto hp = bessel::h_pair(n, lambda, grid_->x(i));
    h1_[i] = hp.h1.mantissa;
    h2_[i] = hp.h2.mantissa;
    // t^{n-1} dt = -2 s^{-2n-1} ds
    weight_[i] = 2.0 * std::pow(grid_->s(i), -2 * n - 1);
  }
}

double ModeKernel::decay_ratio(int i) const {
  const double ds = grid_->s(i) - grid_->s(0);
  return h2_[i] / h2_[0] * std::exp(-root_ * ds);
}

CProfile ModeKernel::solve(const CProfile& f, cplx v_x0) const {
  const int N = grid_->size();
  if (static_cast<int>(f.size()) != N) throw ConfigError("mode_solve: profile length mismatch");
  for (const auto& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("mode_solve: inhomogeneity is not finite");
  const double h = grid_->step();
  const double rh = root_ * h;
  const double decay = std::exp(-rh);

  // j_i = e^{-S_i} int_0^{x_i} t^{n-1} H2 f, k_i = e^{S_i} ... in mantissa form.
  CProfile g2(N), g1(N);
  for (int i = 0; i < N; ++i) {
    g2[i] = weight_[i] * h2_[i] * f[i];
    g1[i] = weight_[i] * h1_[i] * f[i];
  }
  CProfile j(N), k(N);
  // Leading term of the inner tail: int_0^x t^m e^{-c/sqrt t} ~ (2/c) x^{m+3/2} e^{-c/sqrt x}.
  const double xl = grid_->x(N - 1);
  j[N - 1] = std::pow(xl, 1.5) * std::pow(xl, n_ - 1) * h2_[N - 1] * f[N - 1] / std::sqrt(lambda_);
  for (int i = N - 2; i >= 0; --i)
    j[i] = decay * j[i + 1] + h * weighted_interval(g2, i, rh, -1.0, N);
  k[0] = 0.0;
  for (int i = 1; i < N; ++i)
    k[i] = decay * k[i - 1] + h * weighted_interval(g1, i - 1, rh, +1.0, N);

  const cplx p = h1_[0] * j[0];
  CProfile v(N);
  for (int i = 0; i < N; ++i)
    v[i] = (v_x0 + 2.0 * p) * decay_ratio(i) - 2.0 * h1_[i] * j[i] - 2.0 * h2_[i] * k[i];
  v[0] = v_x0;
  return v;
}

CProfile mode_solve(const ModeProblem& p) {
  if (!p.grid) throw ConfigError("mode_solve: grid missing");
  return ModeKernel(p.n, p.lambda, p.grid).solve(p.f, p.v_x0);
}

CProfile mode_residual(int n, double lambda, const RadialGrid& grid, const CProfile& v,
                       const CProfile& f) {
  CProfile d1, d2;
  grid.differentiate(v, d1, d2);
  CProfile r(v.size(), cplx(0.0));
  for (int i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid.x(i);
    r[i] = x * x * d2[i] + (n + 1.0) * x * d1[i] - (n + 1.0) * v[i] - lambda / x * v[i] - f[i];
  }
  return r;
}

TorusFunction sample_boundary(const spectrum::TorusBasis& basis,
                              const std::function<double(const Eigen::VectorXd&)>& beta) {
  std::vector<double> vals(basis.points());
  for (int p = 0; p < basis.points(); ++p) vals[p] = beta(basis.point(p));
  TorusFunction c(basis.size());
  basis.analyze(vals.data(), c.data());
  return c;
}

GreenOperator::GreenOperator(const CuspModel& model, std::shared_ptr<const RadialGrid> grid,
                             std::shared_ptr<const spectrum::TorusBasis> basis)
    : n_(model.n), grid_(std::move(grid)), basis_(std::move(basis)) {
  const auto& lams = basis_->distinct_lambdas();
  kernels_.resize(lams.size());
  for (size_t c = 1; c < lams.size(); ++c)
    kernels_[c] = std::make_unique<ModeKernel>(n_, lams[c], grid_);
}

Field GreenOperator::apply(const TorusFunction& boundary, const Field& g) const {
  if (static_cast<int>(boundary.size()) != basis_->size())
    throw ConfigError("green operator: boundary has the wrong number of coefficients");
  Field u = Field::zeros(grid_, basis_);
  for (int k = 0; k < basis_->size(); ++k) {
    const int cls = basis_->lambda_class(k);
    if (cls == 0) {
      Profile g0(grid_->size());
      for (int i = 0; i < grid_->size(); ++i) g0[i] = g.modes[k][i].real();
      const Profile u0 = radial::radial_rep_l0(n_, *grid_, g0, boundary[k].real());
      for (int i = 0; i < grid_->size(); ++i) u.modes[k][i] = u0[i];
    } else {
      u.modes[k] = kernels_[cls]->solve(g.modes[k], boundary[k]);
    }
  }
  return u;
}

Field assemble_representation(const CuspModel& model, const TorusFunction& boundary,
                              const Field& g, double tail_tol) {
  if (g.tail_norm > tail_tol)
    throw NumericalError("assemble_representation: tail norm " + std::to_string(g.tail_norm) +
                         " above tolerance");
  return GreenOperator(model, g.grid, g.basis).apply(boundary, g);
}

PicardState picard_solve(const CuspModel& model, const TorusFunction& boundary,
                         std::shared_ptr<const RadialGrid> grid,
                         std::shared_ptr<const spectrum::TorusBasis> basis,
                         const PicardOptions& opt) {
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ConfigError("picard: bad tolerance or max_iter");
  const double eps = std::numeric_limits<double>::epsilon();
  GreenOperator green(model, grid, basis);
  PicardState st;
  st.iterate = green.apply(boundary, Field::zeros(grid, basis));
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Field g = geometry::nonlinear_source(model, st.iterate);
    st.tail_norm = std::max(st.tail_norm, g.tail_norm);
    if (g.tail_norm > opt.tail_tol)
      throw NumericalError("picard: tail indicator " + std::to_string(g.tail_norm) +
                           " above tolerance; raise the mode cutoff");
    Field next = green.apply(boundary, g);
    const double change = (next - st.iterate).sup_coefficient();
    const double size = next.sup_coefficient();
    if (!st.changes.empty()) {
      const double prev = st.changes.back();
      st.contraction_history.push_back(prev > 0.0 ? change / prev : 0.0);
      if (it > 2 && change > prev && change > 100.0 * eps * size)
        throw NonContraction("picard: iteration " + std::to_string(it) + " increased the change to " +
                             std::to_string(change));
    }
    st.changes.push_back(change);
    st.iterate = std::move(next);
    st.iteration = it;
    st.sup_change = change;
    if (change < opt.tol) {
      st.residual = geometry::monge_ampere_residual_report(model, st.iterate).sup_interior;
      return st;
    }
  }
  throw NumericalError("picard: no convergence within " + std::to_string(opt.max_iter) +
                       " iterations (last change " + std::to_string(st.sup_change) + ")");
}

Profile tangent_cone_profile(int n, const RadialGrid& grid, double c) {
  Profile p(grid.size());
  for (int i = 0; i < grid.size(); ++i) p[i] = -(n + 1.0) * std::log1p(c * grid.x(i));
  return p;
}

TangentCone extract_tangent_cone(const Field& u, double max_rms) {
  const int n = u.basis->model().n;
  const int N = u.nodes();
  const Profile u0 = u.mean();
  const int lo = N / 2;
  // Linear start from the pointwise inversion, then Gauss-Newton.
  double num = 0.0, den = 0.0;
  for (int i = lo; i < N; ++i) {
    const double x = u.grid->x(i);
    const double ci = std::expm1(-u0[i] / (n + 1.0)) / x;
    num += ci * x * x;
    den += x * x;
  }
  double c = num / den;
  for (int it = 0; it < 50; ++it) {
    double jr = 0.0, jj = 0.0;
    for (int i = lo; i < N; ++i) {
      const double x = u.grid->x(i);
      const double r = u0[i] + (n + 1.0) * std::log1p(c * x);
      const double d = (n + 1.0) * x / (1.0 + c * x);
      jr += d * r;
      jj += d * d;
    }
    const double step = jr / jj;
    c -= step;
    if (std::abs(step) <= 1e-15 * std::max(1e-300, std::abs(c))) break;
  }
  double ss = 0.0;
  for (int i = lo; i < N; ++i) {
    const double r = u0[i] + (n + 1.0) * std::log1p(c * u.grid->x(i));
    ss += r * r;
  }
  TangentCone tc{c, std::sqrt(ss / (N - lo))};
  if (!(tc.rms <= max_rms))
    throw NumericalError("extract_tangent_cone: fit rms " + std::to_string(tc.rms) +
                         " above tolerance");
  return tc;
}

Profile first_eigenspace_profile(const Field& u) {
  Profile p(u.nodes(), 0.0);
  for (int k = 0; k < u.basis->size(); ++k) {
    if (u.basis->lambda_class(k) != 1) continue;
    for (int i = 0; i < u.nodes(); ++i) p[i] += std::norm(u.modes[k][i]);
  }
  for (auto& v : p) v = std::sqrt(v);
  return p;
}

}  // namespace cuspke::modes

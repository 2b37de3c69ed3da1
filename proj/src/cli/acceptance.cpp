#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cuspke/analysis.hpp"
#include "cuspke/bessel.hpp"
#include "cuspke/cli.hpp"
#include "cuspke/errors.hpp"
#include "cuspke/geometry.hpp"
#include "cuspke/radial.hpp"

namespace cuspke::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

CuspModel lattice_model(double b00, double b10, double b01, double b11, double a) {
  CuspModel m = CuspModel::standard(2);
  m.lattice << b00, b01, b10, b11;
  m.A(0, 0) = a;
  return m;
}

CriterionResult a1(Config&) {
  CriterionResult r{"A1", "Bessel identity suite"};
  double worst = 0.0, worst_s = 0.0;
  int worst_a = 0;
  for (int alpha = 4; alpha <= 8; ++alpha)
    for (int i = 0; i < 120; ++i) {
      const double s = std::exp(std::log(0.5) + (std::log(500.0) - std::log(0.5)) * i / 119.0);
      const auto w = bessel::wronskian_residuals(alpha, s);
      const double v = std::max(w.abel, w.mode);
      if (v > worst) {
        worst = v;
        worst_s = s;
        worst_a = alpha;
      }
    }
  r.pass = worst <= 1e-9;
  r.metrics = {{"max_residual", worst}, {"worst_alpha", worst_a}, {"worst_s", worst_s}};
  r.summary = "max Wronskian residual " + fmt(worst) + " (limit 1e-9)";
  return r;
}

CriterionResult a2(Config&) {
  CriterionResult r{"A2", "Formal expansion vs closed form"};
  double worst = 0.0;
  for (int n : {2, 3})
    for (double c : {0.1, 0.5, 2.0}) {
      const auto s = radial::expand_formal(n, -(n + 1.0) * c, 20);
      for (int k = 1; k <= 20; ++k) {
        const double t = radial::tangent_cone_coefficient(n, c, k);
        worst = std::max(worst, std::abs(s.coeff(k) - t) / std::abs(t));
      }
    }
  r.pass = worst <= 1e-12;
  r.metrics = {{"max_relative_error", worst}};
  r.summary = "max relative coefficient error " + fmt(worst) + " (limit 1e-12)";
  return r;
}

CriterionResult a3(Config&) {
  CriterionResult r{"A3", "Calabi family"};
  double sup_err = 0.0, drift = 0.0, limit_err = 0.0;
  for (int n : {2, 3}) {
    const double a = n * std::log(n + 1.0);
    const auto tr = radial::integrate_calabi(n, a, 0.0, -1.0, 0.0, -50.0, 1e-13, 491);
    for (size_t i = 0; i < tr.psi.size(); ++i)
      sup_err = std::max(sup_err, std::abs(tr.psi[i] + (n + 1.0) * std::log(-tr.t_nodes[i])));
    drift = std::max(drift, tr.max_drift());
    for (double b : {1.0 / (n + 1), 3.0}) {
      const double c = std::pow((n + 1.0) * b, 1.0 / (n + 1));
      limit_err = std::max(limit_err, std::abs(radial::empirical_psi_prime_limit(n, b) - c));
      const auto tb = radial::integrate_calabi(n, 0.0, b, 0.0, 0.0, -40.0, 1e-12, 81);
      drift = std::max(drift, tb.max_drift());
    }
  }
  r.pass = sup_err <= 1e-8 && drift <= 1e-10 && limit_err <= 1e-3;
  r.metrics = {{"standard_sup_error", sup_err}, {"first_integral_drift", drift},
               {"cone_limit_error", limit_err}};
  r.summary = "b=0 error " + fmt(sup_err) + ", drift " + fmt(drift) + ", psi' limit error " +
              fmt(limit_err);
  return r;
}

}  // namespace

double green_relative_residual(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                               const std::vector<double>& coef) {
  CProfile f(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double s = grid->s(i);
    cplx v = 0.0;
    for (int j = 0; j < 3; ++j)
      v += cplx(coef[4 * j], coef[4 * j + 1]) * std::cos(coef[4 * j + 2] * s + coef[4 * j + 3]);
    f[i] = v;
  }
  const CProfile v = modes::ModeKernel(n, lambda, grid).solve(f, 0.0);
  const CProfile res = modes::mode_residual(n, lambda, *grid, v, f);
  double rmax = 0.0, fmax = 0.0;
  for (int i = 0; i < grid->size(); ++i) {
    fmax = std::max(fmax, std::abs(f[i]));
    if (grid->interior(i)) rmax = std::max(rmax, std::abs(res[i]));
  }
  return rmax / fmax;
}

namespace {

CriterionResult a4(Config& cfg) {
  CriterionResult r{"A4", "Green-operator inverse property"};
  const CuspModel m = CuspModel::standard(2);
  const auto entries = spectrum::eigenvalues_below(m, 2.5 * kPi * kPi);
  std::vector<double> lams;
  for (const auto& e : entries)
    if (e.lambda > 0 && (lams.empty() || e.lambda > lams.back() * (1 + 1e-10))) lams.push_back(e.lambda);
  const double lam1 = lams.at(0), lam2 = lams.at(1);
  // Truncation error grows roughly like lambda h^2, so the step shrinks with sqrt(lambda).
  // Below ~1e-4 FD rounding in the residual (eps/h^2) swamps the order estimate.
  const double step = cfg.number("acceptance.a4_step", 3e-4);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 3.0), phase(0.0, 2 * kPi);
  double worst = 0.0, min_order = 1e300, max_order = -1e300;
  json per = json::array();
  int nodes = 0;
  for (double lam : {lam1, lam2, 10.0 * lam1}) {
    const double h = step * std::sqrt(lam1 / lam);
    auto grid = std::make_shared<const RadialGrid>(RadialGrid::with_step(0.05, 10.0, 2.0 * h));
    auto fine = std::make_shared<const RadialGrid>(grid->refined());
    nodes = std::max(nodes, fine->size());
    double lw = 0.0;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> coef;
      for (int j = 0; j < 3; ++j) {
        coef.push_back(amp(rng));
        coef.push_back(amp(rng));
        coef.push_back(freq(rng));
        coef.push_back(phase(rng));
      }
      const double rc = green_relative_residual(2, lam, grid, coef);
      const double rf = green_relative_residual(2, lam, fine, coef);
      const double order = std::log2(rc / rf);
      lw = std::max(lw, rf);
      min_order = std::min(min_order, order);
      max_order = std::max(max_order, order);
    }
    worst = std::max(worst, lw);
    per.push_back({{"lambda", lam}, {"step", h}, {"max_relative_residual", lw}});
  }
  r.pass = worst <= 1e-6 && min_order >= 1.8 && max_order <= 2.2;
  r.metrics = {{"max_relative_residual", worst}, {"min_order", min_order},
               {"max_order", max_order}, {"per_lambda", per}, {"max_nodes", nodes}};
  r.summary = "max relative residual " + fmt(worst) + ", refinement order in [" + fmt(min_order) +
              ", " + fmt(max_order) + "]";
  return r;
}

CriterionResult a5(Config& cfg) {
  CriterionResult r{"A5", "Sharp-rate reproduction"};
  const auto t0 = std::chrono::steady_clock::now();
  const CuspModel m = CuspModel::standard(2);
  auto basis = std::make_shared<const spectrum::TorusBasis>(m, 9.0);
  const double lam1 = basis->lambda1();
  const double step = cfg.number("acceptance.a5_step", 5e-4);
  const double s_max = 1.02 * 200.0 / (2.0 * std::sqrt(lam1));
  auto grid = std::make_shared<const RadialGrid>(RadialGrid::with_step(0.05, s_max, step));
  const auto bd = modes::sample_boundary(
      *basis, [](const Eigen::VectorXd& v) { return 1e-3 * std::cos(2 * kPi * v(0)); });
  const auto st = modes::picard_solve(m, bd, grid, basis, {});
  const auto cone = modes::extract_tangent_cone(st.iterate);
  const Profile prof = modes::first_eigenspace_profile(st.iterate);
  const auto fit = analysis::decay_fit(grid->xs(), prof, analysis::window_x(lam1, 200.0),
                                       analysis::window_x(lam1, 40.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double delta_rel = std::abs(fit.delta / (2.0 * std::sqrt(lam1)) - 1.0);
  r.pass = st.residual <= 1e-7 && delta_rel <= 0.02 && std::abs(fit.p + 0.75) <= 0.1 && secs < 300;
  r.metrics = {{"lambda1", lam1},          {"iterations", st.iteration},
               {"sup_change", st.sup_change}, {"residual", st.residual},
               {"tail_indicator", st.tail_norm}, {"cone_c", cone.c},
               {"delta", fit.delta},        {"delta_target", 2.0 * std::sqrt(lam1)},
               {"p", fit.p},                {"p_target", -0.75},
               {"fit_rms", fit.rms},        {"fit_nodes", fit.nodes},
               {"nodes", grid->size()},     {"contraction", st.contraction_history}};
  r.summary = "residual " + fmt(st.residual) + ", delta " + fmt(fit.delta) + " (2pi " +
              fmt(2 * std::sqrt(lam1)) + "), p " + fmt(fit.p) + ", " + std::to_string(st.iteration) +
              " iterations";
  return r;
}

CriterionResult a6(Config& cfg) {
  CriterionResult r{"A6", "Tangent-cone exactness"};
  const auto t0 = std::chrono::steady_clock::now();
  const CuspModel m = CuspModel::standard(2);
  auto basis = std::make_shared<const spectrum::TorusBasis>(m, 9.0);
  const double x0 = 0.05, c = 0.2;
  const double step = cfg.number("acceptance.a6_step", 2e-3);
  auto grid = std::make_shared<const RadialGrid>(
      RadialGrid::with_step(x0, 1.02 * 200.0 / (2.0 * std::sqrt(basis->lambda1())), step));
  const double value = -3.0 * std::log1p(c * x0);
  const auto bd = modes::sample_boundary(*basis, [&](const Eigen::VectorXd&) { return value; });
  const auto st = modes::picard_solve(m, bd, grid, basis, {});
  const Profile exact = modes::tangent_cone_profile(2, *grid, c);
  Field diff = st.iterate;
  for (int i = 0; i < grid->size(); ++i) diff.modes[0][i] -= exact[i];
  const double sup = diff.sup_coefficient();
  const auto cone = modes::extract_tangent_cone(st.iterate);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = sup <= 1e-7 && std::abs(cone.c - c) <= 1e-6 && secs < 60;
  r.metrics = {{"sup_error", sup}, {"cone_c", cone.c}, {"iterations", st.iteration},
               {"residual", st.residual}};
  r.summary = "sup error " + fmt(sup) + ", c = " + fmt(cone.c);
  return r;
}

CriterionResult a7(Config&) {
  CriterionResult r{"A7", "Integral ratio bounds"};
  bool ok = true;
  json per = json::array();
  for (auto [c, k] : std::vector<std::pair<double, double>>{{2, 0}, {2, -1.4}, {5, 3}}) {
    const auto rep = analysis::tail_ratio_check(c, k, 1.0, 1.0);
    ok = ok && rep.pass();
    per.push_back({{"c", c},
                   {"k", k},
                   {"sup_r1", rep.sup_r1},
                   {"r1_limit", rep.r1_limit},
                   {"sup_r2", rep.sup_r2},
                   {"x0_admissible", rep.x0_admissible},
                   {"pass", rep.pass()}});
  }
  r.pass = ok;
  r.metrics = {{"cases", per}};
  std::ostringstream os;
  for (const auto& p : per)
    os << "(c=" << p["c"].get<double>() << ",k=" << p["k"].get<double>()
       << "): sup R1 " << fmt(p["sup_r1"].get<double>()) << ", R1(0) " << fmt(p["r1_limit"].get<double>())
       << ", sup R2 " << fmt(p["sup_r2"].get<double>()) << "; ";
  r.summary = os.str();
  return r;
}

CriterionResult a8(Config&) {
  CriterionResult r{"A8", "Spectrum oracle"};
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CuspModel> models = {lattice_model(1, 0, 0, 1, 1.0),
                                         lattice_model(1, 0, 0, 2, 1.0),
                                         lattice_model(1, 0, 0.4, 1.3, 1.6)};
  bool ok = true;
  json per = json::array();
  double worst = 0.0, min_order = 1e300, max_order = -1e300;
  for (const auto& m : models) {
    const double exact = spectrum::first_eigenvalue(m);
    std::vector<double> err;
    for (int res : {32, 64, 128}) err.push_back(std::abs(fd_torus_eigenvalues(m, res, 1)[0] - exact) / exact);
    const double order = std::log2(err[1] / err[2]);
    worst = std::max(worst, err[2]);
    min_order = std::min(min_order, order);
    max_order = std::max(max_order, order);
    ok = ok && err[2] <= 5e-3 && order >= 1.8 && order <= 2.2;
    per.push_back({{"lambda1", exact}, {"rel_error_128", err[2]}, {"order", order}});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = ok && secs < 30;
  r.metrics = {{"configs", per}, {"max_rel_error", worst}};
  r.summary = "max relative error at 128^2 " + fmt(worst) + ", observed order in [" +
              fmt(min_order) + ", " + fmt(max_order) + "]";
  return r;
}

CriterionResult a9(Config&) {
  CriterionResult r{"A9", "Geometry suite"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Metric times inverse, both frames, n = 2 and 3.
  double inv_err = 0.0;
  for (int n : {2, 3}) {
    CuspModel m = CuspModel::standard(n);
    if (n == 3) {
      m.A << cplx(2.0, 0.0), cplx(0.3, 0.4), cplx(0.3, -0.4), cplx(1.0, 0.0);
      m.lattice(0, 1) = 0.3;
    }
    for (int t = 0; t < 100; ++t) {
      CuspPoint p;
      Eigen::VectorXd w(m.real_dim());
      for (int i = 0; i < w.size(); ++i) w(i) = u01(rng);
      p.z = m.to_complex(m.lattice * w);
      p.x = 0.02 + 0.9 * u01(rng);
      p.theta = 2 * kPi * u01(rng);
      for (auto fr : {geometry::Frame::Holomorphic, geometry::Frame::LogRadial}) {
        const auto g = geometry::metric_coefficients(m, p, fr).entries;
        const auto gi = geometry::inverse_metric(m, p, fr).entries;
        inv_err = std::max(inv_err, (g * gi - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
      }
    }
  }

  // det(g_eps)/eps^2 across eps.
  double det_spread = 0.0;
  {
    const CuspModel m = CuspModel::standard(2);
    for (int t = 0; t < 10; ++t) {
      CuspPoint p;
      p.z = Eigen::VectorXcd::Constant(1, cplx(u01(rng), u01(rng)));
      std::vector<double> ratios;
      for (double e : {0.1, 0.05, 0.01}) {
        const auto g = geometry::cross_section_metric(m, e, p);
        ratios.push_back(g.determinant() / (e * e));
      }
      for (double v : ratios) det_spread = std::max(det_spread, std::abs(v / ratios[0] - 1.0));
    }
  }

  // Indicial polynomial: linearized_apply on x^p vs barrier_sign.
  const CuspModel m2 = CuspModel::standard(2);
  auto basis = std::make_shared<const spectrum::TorusBasis>(m2, 9.0);
  auto grid = std::make_shared<const RadialGrid>(RadialGrid::with_step(0.5, 4.0, 2.5e-4));
  double indicial_err = 0.0;
  json indicial = json::array();
  for (double p : {-3.0, 0.5, 1.0, 2.0, 3.0}) {
    Profile prof(grid->size());
    for (int i = 0; i < grid->size(); ++i) prof[i] = std::pow(grid->x(i), p);
    const Field lf = geometry::linearized_apply(m2, Field::radial(grid, basis, prof));
    double e = 0.0;
    for (int i = 1; i + 1 < grid->size(); ++i)
      e = std::max(e, std::abs(lf.modes[0][i].real() / prof[i] - analysis::barrier_sign(2, p)));
    indicial_err = std::max(indicial_err, e);
    indicial.push_back({{"p", p}, {"barrier_sign", analysis::barrier_sign(2, p)}, {"max_error", e}});
  }

  // Quadratic smallness of M_h - L_h.
  Field base = Field::zeros(grid, basis);
  const int kp = basis->index_of(Eigen::Vector2i(1, 0)), km = basis->index_of(Eigen::Vector2i(-1, 0));
  for (int i = 0; i < grid->size(); ++i) {
    const double x2 = grid->x(i) * grid->x(i);
    base.modes[0][i] = x2;
    base.modes[kp][i] = 0.5 * x2;
    base.modes[km][i] = 0.5 * x2;
  }
  std::vector<double> le, ld;
  for (double e : {1e-2, 1e-3, 1e-4}) {
    const Field f = e * base;
    const Field d = geometry::monge_ampere_residual(m2, f) - geometry::linearized_apply(m2, f);
    le.push_back(std::log(e));
    ld.push_back(std::log(d.sup_coefficient(true)));
  }
  const double mx = (le[0] + le[1] + le[2]) / 3, my = (ld[0] + ld[1] + ld[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (le[i] - mx) * (ld[i] - my);
    sxx += (le[i] - mx) * (le[i] - mx);
  }
  const double slope = sxy / sxx;

  r.pass = inv_err <= 1e-10 && det_spread <= 1e-8 && indicial_err <= 1e-5 && std::abs(slope - 2) <= 0.1;
  r.metrics = {{"inverse_error", inv_err}, {"det_ratio_spread", det_spread},
               {"indicial_error", indicial_err}, {"indicial", indicial},
               {"linearization_slope", slope}};
  r.summary = "inverse error " + fmt(inv_err) + ", det spread " + fmt(det_spread) +
              ", indicial error " + fmt(indicial_err) + ", slope " + fmt(slope);
  return r;
}

const std::map<std::string, std::function<CriterionResult(Config&)>>& table() {
  static const std::map<std::string, std::function<CriterionResult(Config&)>> t = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  return t;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"};
  return ids;
}

CriterionResult run_criterion(const std::string& id, Config& cfg) {
  const auto it = table().find(id);
  if (it == table().end()) throw ConfigError("unknown acceptance criterion " + id);
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = it->second(cfg);
  } catch (const NumericalError& e) {
    r.id = id;
    r.pass = false;
    r.summary = std::string("numerical failure: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(Config& cfg, const std::vector<std::string>& ids) {
  std::vector<CriterionResult> out;
  for (const auto& id : ids) out.push_back(run_criterion(id, cfg));
  return out;
}

}  // namespace cuspke::cli

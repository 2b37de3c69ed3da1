#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
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

struct Outcome {
  CsvTable table;
  json results = json::object();
  bool failed = false;  // acceptance failure, report only
};

using Command = std::function<Outcome(Config&)>;

Outcome geometry_check(Config& cfg) {
  const CuspModel m = cfg.model();
  const int points = cfg.integer("geometry.points", 100);
  const auto seed = static_cast<unsigned>(cfg.integer("geometry.seed", 7));
  const auto eps = cfg.numbers("geometry.eps", {0.1, 0.05, 0.01});
  const double x_lo = cfg.number("geometry.x_min", 0.02), x_hi = cfg.number("geometry.x_max", 0.92);
  if (points < 1 || eps.empty()) throw ConfigError("geometry.points and geometry.eps must be nonempty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Outcome o;
  o.table.header = {"point", "x", "inverse_error_holomorphic", "inverse_error_log_radial",
                    "hermitian_defect", "min_eigenvalue", "det_ratio_spread"};
  double worst_inv = 0.0, worst_herm = 0.0, min_eig = std::numeric_limits<double>::infinity(),
         worst_det = 0.0;
  for (int t = 0; t < points; ++t) {
    CuspPoint p;
    Eigen::VectorXd w(m.real_dim());
    for (int i = 0; i < w.size(); ++i) w(i) = u01(rng);
    p.z = m.to_complex(m.lattice * w);
    p.x = x_lo + (x_hi - x_lo) * u01(rng);
    p.theta = 2 * kPi * u01(rng);
    double inv[2];
    int k = 0;
    double herm = 0.0, eig = 0.0;
    for (auto fr : {geometry::Frame::Holomorphic, geometry::Frame::LogRadial}) {
      // last slot carries 1/z_n in the holomorphic frame; compare at unit scale
      Eigen::VectorXd dd = Eigen::VectorXd::Ones(m.n);
      if (fr == geometry::Frame::Holomorphic) dd(m.n - 1) = std::abs(geometry::zn(m, p));
      const Eigen::MatrixXcd g = dd.asDiagonal() * geometry::metric_coefficients(m, p, fr).entries * dd.asDiagonal();
      const Eigen::MatrixXcd gi =
          dd.cwiseInverse().asDiagonal() * geometry::inverse_metric(m, p, fr).entries * dd.cwiseInverse().asDiagonal();
      inv[k++] = (g * gi - Eigen::MatrixXcd::Identity(m.n, m.n)).cwiseAbs().maxCoeff();
      if (fr == geometry::Frame::LogRadial) {
        herm = (g - g.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        eig = es.eigenvalues().minCoeff();
      }
    }
    std::vector<double> ratios;
    for (double e : eps) ratios.push_back(geometry::cross_section_metric(m, e, p).determinant() / (e * e));
    double spread = 0.0;
    for (double r : ratios) spread = std::max(spread, std::abs(r / ratios[0] - 1.0));
    worst_inv = std::max({worst_inv, inv[0], inv[1]});
    worst_herm = std::max(worst_herm, herm);
    min_eig = std::min(min_eig, eig);
    worst_det = std::max(worst_det, spread);
    o.table.add({double(t), p.x, inv[0], inv[1], herm, eig, spread});
  }
  const auto nc = geometry::normal_and_mean_curvature(m, eps.front());
  o.results = {{"max_inverse_error", worst_inv},
               {"max_hermitian_defect", worst_herm},
               {"min_metric_eigenvalue_log_radial", min_eig},
               {"max_det_ratio_spread", worst_det},
               {"normal_coefficient", nc.normal},
               {"mean_curvature", nc.mean_curvature}};
  return o;
}

Outcome spectrum_cmd(Config& cfg) {
  const CuspModel m = cfg.model();
  const int count = cfg.integer("spectrum.count", 12);
  const auto entries = spectrum::eigenvalues_up_to(m, count);
  Outcome o;
  const int D = m.real_dim();
  o.table.header = {"index"};
  for (int i = 1; i <= D; ++i) o.table.header.push_back("m_" + std::to_string(i));
  for (int i = 1; i <= D; ++i) o.table.header.push_back("xi_" + std::to_string(i));
  o.table.header.push_back("lambda");
  for (size_t k = 0; k < entries.size(); ++k) {
    std::vector<std::string> row = {std::to_string(k)};
    for (int i = 0; i < D; ++i) row.push_back(std::to_string(entries[k].m(i)));
    for (int i = 0; i < D; ++i) row.push_back(format_number(entries[k].xi(i)));
    row.push_back(format_number(entries[k].lambda));
    o.table.add_cells(row);
  }
  o.results = {{"lambda1", spectrum::first_eigenvalue(m)}, {"count", count}};
  return o;
}

Outcome calabi_cmd(Config& cfg) {
  const int n = cfg.integer("calabi.n", 2);
  const double a = cfg.number("calabi.a", n * std::log(n + 1.0));
  const double b = cfg.number("calabi.b", 0.0);
  const double t0 = cfg.number("calabi.t0", -1.0), psi0 = cfg.number("calabi.psi0", 0.0);
  const double t_end = cfg.number("calabi.t_end", -50.0);
  const double tol = cfg.number("calabi.tol", 1e-12);
  const int samples = cfg.integer("calabi.samples", 491);
  Outcome o;
  o.results["n"] = n;
  o.results["b"] = b;
  if (b < 0.0) o.results["t_barrier"] = radial::calabi_barrier(n, a, b, t0, psi0);
  const auto tr = radial::integrate_calabi(n, a, b, t0, psi0, t_end, tol, samples);
  o.table.header = {"t", "psi", "psi_prime", "first_integral"};
  for (size_t i = 0; i < tr.psi.size(); ++i)
    o.table.add({tr.t_nodes[i], tr.psi[i], tr.psi_prime[i], tr.first_integral(static_cast<int>(i))});
  o.results["first_integral_drift"] = tr.max_drift();
  if (b > 0.0) {
    const auto ca = radial::cone_angle(n, b);
    o.results["c"] = std::pow((n + 1.0) * b, 1.0 / (n + 1));
    o.results["cone_angle"] = ca.angle;
    o.results["empirical_cone_angle"] = ca.empirical_angle;
  }
  return o;
}

Outcome bessel_sweep(Config& cfg) {
  const int a_lo = cfg.integer("bessel.alpha_min", 4), a_hi = cfg.integer("bessel.alpha_max", 8);
  const double s_lo = cfg.number("bessel.s_min", 0.5), s_hi = cfg.number("bessel.s_max", 500.0);
  const int pts = cfg.integer("bessel.points", 120);
  if (pts < 2 || a_lo > a_hi || !(s_lo > 0 && s_lo < s_hi)) throw ConfigError("bessel: bad sweep range");
  Outcome o;
  o.table.header = {"alpha", "s", "i_mantissa", "k_mantissa", "abel_residual", "mode_residual"};
  double worst = 0.0;
  for (int a = a_lo; a <= a_hi; ++a)
    for (int i = 0; i < pts; ++i) {
      const double s = std::exp(std::log(s_lo) + (std::log(s_hi) - std::log(s_lo)) * i / (pts - 1));
      const auto w = bessel::wronskian_residuals(a, s);
      worst = std::max({worst, w.abel, w.mode});
      o.table.add({double(a), s, bessel::bessel_i_scaled(a, s).mantissa,
                   bessel::bessel_k_scaled(a, s).mantissa, w.abel, w.mode});
    }
  o.results = {{"max_residual", worst}};
  return o;
}

Outcome expand_cmd(Config& cfg) {
  const int n = cfg.integer("expand.n", 2);
  const double c = cfg.number("expand.c", 1.0);
  const int K = cfg.integer("expand.K", 20);
  const auto s = radial::expand_formal(n, -(n + 1.0) * c, K);
  Outcome o;
  o.table.header = {"k", "coefficient", "closed_form", "relative_error"};
  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double t = radial::tangent_cone_coefficient(n, c, k);
    const double e = t == 0.0 ? std::abs(s.coeff(k)) : std::abs(s.coeff(k) - t) / std::abs(t);
    worst = std::max(worst, e);
    o.table.add({double(k), s.coeff(k), t, e});
  }
  double res = 0.0;
  for (double r : radial::series_residual(s, K)) res = std::max(res, std::abs(r));
  o.results = {{"max_relative_error", worst}, {"max_series_residual", res}};
  return o;
}

Outcome green_test(Config& cfg) {
  const CuspModel m = cfg.model();
  const int samples = cfg.integer("green.samples", 20);
  const auto seed = static_cast<unsigned>(cfg.integer("green.seed", 20240601));
  const double x0 = cfg.number("green.x0", 0.05), s_max = cfg.number("green.s_max", 10.0);
  const double step = cfg.number("green.step", 3e-4);
  const auto factors = cfg.numbers("green.extra_lambda_factors", {10.0});
  std::vector<double> lams;
  for (const auto& e : spectrum::eigenvalues_up_to(m, 64))
    if (e.lambda > 0 && (lams.empty() || e.lambda > lams.back() * (1 + 1e-10))) lams.push_back(e.lambda);
  if (lams.size() < 2) throw NumericalError("green-test: fewer than two distinct eigenvalues found");
  std::vector<double> targets = {lams[0], lams[1]};
  for (double f : factors) targets.push_back(f * lams[0]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 3.0), phase(0.0, 2 * kPi);
  Outcome o;
  o.table.header = {"lambda", "step", "sample", "relative_residual_coarse", "relative_residual", "order"};
  double worst = 0.0;
  json steps = json::array();
  for (double lam : targets) {
    // step scales like sqrt(lambda1 / lambda); residual reported on the finer grid
    const double h = step * std::sqrt(lams[0] / lam);
    steps.push_back(h);
    auto coarse = std::make_shared<const RadialGrid>(RadialGrid::with_step(x0, s_max, 2.0 * h));
    auto grid = std::make_shared<const RadialGrid>(coarse->refined());
    for (int t = 0; t < samples; ++t) {
      std::vector<double> coef;
      for (int j = 0; j < 3; ++j) coef.insert(coef.end(), {amp(rng), amp(rng), freq(rng), phase(rng)});
      const double rc = green_relative_residual(m.n, lam, coarse, coef);
      const double rf = green_relative_residual(m.n, lam, grid, coef);
      worst = std::max(worst, rf);
      o.table.add({lam, h, double(t), rc, rf, std::log2(rc / rf)});
    }
  }
  o.results = {{"max_relative_residual", worst}, {"steps", steps}, {"lambdas", targets}};
  return o;
}

struct Solved {
  CuspModel model;
  std::shared_ptr<const RadialGrid> grid{};
  std::shared_ptr<const spectrum::TorusBasis> basis{};
  modes::PicardState state{};
  modes::TangentCone cone{};
};

Solved solve_from(Config& cfg) {
  Solved s{cfg.model()};
  s.basis = cfg.basis(s.model);
  s.grid = cfg.grid(s.basis->lambda1());
  const auto bd = cfg.boundary(s.model, *s.basis);
  s.state = modes::picard_solve(s.model, bd, s.grid, s.basis, cfg.picard());
  s.cone = modes::extract_tangent_cone(s.state.iterate, std::numeric_limits<double>::infinity());
  return s;
}

json solve_results(const Solved& s) {
  return {{"lambda1", s.basis->lambda1()},
          {"modes", s.basis->size()},
          {"torus_resolution", s.basis->resolution()},
          {"nodes", s.grid->size()},
          {"iterations", s.state.iteration},
          {"sup_change", s.state.sup_change},
          {"changes", s.state.changes},
          {"contraction_history", s.state.contraction_history},
          {"residual", s.state.residual},
          {"tail_indicator", s.state.tail_norm},
          {"c", s.cone.c},
          {"cone_fit_rms", s.cone.rms}};
}

Outcome solve_cmd(Config& cfg) {
  const Solved s = solve_from(cfg);
  const Profile mean = s.state.iterate.mean();
  const Profile cone = modes::tangent_cone_profile(s.model.n, *s.grid, s.cone.c);
  const Profile first = modes::first_eigenspace_profile(s.state.iterate);
  Outcome o;
  o.table.header = {"node", "x", "s", "u_mean", "tangent_cone", "u_mean_minus_cone", "lambda1_profile"};
  for (int i = 0; i < s.grid->size(); ++i)
    o.table.add({double(i), s.grid->x(i), s.grid->s(i), mean[i], cone[i], mean[i] - cone[i], first[i]});
  o.results = solve_results(s);
  return o;
}

Outcome rate_fit(Config& cfg) {
  const double s_lo = cfg.number("fit.s_bessel_min", 40.0), s_hi = cfg.number("fit.s_bessel_max", 200.0);
  const double N = cfg.number("fit.N", 0.5);
  const Solved s = solve_from(cfg);
  const double lam1 = s.basis->lambda1();
  const Profile first = modes::first_eigenspace_profile(s.state.iterate);
  const double x_lo = analysis::window_x(lam1, s_hi), x_hi = analysis::window_x(lam1, s_lo);
  const auto fit = analysis::decay_fit(s.grid->xs(), first, x_lo, x_hi);
  const auto fixed = analysis::decay_fit(s.grid->xs(), first, x_lo, x_hi, 2.0 * std::sqrt(lam1));
  // Envelope constant from the profile itself on [x_lo, x0].
  double logc = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.grid->size(); ++i)
    if (s.grid->x(i) >= x_lo && first[i] > 0)
      logc = std::max(logc, std::log(first[i]) - analysis::log_envelope(s.model.n, lam1, s.grid->x(i)));
  const double C = std::exp(logc) * 1.01;
  const auto env = analysis::envelope_check(s.grid->xs(), first, s.model.n, lam1, C, x_lo,
                                            s.grid->x0(), N);
  Outcome o;
  o.table.header = {"node", "x", "s_bessel", "lambda1_profile", "fit", "envelope"};
  for (int i = 0; i < s.grid->size(); ++i) {
    const double x = s.grid->x(i);
    const double model = fit.amplitude * std::exp(fit.p * std::log(x) - fit.delta / std::sqrt(x));
    o.table.add({double(i), x, 2.0 * std::sqrt(lam1 / x), first[i], model,
                 C * std::exp(analysis::log_envelope(s.model.n, lam1, x))});
  }
  o.results = solve_results(s);
  o.results["fit"] = {{"delta", fit.delta}, {"p", fit.p}, {"amplitude", fit.amplitude},
                      {"rms", fit.rms}, {"nodes", fit.nodes}, {"x_lo", x_lo}, {"x_hi", x_hi}};
  o.results["fit_fixed_delta"] = {{"delta", fixed.delta}, {"p", fixed.p}, {"rms", fixed.rms}};
  o.results["delta_target"] = 2.0 * std::sqrt(lam1);
  o.results["p_target"] = -0.5 * s.model.n + 0.25;
  o.results["envelope"] = {{"C", C}, {"pass", env.pass}, {"first_violation", env.first_violation},
                           {"min_log_margin", env.min_log_margin}};
  return o;
}

Outcome lemma_cmd(Config& cfg) {
  const double c = cfg.number("tail_ratio.c", 2.0), k = cfg.number("tail_ratio.k", 0.0);
  const double x_max = cfg.number("tail_ratio.x_max", 1.0), eps = cfg.number("tail_ratio.eps", 1.0);
  const int samples = cfg.integer("tail_ratio.samples", 60);
  const double x_min = cfg.number("tail_ratio.x_min", 1e-12);
  const auto rep = analysis::tail_ratio_check(c, k, x_max, eps, samples, x_min);
  Outcome o;
  o.table.header = {"ratio", "x", "value"};
  for (const auto& s : rep.r1) o.table.add_cells({"R1", format_number(s.x), format_number(s.ratio)});
  for (const auto& s : rep.r2) o.table.add_cells({"R2", format_number(s.x), format_number(s.ratio)});
  o.results = {{"sup_r1", rep.sup_r1},           {"r1_limit", rep.r1_limit},
               {"sup_r2", rep.sup_r2},           {"x0_admissible", rep.x0_admissible},
               {"r1_below_two", rep.r1_below_two}, {"r1_limit_ok", rep.r1_limit_ok},
               {"r2_below", rep.r2_below},       {"pass", rep.pass()}};
  return o;
}

Outcome report_cmd(Config& cfg) {
  std::vector<std::string> ids;
  std::istringstream is(cfg.text("report.criteria", "A1 A2 A3 A4 A5 A6 A7 A8 A9"));
  for (std::string id; is >> id;) ids.push_back(id);
  const auto results = run_acceptance(cfg, ids);
  Outcome o;
  o.table.header = {"criterion", "title", "pass", "seconds", "summary"};
  json crit = json::object();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    o.table.add_cells({r.id, r.title, r.pass ? "true" : "false", format_number(r.seconds), r.summary});
    crit[r.id] = {{"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                  {"summary", r.summary}, {"metrics", r.metrics}};
    std::cerr << r.id << (r.pass ? " PASS " : " FAIL ") << r.summary << "\n";
  }
  o.results = {{"criteria", crit}, {"all_pass", all}};
  o.failed = !all;
  return o;
}

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> t = {
      {"geometry-check", geometry_check}, {"spectrum", spectrum_cmd}, {"calabi", calabi_cmd},
      {"bessel-sweep", bessel_sweep},     {"expand", expand_cmd},     {"green-test", green_test},
      {"solve", solve_cmd},               {"rate-fit", rate_fit},     {"lemma43", lemma_cmd},
      {"report", report_cmd}};
  return t;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : command_table()) v.push_back(k);
    return v;
  }();
  return names;
}

int run(const std::string& command, const std::string& config_path, const std::string& out_dir) {
  try {
    const auto it = command_table().find(command);
    if (it == command_table().end()) throw ConfigError("unknown command '" + command + "'");
    Config cfg = config_path.empty() ? Config() : Config::load(config_path);
    Outcome o = it->second(cfg);
    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / command).string();
    write_csv(base + ".csv", o.table);
    json j = {{"command", command}, {"config", cfg.to_json()}, {"results", o.results}};
    write_json(base + ".json", j);
    return o.failed ? kAcceptanceFailure : kOk;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace cuspke::cli

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "cuspke/cli.hpp"
#include "cuspke/errors.hpp"

namespace cuspke::cli {

namespace pt = boost::property_tree;

namespace {

std::vector<double> parse_numbers(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream is(s);
  while (is >> tok) {
    if (tok == ";" || tok == ",") continue;
    while (!tok.empty() && (tok.back() == ';' || tok.back() == ',')) tok.pop_back();
    if (tok.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("config: " + key + " has a non-numeric entry '" + tok + "'");
    }
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream is(text);
  try {
    pt::read_ini(is, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

double Config::number(const std::string& key, double def) {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) {
    std::ostringstream os;
    os.precision(17);
    os << def;
    tree_.put(key, os.str());
    return def;
  }
  const auto nums = parse_numbers(key, *v);
  if (nums.size() != 1) throw ConfigError("config: " + key + " must be a single number");
  if (!std::isfinite(nums[0])) throw ConfigError("config: " + key + " is not finite");
  return nums[0];
}

int Config::integer(const std::string& key, int def) {
  const double v = number(key, def);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("config: " + key + " must be an integer");
  return static_cast<int>(v);
}

std::string Config::text(const std::string& key, const std::string& def) {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) {
    tree_.put(key, def);
    return def;
  }
  return *v;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& def) {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) {
    tree_.put(key, join(def));
    return def;
  }
  return parse_numbers(key, *v);
}

CuspModel Config::model() {
  CuspModel m;
  m.n = integer("model.n", 2);
  if (m.n < 2 || m.n > 4) throw ConfigError("config: model.n must lie in 2..4");
  const int d = m.n - 1, D = 2 * d;
  std::vector<double> ident(D * D, 0.0), aid(d * d, 0.0), azero(d * d, 0.0);
  for (int i = 0; i < D; ++i) ident[i * D + i] = 1.0;
  for (int i = 0; i < d; ++i) aid[i * d + i] = 1.0;
  // Basis vectors are listed one after another.
  const auto lat = numbers("model.lattice", ident);
  if (static_cast<int>(lat.size()) != D * D)
    throw ConfigError("config: model.lattice needs " + std::to_string(D * D) + " numbers");
  m.lattice.resize(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) m.lattice(i, j) = lat[j * D + i];
  const auto ar = numbers("model.A", aid);
  const auto ai = numbers("model.A_imag", azero);
  if (static_cast<int>(ar.size()) != d * d || static_cast<int>(ai.size()) != d * d)
    throw ConfigError("config: model.A and model.A_imag need " + std::to_string(d * d) + " numbers");
  m.A.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.A(i, j) = cplx(ar[i * d + j], ai[i * d + j]);
  m.scale = number("model.scale", 1.0);
  m.validate();
  return m;
}

std::shared_ptr<const RadialGrid> Config::grid(double lambda1) {
  const double x0 = number("grid.x0", 0.05);
  const int nodes = integer("grid.nodes", 0);
  const double step = number("grid.step", 5e-4);
  double s_max = number("grid.s_max", 0.0);
  const double sb = number("grid.s_bessel_max", 200.0);
  if (s_max <= 0.0) {
    if (!(sb > 0.0)) throw ConfigError("config: grid.s_bessel_max must be positive");
    s_max = 1.02 * sb / (2.0 * std::sqrt(lambda1));
  }
  if (nodes > 0) return std::make_shared<const RadialGrid>(RadialGrid::uniform_in_s(x0, s_max, nodes));
  return std::make_shared<const RadialGrid>(RadialGrid::with_step(x0, s_max, step));
}

std::shared_ptr<const spectrum::TorusBasis> Config::basis(const CuspModel& model) {
  const double cut = number("solver.cutoff_factor", 9.0);
  const int res = integer("solver.resolution", 0);
  return std::make_shared<const spectrum::TorusBasis>(model, cut, res);
}

modes::PicardOptions Config::picard() {
  modes::PicardOptions o;
  o.tol = number("solver.tol", o.tol);
  o.max_iter = integer("solver.max_iter", o.max_iter);
  o.tail_tol = number("solver.tail_tol", o.tail_tol);
  return o;
}

modes::TorusFunction Config::boundary(const CuspModel& model, const spectrum::TorusBasis& basis) {
  const std::string type = text("boundary.type", "cos");
  const double x0 = number("grid.x0", 0.05);
  if (type == "cos") {
    const double amp = number("boundary.amplitude", 1e-3);
    const int comp = integer("boundary.component", 1);
    if (comp < 1 || comp > model.real_dim())
      throw ConfigError("config: boundary.component out of range");
    // lattice coordinate, so the function is periodic on any lattice
    const Eigen::MatrixXd to_lattice = model.lattice.inverse();
    return modes::sample_boundary(basis, [&](const Eigen::VectorXd& v) {
      return amp * std::cos(2.0 * M_PI * to_lattice.row(comp - 1).dot(v));
    });
  }
  if (type == "constant") {
    const double c = number("boundary.cone_c", 0.2);
    const double value = -(model.n + 1.0) * std::log1p(c * x0);
    return modes::sample_boundary(basis, [&](const Eigen::VectorXd&) { return value; });
  }
  if (type == "zero") return modes::TorusFunction(basis.size(), cplx(0.0));
  throw ConfigError("config: boundary.type must be cos, constant or zero");
}

json Config::to_json() const {
  json j = json::object();
  for (const auto& [section, sub] : tree_) {
    if (sub.empty()) {
      j[section] = sub.data();
      continue;
    }
    json s = json::object();
    for (const auto& [key, val] : sub) s[key] = val.data();
    j[section] = s;
  }
  return j;
}

}  // namespace cuspke::cli

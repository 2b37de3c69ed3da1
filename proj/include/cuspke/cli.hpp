#pragma once

#include <memory>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "cuspke/grid.hpp"
#include "cuspke/model.hpp"
#include "cuspke/modes.hpp"
#include "cuspke/spectrum.hpp"

namespace cuspke::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kAcceptanceFailure = 4 };

// INI-style configuration. Lookups with a default write the default back, so
// the tree always holds the fully resolved configuration.
class Config {
 public:
  Config() = default;
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  double number(const std::string& key, double def);
  int integer(const std::string& key, int def);
  std::string text(const std::string& key, const std::string& def);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& def);

  CuspModel model();
  // x0, step or nodes, and s_max (or s_bessel_max, an upper window edge in 2 sqrt(lambda1)/sqrt(x)).
  std::shared_ptr<const RadialGrid> grid(double lambda1);
  std::shared_ptr<const spectrum::TorusBasis> basis(const CuspModel& model);
  modes::PicardOptions picard();
  modes::TorusFunction boundary(const CuspModel& model, const spectrum::TorusBasis& basis);

  json to_json() const;
  const boost::property_tree::ptree& tree() const { return tree_; }

 private:
  boost::property_tree::ptree tree_;
};

// Fixed-width decimal formatting used for every CSV cell; 17 significant
// digits unless CUSPKE_PRECISION says otherwise.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(const std::vector<double>& values);
  void add_cells(std::vector<std::string> cells);
};
void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const json& j);

// Runs one subcommand and writes <out_dir>/<command>.csv and .json.
// Returns the process exit code; errors are reported on stderr.
int run(const std::string& command, const std::string& config_path, const std::string& out_dir);
const std::vector<std::string>& commands();

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::string summary{};
  json metrics{};
};

const std::vector<std::string>& criterion_ids();
// Relative interior residual max|L v - f| / max|f| of the mode solve with v(x0) = 0 and
// f(s) = sum_j (a_j + i b_j) cos(w_j s + p_j), coef = (a, b, w, p) per term.
double green_relative_residual(int n, double lambda, std::shared_ptr<const RadialGrid> grid,
                               const std::vector<double>& coef);
CriterionResult run_criterion(const std::string& id, Config& cfg);
std::vector<CriterionResult> run_acceptance(Config& cfg, const std::vector<std::string>& ids);

// Smallest eigenvalues of -(1/4) g^{ab} d_a d_b (the torus operator, n = 2 only)
// discretized with second-order differences on a resolution^2 periodic grid in
// lattice coordinates, by block inverse iteration with a sparse LDLT factorization.
std::vector<double> fd_torus_eigenvalues(const CuspModel& model, int resolution, int count);

}  // namespace cuspke::cli

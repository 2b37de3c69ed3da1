#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cuspke/field.hpp"
#include "cuspke/grid.hpp"
#include "cuspke/model.hpp"

namespace cuspke::modes {

struct ModeProblem {
  int n = 2;
  double lambda = 0.0;
  CProfile f;
  cplx v_x0 = 0.0;
  std::shared_ptr<const RadialGrid> grid;
};

// Green operator of x^2 v'' + (n+1) x v' - (n+1) v - lambda v / x on one grid.
// Kernels are stored as mantissas; exponents are +-2 sqrt(lambda) s.
class ModeKernel {
 public:
  ModeKernel(int n, double lambda, std::shared_ptr<const RadialGrid> grid);
  CProfile solve(const CProfile& f, cplx v_x0) const;
  // H2(x_i) / H2(x0).
  double decay_ratio(int i) const;
  double lambda() const { return lambda_; }

 private:
  int n_;
  double lambda_;
  double root_;  // 2 sqrt(lambda)
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> h1_, h2_, weight_;
};

CProfile mode_solve(const ModeProblem& p);

// x^2 v'' + (n+1) x v' - (n+1) v - lambda v / x - f (endpoints set to 0).
CProfile mode_residual(int n, double lambda, const RadialGrid& grid, const CProfile& v,
                       const CProfile& f);

// Boundary data on the torus as coefficients on the retained characters.
using TorusFunction = std::vector<cplx>;
TorusFunction sample_boundary(const spectrum::TorusBasis& basis,
                              const std::function<double(const Eigen::VectorXd&)>& beta);

// Kernels for every distinct eigenvalue of one basis on one grid.
class GreenOperator {
 public:
  GreenOperator(const CuspModel& model, std::shared_ptr<const RadialGrid> grid,
                std::shared_ptr<const spectrum::TorusBasis> basis);
  // Mode-wise solution with boundary trace `boundary` and inhomogeneity g.
  Field apply(const TorusFunction& boundary, const Field& g) const;
  std::shared_ptr<const RadialGrid> grid() const { return grid_; }
  std::shared_ptr<const spectrum::TorusBasis> basis() const { return basis_; }

 private:
  int n_;
  std::shared_ptr<const RadialGrid> grid_;
  std::shared_ptr<const spectrum::TorusBasis> basis_;
  std::vector<std::unique_ptr<ModeKernel>> kernels_;  // by lambda class; class 0 unused
};

Field assemble_representation(const CuspModel& model, const TorusFunction& boundary,
                              const Field& g, double tail_tol = 1e-6);

struct PicardOptions {
  double tol = 1e-13;
  int max_iter = 40;
  double tail_tol = 1e-6;
};

struct PicardState {
  Field iterate;
  int iteration = 0;
  double sup_change = 0.0;
  std::vector<double> changes;
  std::vector<double> contraction_history;  // ratios of consecutive changes
  double residual = 0.0;                    // sup of the Monge-Ampere residual, interior nodes
  double tail_norm = 0.0;                   // largest tail indicator seen
};

PicardState picard_solve(const CuspModel& model, const TorusFunction& boundary,
                         std::shared_ptr<const RadialGrid> grid,
                         std::shared_ptr<const spectrum::TorusBasis> basis,
                         const PicardOptions& opt = {});

struct TangentCone {
  double c = 0.0;
  double rms = 0.0;
};
// Fit of the zero mode against -(n+1) log(1 + c x) on the inner half of the grid.
TangentCone extract_tangent_cone(const Field& u, double max_rms = 1e-6);
Profile tangent_cone_profile(int n, const RadialGrid& grid, double c);

// sqrt(sum |u_xi|^2) over the characters with lambda = lambda_1.
Profile first_eigenspace_profile(const Field& u);

}  // namespace cuspke::modes

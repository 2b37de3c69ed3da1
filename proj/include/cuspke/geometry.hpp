#pragma once

#include <utility>

#include <Eigen/Dense>

#include "cuspke/field.hpp"
#include "cuspke/model.hpp"

namespace cuspke::geometry {

// Holomorphic: (d/dz_1, .., d/dz_{n-1}, d/dz_n).
// LogRadial: last vector replaced by z_n d/dz_n, which keeps entries O(1) deep in the cusp.
enum class Frame { Holomorphic, LogRadial };

struct HermitianForm {
  Eigen::MatrixXcd entries;  // entries(j, k) pairs d_j with conj(d_k)
  Frame frame = Frame::Holomorphic;
};

// |z_n| and its logarithm at p; |z_n|^2 = e^{phi(z') - 1/x} / scale.
double log_abs_zn(const CuspModel& model, const CuspPoint& p);
cplx zn(const CuspModel& model, const CuspPoint& p);

HermitianForm metric_coefficients(const CuspModel& model, const CuspPoint& p,
                                  Frame frame = Frame::Holomorphic);
// Inverse matrix of metric_coefficients in the same frame.
HermitianForm inverse_metric(const CuspModel& model, const CuspPoint& p,
                             Frame frame = Frame::Holomorphic);
// Q = phi^{b c} phi_b phi_c, nonpositive.
double inverse_q(const CuspModel& model, const Eigen::VectorXcd& z);

// Metric on the level set x = eps^2, rescaled by eps^{-2}/(n+1), in the frame
// (x_1..x_{n-1}, y_1..y_{n-1}, theta).
Eigen::MatrixXd cross_section_metric(const CuspModel& model, double eps, const CuspPoint& p);

struct NormalCurvature {
  double normal;  // coefficient of r d/dr in the unit normal towards the cusp
  double mean_curvature;
};
NormalCurvature normal_and_mean_curvature(const CuspModel& model, double eps);

// Chart derivatives of an S^1-invariant function at one point. Torus
// derivatives are taken at fixed x.
struct FieldJet {
  double f = 0.0, fx = 0.0, fxx = 0.0;
  Eigen::VectorXcd fz;      // d_a f
  Eigen::VectorXcd fxz;     // d_x d_a f
  Eigen::MatrixXcd fzzbar;  // d_a d_bbar f
};

// Complex Hessian f_{j kbar} from chart derivatives.
HermitianForm hessian_from_jet(const CuspModel& model, const CuspPoint& p, const FieldJet& jet,
                               Frame frame = Frame::Holomorphic);
// Chart derivatives of a field at an interior grid node and a torus point.
FieldJet field_jet(const Field& f, int node, const Eigen::VectorXd& v);
HermitianForm holomorphic_hessian(const CuspModel& model, const Field& f, const CuspPoint& p,
                                  Frame frame = Frame::Holomorphic);

// Frame (d_a + phi_a z_n d_{z_n}, z_n d_{z_n}) in which g is block diagonal and
// neither g nor the Hessian of an S^1-invariant function depends on z'.
// Returns the eigenvalues of g^{-1} f_hess there.
Eigen::VectorXd relative_eigenvalues(const CuspModel& model, double x, const FieldJet& jet);
// log det(g + f_hess) / det g via the adapted frame.
double log_volume_ratio(const CuspModel& model, double x, const FieldJet& jet);

// L_h f, mode by mode.
Field linearized_apply(const CuspModel& model, const Field& f);

struct ResidualReport {
  Field residual;
  double sup_interior = 0.0;  // pointwise maximum over interior nodes
};
ResidualReport monge_ampere_residual_report(const CuspModel& model, const Field& f);
Field monge_ampere_residual(const CuspModel& model, const Field& f);

// -(n+1) Q_h(f) = -(n+1) (M_h(f) - L_h(f)) evaluated pointwise without
// forming the difference. Coefficients below the rounding floor of each radial
// node are set to zero; tail_norm of the result records the dropped part.
Field nonlinear_source(const CuspModel& model, const Field& f);

// log(1 + t) - t, accurate for small t.
double log1p_minus(double t);

}  // namespace cuspke::geometry

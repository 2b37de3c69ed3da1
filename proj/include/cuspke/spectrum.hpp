#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cuspke/model.hpp"

namespace cuspke::spectrum {

// Character e^{2 pi i <xi, v>} of the torus with its eigenvalue under
// phi^{b a} d_a d_bbar.
struct SpectrumEntry {
  Eigen::VectorXi m;   // coordinates of xi in the dual basis
  Eigen::VectorXd xi;  // real dual vector, xi = (a, b)
  Eigen::VectorXcd c;  // c_a = a_a - i b_a
  double lambda = 0.0;
};

// B^{-T}; its columns pair to the identity with the lattice basis.
Eigen::MatrixXd dual_lattice(const CuspModel& model);

SpectrumEntry make_entry(const CuspModel& model, const Eigen::VectorXi& m);

// The `count` smallest eigenvalues with multiplicity, ascending.
std::vector<SpectrumEntry> eigenvalues_up_to(const CuspModel& model, int count);

// Every entry with lambda <= lambda_max, ascending.
std::vector<SpectrumEntry> eigenvalues_below(const CuspModel& model, double lambda_max);

double first_eigenvalue(const CuspModel& model);

// Retained characters together with the collocation grid used for
// mode <-> value conversion. The grid has `resolution` points per lattice
// direction and the transforms go through FFTW.
class TorusBasis {
 public:
  // Keeps every character with lambda <= cutoff_factor * lambda_1.
  TorusBasis(const CuspModel& model, double cutoff_factor = 9.0, int resolution = 0);
  ~TorusBasis();
  TorusBasis(const TorusBasis&) = delete;
  TorusBasis& operator=(const TorusBasis&) = delete;

  const CuspModel& model() const { return model_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const SpectrumEntry& mode(int k) const { return modes_[k]; }
  const std::vector<SpectrumEntry>& modes() const { return modes_; }
  int index_of(const Eigen::VectorXi& m) const;  // -1 when not retained
  int conjugate(int k) const { return conj_[k]; }
  int zero_mode() const { return 0; }
  double lambda1() const { return lambda1_; }
  double cutoff() const { return cutoff_; }

  const std::vector<double>& distinct_lambdas() const { return distinct_; }
  int lambda_class(int k) const { return class_[k]; }

  int resolution() const { return resolution_; }
  int points() const { return points_; }
  // Real coordinates of collocation point p.
  Eigen::VectorXd point(int p) const;

  // values[p] = sum_k coeffs[k] chi_k(point p); the real part is returned.
  void synthesize(const cplx* coeffs, double* values) const;
  void synthesize(const cplx* coeffs, cplx* values) const;
  // Mean-normalized projection onto the retained characters. When `tail`
  // is given it receives the l2 norm of the discarded coefficients.
  void analyze(const double* values, cplx* coeffs, double* tail = nullptr,
               double* total = nullptr) const;

 private:
  struct Plans;
  CuspModel model_;
  std::vector<SpectrumEntry> modes_;
  std::vector<int> conj_;
  std::vector<int> class_;
  std::vector<double> distinct_;
  std::vector<int> slot_;  // position of each mode in the FFT array
  double lambda1_ = 0.0;
  double cutoff_ = 0.0;
  int resolution_ = 0;
  int points_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace cuspke::spectrum

#include "cuspke/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "cuspke/errors.hpp"

namespace cuspke::spectrum {

namespace {

constexpr double kPi = std::numbers::pi;

// W with lambda(m) = m^T W m.
Eigen::MatrixXd quadratic_form(const CuspModel& model) {
  const int d = model.n - 1, D = 2 * d;
  const Eigen::MatrixXd dual = dual_lattice(model);
  const Eigen::MatrixXcd ainv = model.A.inverse();
  auto q = [&](const Eigen::VectorXd& xi) {
    Eigen::VectorXcd c(d);
    for (int a = 0; a < d; ++a) c(a) = cplx(xi(a), -xi(a + d));
    return kPi * kPi * std::real(c.dot(ainv * c));
  };
  Eigen::MatrixXd w(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      const Eigen::VectorXd ei = dual.col(i), ej = dual.col(j);
      w(i, j) = 0.5 * (q(ei + ej) - q(ei) - q(ej));
    }
  return 0.5 * (w + w.transpose());
}

bool entry_less(const SpectrumEntry& a, const SpectrumEntry& b) {
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  return std::lexicographical_compare(a.m.data(), a.m.data() + a.m.size(), b.m.data(),
                                      b.m.data() + b.m.size());
}

std::vector<SpectrumEntry> enumerate_ball(const CuspModel& model, double radius) {
  const Eigen::MatrixXd w = quadratic_form(model);
  const Eigen::MatrixXd winv = w.inverse();
  const int D = static_cast<int>(w.rows());
  std::vector<int> bound(D);
  for (int i = 0; i < D; ++i)
    bound[i] = static_cast<int>(std::floor(std::sqrt(std::max(0.0, radius * winv(i, i))) + 1e-9));
  std::vector<SpectrumEntry> out;
  Eigen::VectorXi m(D);
  std::function<void(int)> rec = [&](int i) {
    if (i == D) {
      const double lam = m.cast<double>().dot(w * m.cast<double>());
      if (lam <= radius * (1 + 1e-12)) out.push_back(make_entry(model, m));
      return;
    }
    for (int k = -bound[i]; k <= bound[i]; ++k) {
      m(i) = k;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), entry_less);
  return out;
}

}  // namespace

Eigen::MatrixXd dual_lattice(const CuspModel& model) {
  const Eigen::MatrixXd& b = model.lattice;
  if (b.rows() != b.cols() || b.rows() == 0) throw ConfigError("dual_lattice: basis must be square");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (!lu.isInvertible()) throw ConfigError("dual_lattice: singular lattice basis");
  return lu.inverse().transpose();
}

SpectrumEntry make_entry(const CuspModel& model, const Eigen::VectorXi& m) {
  const int d = model.n - 1;
  SpectrumEntry e;
  e.m = m;
  e.xi = dual_lattice(model) * m.cast<double>();
  e.c.resize(d);
  for (int a = 0; a < d; ++a) e.c(a) = cplx(e.xi(a), -e.xi(a + d));
  e.lambda = m.isZero() ? 0.0 : kPi * kPi * std::real(e.c.dot(model.A.inverse() * e.c));
  return e;
}

std::vector<SpectrumEntry> eigenvalues_below(const CuspModel& model, double lambda_max) {
  model.validate();
  return enumerate_ball(model, std::max(0.0, lambda_max));
}

std::vector<SpectrumEntry> eigenvalues_up_to(const CuspModel& model, int count) {
  if (count < 1) throw ConfigError("eigenvalues_up_to: count must be at least 1");
  model.validate();
  const Eigen::MatrixXd w = quadratic_form(model);
  double radius = w.diagonal().minCoeff();
  for (;;) {
    auto all = enumerate_ball(model, radius);
    if (static_cast<int>(all.size()) >= count + 1) {
      all.resize(count);
      return all;
    }
    radius *= 2.0;
  }
}

double first_eigenvalue(const CuspModel& model) {
  const auto e = eigenvalues_up_to(model, 2);
  return e[1].lambda;
}

struct TorusBasis::Plans {
  fftw_complex* buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<char> retained;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buf) fftw_free(buf);
  }
};

TorusBasis::TorusBasis(const CuspModel& model, double cutoff_factor, int resolution)
    : model_(model), plans_(std::make_unique<Plans>()) {
  model.validate();
  if (!(cutoff_factor >= 1.0)) throw ConfigError("torus basis: cutoff factor must be at least 1");
  lambda1_ = first_eigenvalue(model);
  cutoff_ = cutoff_factor * lambda1_;
  modes_ = eigenvalues_below(model, cutoff_);

  const int D = model.real_dim();
  int maxm = 0;
  for (const auto& e : modes_) maxm = std::max(maxm, e.m.cwiseAbs().maxCoeff());
  if (resolution == 0) {
    resolution = 8;
    while (resolution < 4 * maxm) resolution *= 2;
  }
  if (resolution < 2 * maxm + 1 || (resolution & (resolution - 1)) != 0)
    throw ConfigError("torus basis: resolution must be a power of two above " +
                      std::to_string(2 * maxm));
  resolution_ = resolution;
  points_ = 1;
  for (int i = 0; i < D; ++i) points_ *= resolution_;

  std::map<std::vector<int>, int> index;
  for (int k = 0; k < size(); ++k)
    index[std::vector<int>(modes_[k].m.data(), modes_[k].m.data() + D)] = k;
  conj_.resize(size());
  slot_.resize(size());
  for (int k = 0; k < size(); ++k) {
    std::vector<int> neg(D);
    int slot = 0;
    for (int i = 0; i < D; ++i) {
      neg[i] = -modes_[k].m(i);
      slot = slot * resolution_ + ((modes_[k].m(i) % resolution_) + resolution_) % resolution_;
    }
    conj_[k] = index.at(neg);
    slot_[k] = slot;
  }
  for (int k = 0; k < size(); ++k) {
    const double lam = modes_[k].lambda;
    if (distinct_.empty() || lam > distinct_.back() * (1 + 1e-10) + 1e-300) distinct_.push_back(lam);
    class_.push_back(static_cast<int>(distinct_.size()) - 1);
  }

  std::vector<int> dims(D, resolution_);
  plans_->buf = fftw_alloc_complex(points_);
  plans_->forward =
      fftw_plan_dft(D, dims.data(), plans_->buf, plans_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward =
      fftw_plan_dft(D, dims.data(), plans_->buf, plans_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans_->retained.assign(points_, 0);
  for (int s : slot_) plans_->retained[s] = 1;
}

TorusBasis::~TorusBasis() = default;

int TorusBasis::index_of(const Eigen::VectorXi& m) const {
  for (int k = 0; k < size(); ++k)
    if (modes_[k].m == m) return k;
  return -1;
}

Eigen::VectorXd TorusBasis::point(int p) const {
  const int D = model_.real_dim();
  Eigen::VectorXd w(D);
  for (int i = D - 1; i >= 0; --i) {
    w(i) = static_cast<double>(p % resolution_) / resolution_;
    p /= resolution_;
  }
  return model_.lattice * w;
}

void TorusBasis::synthesize(const cplx* coeffs, cplx* values) const {
  auto* b = reinterpret_cast<cplx*>(plans_->buf);
  std::fill(b, b + points_, cplx(0.0));
  for (int k = 0; k < size(); ++k) b[slot_[k]] += coeffs[k];
  fftw_execute(plans_->backward);
  std::copy(b, b + points_, values);
}

void TorusBasis::synthesize(const cplx* coeffs, double* values) const {
  auto* b = reinterpret_cast<cplx*>(plans_->buf);
  std::fill(b, b + points_, cplx(0.0));
  for (int k = 0; k < size(); ++k) b[slot_[k]] += coeffs[k];
  fftw_execute(plans_->backward);
  for (int p = 0; p < points_; ++p) values[p] = b[p].real();
}

void TorusBasis::analyze(const double* values, cplx* coeffs, double* tail, double* total) const {
  auto* b = reinterpret_cast<cplx*>(plans_->buf);
  for (int p = 0; p < points_; ++p) b[p] = cplx(values[p], 0.0);
  fftw_execute(plans_->forward);
  const double inv = 1.0 / points_;
  for (int k = 0; k < size(); ++k) coeffs[k] = b[slot_[k]] * inv;
  if (tail || total) {
    double t2 = 0.0, a2 = 0.0;
    for (int p = 0; p < points_; ++p) {
      const double v = std::norm(b[p]) * inv * inv;
      a2 += v;
      if (!plans_->retained[p]) t2 += v;
    }
    if (tail) *tail = std::sqrt(t2);
    if (total) *total = std::sqrt(a2);
  }
}

}  // namespace cuspke::spectrum

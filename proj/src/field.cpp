#include "cuspke/field.hpp"

#include <cmath>

#include "cuspke/errors.hpp"

namespace cuspke {

Field Field::zeros(std::shared_ptr<const RadialGrid> grid,
                   std::shared_ptr<const spectrum::TorusBasis> basis) {
  Field f;
  f.modes.assign(basis->size(), CProfile(grid->size(), cplx(0.0)));
  f.grid = std::move(grid);
  f.basis = std::move(basis);
  return f;
}

Field Field::radial(std::shared_ptr<const RadialGrid> grid,
                    std::shared_ptr<const spectrum::TorusBasis> basis, const Profile& p) {
  if (static_cast<int>(p.size()) != grid->size())
    throw ConfigError("field: radial profile length does not match grid");
  Field f = zeros(std::move(grid), std::move(basis));
  for (size_t i = 0; i < p.size(); ++i) f.modes[0][i] = p[i];
  return f;
}

CProfile& Field::mode(const Eigen::VectorXi& m) {
  const int k = basis->index_of(m);
  if (k < 0) throw ConfigError("field: character not retained by the basis");
  return modes[k];
}

const CProfile& Field::mode(const Eigen::VectorXi& m) const {
  const int k = basis->index_of(m);
  if (k < 0) throw ConfigError("field: character not retained by the basis");
  return modes[k];
}

Profile Field::mean() const {
  Profile p(nodes());
  for (int i = 0; i < nodes(); ++i) p[i] = modes[0][i].real();
  return p;
}

double Field::reality_defect() const {
  double worst = 0.0;
  for (int k = 0; k < basis->size(); ++k) {
    const int kc = basis->conjugate(k);
    for (int i = 0; i < nodes(); ++i)
      worst = std::max(worst, std::abs(modes[k][i] - std::conj(modes[kc][i])));
  }
  return worst;
}

double Field::sup_coefficient(bool interior_only) const {
  double worst = 0.0;
  for (const auto& m : modes)
    for (int i = 0; i < nodes(); ++i)
      if (!interior_only || grid->interior(i)) worst = std::max(worst, std::abs(m[i]));
  return worst;
}

std::vector<double> Field::values_at(int i) const {
  std::vector<cplx> c(basis->size());
  for (int k = 0; k < basis->size(); ++k) c[k] = modes[k][i];
  std::vector<double> v(basis->points());
  basis->synthesize(c.data(), v.data());
  return v;
}

Field& Field::operator+=(const Field& o) {
  for (size_t k = 0; k < modes.size(); ++k)
    for (size_t i = 0; i < modes[k].size(); ++i) modes[k][i] += o.modes[k][i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (size_t k = 0; k < modes.size(); ++k)
    for (size_t i = 0; i < modes[k].size(); ++i) modes[k][i] -= o.modes[k][i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& m : modes)
    for (auto& v : m) v *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

}  // namespace cuspke

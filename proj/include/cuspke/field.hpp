#pragma once

#include <memory>
#include <vector>

#include "cuspke/grid.hpp"
#include "cuspke/spectrum.hpp"

namespace cuspke {

// S^1-invariant function on the cusp: one complex radial profile per retained
// torus character. Coefficients refer to the unnormalized characters, so the
// zero mode is the torus mean.
struct Field {
  std::shared_ptr<const RadialGrid> grid;
  std::shared_ptr<const spectrum::TorusBasis> basis;
  std::vector<CProfile> modes;
  // l2 size of the spectral content dropped when this field was built from
  // collocation values (relative to the total), 0 otherwise.
  double tail_norm = 0.0;

  static Field zeros(std::shared_ptr<const RadialGrid> grid,
                     std::shared_ptr<const spectrum::TorusBasis> basis);
  static Field radial(std::shared_ptr<const RadialGrid> grid,
                      std::shared_ptr<const spectrum::TorusBasis> basis, const Profile& f);

  int nodes() const { return grid->size(); }
  int torus_resolution() const { return basis->resolution(); }
  CProfile& mode(const Eigen::VectorXi& m);
  const CProfile& mode(const Eigen::VectorXi& m) const;

  Profile mean() const;
  // Largest |coefficient(xi) - conj(coefficient(-xi))|.
  double reality_defect() const;
  // Largest |coefficient| over modes and nodes; interior_only skips both endpoints.
  double sup_coefficient(bool interior_only = false) const;
  // Collocation values at node i.
  std::vector<double> values_at(int i) const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

}  // namespace cuspke

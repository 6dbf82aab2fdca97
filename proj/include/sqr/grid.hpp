#pragma once

#include "sqr/errors.hpp"

namespace sqr {

struct Grid1D {
  double x_min = 0;
  double x_max = 0;
  int n_x = 0;

  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double x(int i) const { return x_min + i * dx(); }
};

inline Grid1D make_grid_1d(double x_min, double x_max, int n_x) {
  if (n_x < 16) throw ConfigError("grid: n_x must be at least 16");
  if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
  return {x_min, x_max, n_x};
}

// Radial nodes sit at half-offsets r_j = (j + 1/2) dr so the axis r = 0 is
// never a node; psi = 0 is imposed at r_max.
struct GridCyl {
  Grid1D axial;
  double r_max = 0;
  int n_r = 0;

  double dr() const { return r_max / n_r; }
  double r(int j) const { return (j + 0.5) * dr(); }
  long size() const { return static_cast<long>(axial.n_x) * n_r; }
};

inline GridCyl make_grid_cyl(const Grid1D& axial, double r_max, int n_r) {
  if (n_r < 8) throw ConfigError("grid: n_r must be at least 8");
  if (!(r_max > 0)) throw ConfigError("grid: r_max must be positive");
  return {axial, r_max, n_r};
}

}  // namespace sqr

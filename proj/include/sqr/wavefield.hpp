#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "sqr/constants.hpp"
#include "sqr/errors.hpp"
#include "sqr/grid.hpp"

namespace sqr {

using cdouble = std::complex<double>;

struct Field1D {
  Grid1D grid;
  std::vector<cdouble> psi;
  double time = 0;
};

// psi[ix * n_r + ir]; norm = sum |psi|^2 2 pi r_j dr dx.
struct FieldCyl {
  GridCyl grid;
  std::vector<cdouble> psi;
  double time = 0;

  cdouble& at(int ix, int ir) { return psi[static_cast<std::size_t>(ix) * grid.n_r + ir]; }
  cdouble at(int ix, int ir) const { return psi[static_cast<std::size_t>(ix) * grid.n_r + ir]; }
};

inline double norm(const Field1D& f) {
  double s = 0;
  for (const auto& p : f.psi) s += std::norm(p);
  return s * f.grid.dx();
}

inline double norm(const FieldCyl& f) {
  const int n_r = f.grid.n_r;
  const double dr = f.grid.dr();
  double s = 0;
  for (int ix = 0; ix < f.grid.axial.n_x; ++ix)
    for (int ir = 0; ir < n_r; ++ir) s += std::norm(f.at(ix, ir)) * f.grid.r(ir);
  return s * 2 * constants::pi * dr * f.grid.axial.dx();
}

inline void rescale(Field1D& f, double target_norm) {
  const double s = std::sqrt(target_norm / norm(f));
  for (auto& p : f.psi) p *= s;
}

inline void rescale(FieldCyl& f, double target_norm) {
  const double s = std::sqrt(target_norm / norm(f));
  for (auto& p : f.psi) p *= s;
}

// psi(x) = sqrt(N / 2 xi) sech((x - x_center)/xi), renormalised exactly to N.
inline Field1D init_sech_soliton(const Grid1D& grid, double xi, double atom_count,
                                 double x_center) {
  if (!std::isfinite(xi) || !(xi > 0))
    throw ConfigError("sech soliton: undefined width (no attractive nonlinearity?)");
  if (grid.dx() > xi / 10)
    throw ConfigError("sech soliton: grid too coarse, need dx <= xi/10");
  if (x_center - 10 * xi < grid.x_min || x_center + 10 * xi > grid.x_max)
    throw ConfigError("sech soliton: grid must span 20 xi around the centre");

  Field1D f{grid, std::vector<cdouble>(grid.n_x), 0};
  const double amp = std::sqrt(atom_count / (2 * xi));
  for (int i = 0; i < grid.n_x; ++i)
    f.psi[i] = amp / std::cosh((grid.x(i) - x_center) / xi);
  const double n0 = norm(f);
  if (std::abs(n0 - atom_count) > 1e-6 * atom_count)
    throw ConfigError("sech soliton: discrete norm off by more than 1e-6 (grid too small?)");
  rescale(f, atom_count);
  return f;
}

inline Field1D init_gaussian_1d(const Grid1D& grid, double sigma_x, double atom_count,
                                double x_center) {
  if (!(sigma_x > 0)) throw ConfigError("gaussian: width must be positive");
  if (grid.dx() > sigma_x / 4)
    throw ConfigError("gaussian: grid too coarse for requested width");
  Field1D f{grid, std::vector<cdouble>(grid.n_x), 0};
  for (int i = 0; i < grid.n_x; ++i) {
    const double u = (grid.x(i) - x_center) / sigma_x;
    f.psi[i] = std::exp(-0.25 * u * u);  // |psi|^2 has std sigma_x
  }
  rescale(f, atom_count);
  return f;
}

// Axial sech (or gaussian when xi_x == 0) times radial gaussian; the usual
// trial state for imaginary-time relaxation.
inline FieldCyl init_trial_cyl(const GridCyl& grid, double xi_x, double sigma_x,
                               double sigma_r, double atom_count, double x_center) {
  if (!(sigma_r > 0)) throw ConfigError("trial state: radial width must be positive");
  if (grid.dr() > sigma_r / 2)
    throw ConfigError("trial state: radial grid too coarse for requested width");
  FieldCyl f{grid, std::vector<cdouble>(grid.size()), 0};
  for (int ix = 0; ix < grid.axial.n_x; ++ix) {
    const double xd = grid.axial.x(ix) - x_center;
    double ax;
    if (xi_x > 0)
      ax = 1.0 / std::cosh(xd / xi_x);
    else
      ax = std::exp(-0.25 * (xd / sigma_x) * (xd / sigma_x));
    for (int ir = 0; ir < grid.n_r; ++ir) {
      const double r = grid.r(ir);
      f.at(ix, ir) = ax * std::exp(-r * r / (2 * sigma_r * sigma_r));
    }
  }
  rescale(f, atom_count);
  return f;
}

// psi -> psi exp(i m v x / hbar). Densities are unchanged.
template <class Field>
inline void apply_velocity_kick(Field& f, double v, double mass) {
  const Grid1D* ax;
  if constexpr (std::is_same_v<Field, Field1D>)
    ax = &f.grid;
  else
    ax = &f.grid.axial;
  const double k = mass * v / constants::hbar;
  if (std::abs(k) * ax->dx() >= constants::pi)
    throw ConfigError("velocity kick: phase gradient not resolvable on this grid");
  if constexpr (std::is_same_v<Field, Field1D>) {
    for (int i = 0; i < ax->n_x; ++i)
      f.psi[i] *= std::polar(1.0, k * ax->x(i));
  } else {
    for (int ix = 0; ix < ax->n_x; ++ix) {
      const cdouble ph = std::polar(1.0, k * ax->x(ix));
      for (int ir = 0; ir < f.grid.n_r; ++ir) f.at(ix, ir) *= ph;
    }
  }
}

struct Observables {
  double norm = 0;
  double n_left = 0;       // atoms with x < x_b
  double com_x = 0;        // m
  double com_v = std::numeric_limits<double>::quiet_NaN();  // filled by run loops
  double rms_width_x = 0;  // m
  double peak_density = 0; // m^-1 (1D) or m^-3 (cylindrical)
  double density_at_plane = 0;  // axial density at x_b, same units as peak
};

namespace detail {

// Trapezoid integral of the axial density profile and moments; n_left takes
// the partial cell up to x_b.
inline Observables measure_axial(const Grid1D& grid, const std::vector<double>& dens,
                                 double x_b, double dx_weight) {
  Observables o;
  const double dx = grid.dx();
  double s = 0, sx = 0, sxx = 0, left = 0, peak = 0;
  for (int i = 0; i < grid.n_x; ++i) {
    const double w = (i == 0 || i == grid.n_x - 1) ? 0.5 : 1.0;
    const double d = dens[i];
    const double x = grid.x(i);
    s += w * d;
    sx += w * d * x;
    sxx += w * d * x * x;
    peak = std::max(peak, d);
  }
  // partial-cell trapezoid for x < x_b
  for (int i = 0; i + 1 < grid.n_x; ++i) {
    const double x0 = grid.x(i), x1 = grid.x(i + 1);
    if (x1 <= x_b) {
      left += 0.5 * (dens[i] + dens[i + 1]);
    } else if (x0 < x_b) {
      const double f = (x_b - x0) / dx;
      const double db = dens[i] + (dens[i + 1] - dens[i]) * f;
      left += 0.5 * (dens[i] + db) * f;
      break;
    } else {
      break;
    }
  }
  o.norm = s * dx * dx_weight;
  o.n_left = left * dx * dx_weight;
  o.com_x = s > 0 ? sx / s : 0;
  const double var = s > 0 ? sxx / s - o.com_x * o.com_x : 0;
  o.rms_width_x = var > 0 ? std::sqrt(var) : 0;
  // linear interpolation of the axial profile at x_b
  {
    int i = static_cast<int>((x_b - grid.x_min) / dx);
    i = std::clamp(i, 0, grid.n_x - 2);
    const double f = (x_b - grid.x(i)) / dx;
    o.density_at_plane = dens[i] + (dens[i + 1] - dens[i]) * std::clamp(f, 0.0, 1.0);
  }
  return o;
}

}  // namespace detail

inline Observables measure(const Field1D& f, double x_b) {
  if (x_b < f.grid.x_min || x_b > f.grid.x_max)
    throw ConfigError("measure: x_b outside the grid");
  std::vector<double> dens(f.grid.n_x);
  for (int i = 0; i < f.grid.n_x; ++i) dens[i] = std::norm(f.psi[i]);
  Observables o = detail::measure_axial(f.grid, dens, x_b, 1.0);
  o.peak_density = *std::max_element(dens.begin(), dens.end());
  // density_at_plane already in m^-1
  return o;
}

inline Observables measure(const FieldCyl& f, double x_b) {
  const Grid1D& ax = f.grid.axial;
  if (x_b < ax.x_min || x_b > ax.x_max) throw ConfigError("measure: x_b outside the grid");
  const int n_r = f.grid.n_r;
  const double dr = f.grid.dr();
  // axial profile: radial integral of the density
  std::vector<double> dens(ax.n_x, 0.0);
  double peak3d = 0;
  for (int ix = 0; ix < ax.n_x; ++ix) {
    double s = 0;
    for (int ir = 0; ir < n_r; ++ir) {
      const double d = std::norm(f.at(ix, ir));
      s += d * f.grid.r(ir);
      peak3d = std::max(peak3d, d);
    }
    dens[ix] = s * 2 * constants::pi * dr;
  }
  Observables o = detail::measure_axial(ax, dens, x_b, 1.0);
  o.peak_density = peak3d;
  // express the plane density in 3D units via the on-axis value
  {
    int i = static_cast<int>((x_b - ax.x_min) / ax.dx());
    i = std::clamp(i, 0, ax.n_x - 2);
    const double f0 = std::norm(f.at(i, 0)), f1 = std::norm(f.at(i + 1, 0));
    const double t = std::clamp((x_b - ax.x(i)) / ax.dx(), 0.0, 1.0);
    o.density_at_plane = f0 + (f1 - f0) * t;
  }
  return o;
}

// On-axis axial density profile (1D: |psi|^2, cylindrical: innermost ring).
inline std::vector<double> axial_density(const Field1D& f) {
  std::vector<double> d(f.grid.n_x);
  for (int i = 0; i < f.grid.n_x; ++i) d[i] = std::norm(f.psi[i]);
  return d;
}

inline std::vector<double> axial_density(const FieldCyl& f) {
  std::vector<double> d(f.grid.axial.n_x);
  for (int i = 0; i < f.grid.axial.n_x; ++i) d[i] = std::norm(f.at(i, 0));
  return d;
}

}  // namespace sqr

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sqr/constants.hpp"
#include "sqr/errors.hpp"
#include "sqr/potentials.hpp"
#include "sqr/species.hpp"

namespace sqr {

// Piecewise-constant potential: values[j] on the region between
// breakpoints[j-1] and breakpoints[j]; values.front() and values.back() are
// the semi-infinite incident and final media.
struct PiecewisePotential {
  std::vector<double> breakpoints;  // m, strictly increasing
  std::vector<cdouble> values;      // J, size = breakpoints.size() + 1
};

struct ScatteringResult {
  double r = 0;      // reflection probability
  double t = 0;      // transmission probability
  double a = 0;      // absorbed fraction
  double k_in = 0;   // incident wave number, 1/m
  double k_out = 0;  // wave number in the final medium (real part), 1/m
};

enum class Boundary {
  transmitting,         // outgoing plane wave in the final medium
  outgoing_at_surface,  // final medium is the surface side; its flux counts as adsorption
};

inline double reflection_probability_hard_step(double e, double v0, double mass) {
  if (!(e > 0)) throw std::domain_error("hard step: energy must be positive");
  const double hbar = constants::hbar;
  const cdouble k1 = std::sqrt(cdouble(2 * mass * e)) / hbar;
  const cdouble k2 = std::sqrt(cdouble(2 * mass * (e - v0))) / hbar;
  return std::norm((k1 - k2) / (k1 + k2));
}

inline ScatteringResult reflection_hard_step(double e, double v0, const Species& species) {
  validate_species(species);
  ScatteringResult res;
  res.r = reflection_probability_hard_step(e, v0, species.mass);
  res.k_in = std::sqrt(2 * species.mass * e) / constants::hbar;
  const cdouble k2 = std::sqrt(cdouble(2 * species.mass * (e - v0))) / constants::hbar;
  res.k_out = k2.real();
  res.t = 1 - res.r;
  res.a = 0;
  return res;
}

struct DiscretizeOptions {
  double max_width = 0;        // uniform cap (0: range/256)
  double k_fraction = 20;      // width <= 1/(k_fraction * k_local)
  double refine_fraction = 0;  // width <= refine_fraction * distance-to-right-edge
                               // (geometric refinement toward a surface at x_hi)
};

// Splits [x_lo, x_hi] into intervals with width <= min(cap, 1/(k_frac k(x)))
// and, when refine_fraction > 0, geometrically refined toward x_hi. Adjacent
// intervals with identical values are merged, so a hard step yields exactly
// two regions.
inline PiecewisePotential discretize(const PotentialStack& stack, double x_lo, double x_hi,
                                     double e, double mass, DiscretizeOptions opts = {}) {
  if (!(e > 0)) throw std::domain_error("discretize: energy must be positive");
  if (!(x_hi > x_lo)) throw ConfigError("discretize: empty range");
  const double range = x_hi - x_lo;
  const double cap = opts.max_width > 0 ? opts.max_width : range / 256;

  const double hbar = constants::hbar;
  auto local_k = [&](double x) {
    const double v = stack.sample(x).real();
    return std::sqrt(2 * mass * std::abs(e - v)) / hbar;
  };

  // build boundaries right-to-left so refinement anchors at x_hi
  std::vector<double> bounds{x_hi};
  double x = x_hi;
  while (x > x_lo) {
    double w = cap;
    const double k = local_k(x);
    if (k > 0) w = std::min(w, 1 / (opts.k_fraction * k));
    if (opts.refine_fraction > 0) {
      const double s = x_hi - x;
      w = std::min(w, std::max(opts.refine_fraction * s, 1 / (opts.k_fraction * local_k(x_hi))));
    }
    x -= w;
    bounds.push_back(std::max(x, x_lo));
  }
  std::reverse(bounds.begin(), bounds.end());

  PiecewisePotential pw;
  std::vector<cdouble> vals;
  vals.reserve(bounds.size() + 1);
  // incident medium takes the value at the outer edge
  vals.push_back(stack.sample(x_lo).real());
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
    vals.push_back(stack.sample(0.5 * (bounds[i] + bounds[i + 1])).real());
  vals.push_back(stack.sample(x_hi).real());

  // merge equal-valued neighbours
  pw.values.push_back(vals[0]);
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] == pw.values.back()) continue;
    pw.values.push_back(vals[i]);
    pw.breakpoints.push_back(i - 1 < bounds.size() ? bounds[i - 1] : x_hi);
  }
  if (pw.values.size() == 1) pw.breakpoints.clear();
  return pw;
}

// 2x2 interface/propagation matrix chain, composed right-to-left with joint
// renormalisation of the amplitude pair (ratios are scale-invariant). The
// final-medium amplitudes are (1, 0): purely outgoing.
inline ScatteringResult reflection_transfer_matrix(const PiecewisePotential& pw, double e,
                                                   double mass,
                                                   Boundary boundary = Boundary::transmitting) {
  if (!(e > 0)) throw std::domain_error("transfer matrix: energy must be positive");
  const std::size_t m = pw.breakpoints.size();
  if (pw.values.size() != m + 1) throw ConfigError("piecewise potential: size mismatch");
  for (std::size_t i = 1; i < m; ++i)
    if (!(pw.breakpoints[i] > pw.breakpoints[i - 1]))
      throw ConfigError("piecewise potential: breakpoints must be strictly increasing");

  const double hbar = constants::hbar;
  auto wavenum = [&](cdouble v) { return std::sqrt(2.0 * mass * (e - v)) / hbar; };

  const cdouble k_in = wavenum(pw.values.front());
  if (k_in.imag() != 0 || !(k_in.real() > 0))
    throw ConfigError("transfer matrix: incident medium must be classically allowed and lossless");

  ScatteringResult res;
  res.k_in = k_in.real();
  const cdouble k_out = wavenum(pw.values.back());
  res.k_out = k_out.real();

  if (m == 0) {  // uniform medium
    res.t = 1;
    return res;
  }

  cdouble A = 1, B = 0;  // rightmost region, referenced at its left edge
  double log_scale = 0;
  cdouble k_next = k_out;
  for (std::size_t j = m; j-- > 0;) {
    const cdouble k = wavenum(pw.values[j]);
    const cdouble kappa = cdiv(k_next, k);
    cdouble a_new = 0.5 * ((1.0 + kappa) * A + (1.0 - kappa) * B);
    cdouble b_new = 0.5 * ((1.0 - kappa) * A + (1.0 + kappa) * B);
    if (j > 0) {  // propagate across region j of finite width
      const double d = pw.breakpoints[j] - pw.breakpoints[j - 1];
      const cdouble ph = std::exp(cdouble(0, 1) * k * d);
      a_new = cdiv(a_new, ph);
      b_new = b_new * ph;
    }
    const double s = std::max(std::abs(a_new), std::abs(b_new));
    if (!(s > 0) || !std::isfinite(s))
      throw NumericalError("transfer matrix: singular chain; refine the discretisation");
    a_new /= s;
    b_new /= s;
    log_scale += std::log(s);
    A = a_new;
    B = b_new;
    k_next = k;
  }

  if (std::abs(A) == 0)
    throw NumericalError("transfer matrix: singular chain; refine the discretisation");
  res.r = std::norm(cdiv(B, A));
  const double log_t2 = -2 * (std::log(std::abs(A)) + log_scale);
  const double t_flux = (k_out.real() / k_in.real()) * std::exp(log_t2);
  if (boundary == Boundary::transmitting) {
    res.t = t_flux;
    res.a = 1 - res.r - res.t;
  } else {
    res.t = 0;
    res.a = 1 - res.r;
  }
  return res;
}

// The stepwise composition that ignores interference: transmission is the
// product of the single-interface transmissions. Shipped for comparison with
// the transfer matrix; it has no continuum limit on smooth potentials.
inline ScatteringResult reflection_product_approx(const PiecewisePotential& pw, double e,
                                                  double mass) {
  if (!(e > 0)) throw std::domain_error("product approximation: energy must be positive");
  const double hbar = constants::hbar;
  auto wavenum = [&](cdouble v) { return std::sqrt(2.0 * mass * (e - v)) / hbar; };

  ScatteringResult res;
  res.k_in = wavenum(pw.values.front()).real();
  res.k_out = wavenum(pw.values.back()).real();
  double survival = 1;
  for (std::size_t j = 0; j + 1 < pw.values.size(); ++j) {
    const cdouble k1 = wavenum(pw.values[j]);
    const cdouble k2 = wavenum(pw.values[j + 1]);
    const double ri = std::norm(cdiv(k1 - k2, k1 + k2));
    survival *= std::max(0.0, 1 - ri);
  }
  res.r = 1 - survival;
  res.t = survival;
  res.a = 0;
  return res;
}

// Threshold form R ~ 1 - 2 beta4 k, clamped at zero.
inline double low_energy_asymptote(double k, double beta4) {
  if (k < 0) throw std::domain_error("low_energy_asymptote: k must be non-negative");
  return std::max(0.0, 1 - 2 * beta4 * k);
}

}  // namespace sqr

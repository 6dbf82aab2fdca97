#pragma once

#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "sqr/constants.hpp"
#include "sqr/errors.hpp"

namespace sqr {

using cdouble = std::complex<double>;

// V(x) = (v0/2) (1 + tanh((x - x0)/sigma)); sigma = 0 is the hard step.
struct TanhStep {
  double v0 = 0;     // J, signed
  double sigma = 0;  // m, >= 0
  double x0 = 0;     // m

  double value(double x) const {
    if (sigma == 0) return x > x0 ? v0 : (x == x0 ? 0.5 * v0 : 0.0);
    return 0.5 * v0 * (1 + std::tanh((x - x0) / sigma));
  }
};

struct HarmonicTrap {
  double mass = 0;
  double omega_r = 0;
  double omega_x = 0;
  double center_x = 0;

  double value(double x, double r) const {
    const double xr = x - center_x;
    return 0.5 * mass * (omega_r * omega_r * r * r + omega_x * omega_x * xr * xr);
  }
};

// Surface at x = surface_x; x' = surface_x - x is the distance from it.
// Outside the cutoff (x' > delta):  V = -c4 / (x'^3 (x' + 3 lambda_a / 2 pi^2)).
// At and beyond the cutoff:         V = V(delta) - i (x - surface_x + delta) v_im.
// The real part is continuous at the cutoff; the imaginary ramp removes atoms.
// c4 = 0 degenerates to a purely absorbing ramp.
struct CasimirPolderSurface {
  double surface_x = 0;    // m
  double c4 = 0;           // J m^4
  double lambda_a = 0;     // m
  double delta = 0.15e-6;  // cutoff offset, m
  double v_im = 1.6e-26;   // absorber slope, J/m

  double near_field_length() const {
    return 3 * lambda_a / (2 * constants::pi * constants::pi);
  }
  double real_at(double x_prime) const {
    if (c4 == 0) return 0.0;
    return -c4 / (x_prime * x_prime * x_prime * (x_prime + near_field_length()));
  }
  cdouble value(double x) const {
    const double xp = surface_x - x;
    if (xp > delta) return real_at(xp);
    return {real_at(delta), -(x - surface_x + delta) * v_im};
  }
};

// Exponentially decaying barrier outside the surface; clamped to its surface
// value behind the plane.
struct EvanescentField {
  double amplitude = 0;     // J at the surface, signed
  double decay_length = 0;  // m, > 0
  double surface_x = 0;     // m

  double value(double x) const {
    const double xp = surface_x - x;
    return xp > 0 ? amplitude * std::exp(-xp / decay_length) : amplitude;
  }
};

struct UniformOffset {
  double value_j = 0;  // J
};

using PotentialTerm =
    std::variant<TanhStep, HarmonicTrap, CasimirPolderSurface, EvanescentField, UniformOffset>;

// Ordered sum of terms, sampled on demand. Sampling is pure; the stack is
// immutable once built. Im(sample) <= 0 for every term.
class PotentialStack {
 public:
  PotentialStack() = default;

  void add(PotentialTerm term) {
    if (auto* ev = std::get_if<EvanescentField>(&term))
      if (!(ev->decay_length > 0)) throw ConfigError("evanescent term: decay length must be positive");
    if (auto* cp = std::get_if<CasimirPolderSurface>(&term)) {
      if (!(cp->delta > 0)) throw ConfigError("surface term: cutoff offset must be positive");
      if (cp->v_im < 0) throw ConfigError("surface term: absorber slope must be non-negative");
    }
    if (auto* ts = std::get_if<TanhStep>(&term))
      if (ts->sigma < 0) throw ConfigError("tanh term: width must be non-negative");
    terms_.push_back(term);
  }

  cdouble sample(double x, double r = 0) const {
    cdouble v = 0;
    for (const auto& term : terms_) {
      std::visit(
          [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, TanhStep>)
              v += t.value(x);
            else if constexpr (std::is_same_v<T, HarmonicTrap>)
              v += t.value(x, r);
            else if constexpr (std::is_same_v<T, CasimirPolderSurface>)
              v += t.value(x);
            else if constexpr (std::is_same_v<T, EvanescentField>)
              v += t.value(x);
            else
              v += t.value_j;
          },
          term);
    }
    return v;
  }

  const std::vector<PotentialTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  const CasimirPolderSurface* surface_term() const {
    for (const auto& term : terms_)
      if (auto* cp = std::get_if<CasimirPolderSurface>(&term)) return cp;
    return nullptr;
  }

 private:
  std::vector<PotentialTerm> terms_;
};

struct ProfileSample {
  double x;
  double re_v;
  double im_v;
};

inline std::vector<ProfileSample> real_part_profile(const PotentialStack& stack, double x_lo,
                                                    double x_hi, int samples) {
  if (samples < 2) throw ConfigError("profile: need at least 2 samples");
  if (!(x_hi > x_lo)) throw ConfigError("profile: empty x range");
  std::vector<ProfileSample> out;
  out.reserve(samples);
  const double step = (x_hi - x_lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double x = x_lo + i * step;
    const cdouble v = stack.sample(x);
    out.push_back({x, v.real(), v.imag()});
  }
  return out;
}

struct BarrierCalibration {
  double v_e;           // J
  double peak_x_prime;  // m
  double peak_height;   // J
};

namespace detail {

// Golden-section maximum of f on [lo, hi] to absolute tolerance tol_x.
template <class F>
inline std::pair<double, double> golden_max(F f, double lo, double hi, double tol_x) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol_x) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace detail

// Finds the evanescent amplitude v_e > 0 for which the combined barrier
// max_{x' > delta} [ Re V_cp(x') + v_e exp(-x'/lambda) ] equals e_kin.
// Bisection on v_e around a golden-section inner maximisation.
inline BarrierCalibration calibrate_evanescent_barrier(const CasimirPolderSurface& cp,
                                                       double lambda, double e_kin) {
  if (!(e_kin > 0)) throw ConfigError("barrier calibration: e_kin must be positive");
  if (!(lambda > 0)) throw ConfigError("barrier calibration: lambda must be positive");

  const double x_hi = std::max(20 * lambda, 5e-6);
  auto barrier = [&](double v_e) {
    auto f = [&](double xp) { return cp.real_at(xp) + v_e * std::exp(-xp / lambda); };
    return detail::golden_max(f, cp.delta, x_hi, 1e-10);
  };

  // bracket: grow v_e until the barrier exceeds e_kin
  double lo = 0, hi = e_kin;
  int grow = 0;
  while (barrier(hi).second < e_kin) {
    hi *= 4;
    if (++grow > 60)
      throw NumericalError(
          "barrier calibration failed: no barrier of the requested height is "
          "achievable (decay length too long for the surface attraction)");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (barrier(mid).second < e_kin)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-6 * hi) break;
  }
  auto [px, ph] = barrier(hi);
  return {hi, px, ph};
}

}  // namespace sqr

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sqr/constants.hpp"
#include "sqr/errors.hpp"

namespace sqr {

struct Species {
  std::string name;
  double mass = 0;      // kg
  double a_s = 0;       // s-wave scattering length, m (signed)
  double lambda_a = 0;  // dominant transition wavelength, m
  double c4 = 0;        // surface interaction coefficient, J m^4
};

struct TrapConfig {
  double omega_r = 0;       // radial angular frequency, rad/s
  double lambda_ratio = 0;  // axial/radial frequency ratio
  double center_x = 0;      // axial trap centre, m

  double omega_x() const { return lambda_ratio * omega_r; }
};

// Everything derivable from (species, trap, atom number). xi is infinite in
// the non-interacting limit a_s = 0; mu is a diagnostic only, used for the
// quasi-1D validity warning.
struct DerivedParams {
  double g = 0;      // 3D interaction coefficient, J m^3
  double g1d = 0;    // quasi-1D interaction coefficient, J m
  double l_r = 0;    // radial oscillator length, m
  double xi = std::numeric_limits<double>::infinity();  // soliton width, m
  double mu = 0;     // soliton chemical potential, J
  double beta4 = 0;  // length scale of c4, m
  double n_critical = 0;
  bool has_nonlinearity = false;
  bool warn_critical_number = false;  // N >= n_critical
  bool warn_quasi1d = false;          // hbar*omega_r <= |mu|
};

inline void validate_species(const Species& s) {
  if (!(s.mass > 0)) throw ConfigError("species '" + s.name + "': mass must be positive");
  if (!(s.lambda_a > 0)) throw ConfigError("species '" + s.name + "': lambda_a must be positive");
  if (s.c4 < 0) throw ConfigError("species '" + s.name + "': c4 must be non-negative");
}

// g = 4 pi hbar^2 a_s / m,  g1d = g / (2 pi l_r^2) = 2 hbar omega_r a_s,
// l_r = sqrt(hbar / (m omega_r)),  xi = l_r^2 / (|a_s| N) = 2 hbar^2 / (m |g1d| N).
inline DerivedParams derive_params(const Species& species, const TrapConfig& trap,
                                   double atom_count, double n_critical = 2700) {
  validate_species(species);
  if (!(atom_count > 0)) throw ConfigError("derive_params: atom count must be positive");
  if (!(trap.omega_r > 0)) throw ConfigError("derive_params: omega_r must be positive");

  const double hbar = constants::hbar;
  DerivedParams p;
  p.n_critical = n_critical;
  p.g = 4 * constants::pi * hbar * hbar * species.a_s / species.mass;
  p.l_r = std::sqrt(hbar / (species.mass * trap.omega_r));
  p.g1d = p.g / (2 * constants::pi * p.l_r * p.l_r);
  p.beta4 = std::sqrt(2 * species.mass * species.c4) / hbar;
  p.has_nonlinearity = species.a_s != 0;
  if (p.has_nonlinearity) {
    p.xi = p.l_r * p.l_r / (std::abs(species.a_s) * atom_count);
    p.mu = -hbar * hbar / (2 * species.mass * p.xi * p.xi);
  }
  p.warn_critical_number = atom_count >= n_critical;
  p.warn_quasi1d = hbar * trap.omega_r <= std::abs(p.mu);
  return p;
}

// Classical reflection/transmission threshold for a positive step of height v0.
inline double classical_critical_speed(double v0, const Species& species) {
  validate_species(species);
  if (!(v0 > 0)) throw std::domain_error("classical_critical_speed: step height must be positive");
  return std::sqrt(2 * v0 / species.mass);
}

// beta4 = sqrt(2 m c4) / hbar, i.e. c4 = beta4^2 hbar^2 / (2 m).
inline double low_energy_beta4(const Species& species) {
  if (!(species.mass > 0)) throw ConfigError("low_energy_beta4: invalid species mass");
  if (!(species.c4 > 0)) throw std::domain_error("low_energy_beta4: c4 must be positive");
  return std::sqrt(2 * species.mass * species.c4) / constants::hbar;
}

inline Species species_preset(const std::string& name) {
  if (name == "rb85-jila")
    return {"rb85-jila", 85.4678 * constants::amu, -0.6e-9, 780e-9, 9.1e-56};
  if (name == "na23-mit")
    return {"na23-mit", 22.989769 * constants::amu, +2.9e-9, 590e-9, 9.1e-56};
  throw ConfigError("unknown species preset '" + name + "'");
}

inline TrapConfig trap_preset(const std::string& name) {
  if (name == "rb85-jila") return {2 * constants::pi * 17.5, 0.4, 0.0};
  if (name == "na23-mit") return {2 * constants::pi * 3.3, 1.0, 0.0};
  throw ConfigError("unknown trap preset '" + name + "'");
}

}  // namespace sqr

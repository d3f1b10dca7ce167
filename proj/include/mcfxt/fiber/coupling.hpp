#pragma once

// Coupled-mode quantities for a pair of identical trench-assisted cores:
// propagation constant, mode coupling coefficient, statistical-mean crosstalk
// and the per-phase-matching-point discrete coupling.

#include <cmath>
#include <numbers>
#include <string>

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/bessel.hpp"
#include "mcfxt/fiber/geometry.hpp"

namespace mcfxt::fiber {

inline constexpr double kMinWavelengthNm = 1200.0;
inline constexpr double kMaxWavelengthNm = 1700.0;

inline void check_wavelength(double wavelength_nm) {
  if (!(wavelength_nm >= kMinWavelengthNm && wavelength_nm <= kMaxWavelengthNm)) {
    throw DomainError("wavelength " + std::to_string(wavelength_nm) +
                      " nm outside supported band [1200, 1700] nm");
  }
}

/// Free-space wavenumber k = 2 pi / lambda in rad/m.
inline double wavenumber(double wavelength_nm) {
  return 2.0 * std::numbers::pi / (wavelength_nm * 1e-9);
}

/// beta = 2 pi n_core / lambda in rad/m.
inline double propagation_constant(const FiberGeometry& geom, double wavelength_nm) {
  check_wavelength(wavelength_nm);
  return wavenumber(wavelength_nm) * geom.n_core;
}

/// Normalized parameters of the fundamental mode entering the coupling formula.
struct ModeParameters {
  double k = 0.0;      ///< free-space wavenumber (rad/m)
  double v1 = 0.0;     ///< core normalized frequency
  double u1 = 0.0;     ///< core transverse phase parameter
  double w1 = 0.0;     ///< cladding decay parameter
  double v2 = 0.0;     ///< trench normalized frequency
  double w2 = 0.0;     ///< trench decay parameter
  double beta_eff = 0.0;  ///< modal propagation constant used for U1/W1 (rad/m)
};

/// Rudolph-Neumann fit of the LP01 eigenvalue, W = 1.1428 V - 0.996.
inline double lp01_decay_parameter(double v) { return 1.1428 * v - 0.996; }

/// U1/W1 follow from the LP01 effective index (the core-index wavenumber would
/// make U1 vanish); V2, W2 and the trench terms follow the trench-assisted model.
inline ModeParameters mode_parameters(const FiberGeometry& geom, double wavelength_nm) {
  check_wavelength(wavelength_nm);
  geom.validate();
  ModeParameters m;
  const double a = geom.core_radius_um * 1e-6;
  m.k = wavenumber(wavelength_nm);
  m.v1 = m.k * a * geom.n_core * std::sqrt(2.0 * geom.delta1());
  m.w1 = lp01_decay_parameter(m.v1);
  if (!(m.w1 > 0.0)) {
    throw ModelDomainError("mode coupling: fundamental mode not guided (V1 = " +
                           std::to_string(m.v1) +
                           " gives W1 <= 0; beta must exceed k*n_cladding)");
  }
  m.u1 = std::sqrt(m.v1 * m.v1 - m.w1 * m.w1);
  const double kn0 = m.k * geom.n_cladding;
  m.beta_eff = std::sqrt(kn0 * kn0 + (m.w1 / a) * (m.w1 / a));
  m.v2 = m.k * a * geom.n_cladding * std::sqrt(2.0 * std::abs(geom.delta2()));
  m.w2 = std::sqrt(m.v2 * m.v2 + m.w1 * m.w1);
  return m;
}

/// Trench-assisted mode coupling coefficient kappa in 1/m.
inline double mode_coupling_coefficient(const FiberGeometry& geom, double pitch_um,
                                        double wavelength_nm) {
  if (!(pitch_um > 0.0)) throw DomainError("mode coupling: pitch must be positive");
  const ModeParameters m = mode_parameters(geom, wavelength_nm);
  const double a = geom.core_radius_um * 1e-6;
  const double cp = pitch_um * 1e-6;
  const double wt = geom.trench_width_um * 1e-6;
  const double gamma = m.w1 / (m.w1 + (m.w2 - m.w1) * wt / cp);
  const double k1 = bessel_k1(m.w1);
  const double amplitude = std::sqrt(geom.delta1()) / a * (m.u1 * m.u1) /
                           (m.v1 * m.v1 * m.v1 * k1 * k1) *
                           std::sqrt(std::numbers::pi * a * gamma / (m.w1 * cp));
  return amplitude * std::exp(-m.w1 * cp / a - 2.0 * (m.w2 - m.w1) * wt / a);
}

/// Statistical-mean crosstalk 2 kappa^2 R L / (beta Cp), without the floor.
inline double coupled_mean_crosstalk(const FiberGeometry& geom, double pitch_um,
                                     double wavelength_nm) {
  const double kappa = mode_coupling_coefficient(geom, pitch_um, wavelength_nm);
  const double beta = propagation_constant(geom, wavelength_nm);
  return 2.0 * kappa * kappa * geom.bend_radius_m * geom.length_m / (beta * pitch_um * 1e-6);
}

/// Mean crosstalk including the fan-in/out floor, as a linear power ratio.
inline double mean_crosstalk(const FiberGeometry& geom, double pitch_um, double wavelength_nm) {
  return coupled_mean_crosstalk(geom, pitch_um, wavelength_nm) + geom.xt_floor;
}

/// |K| = sqrt(2 pi kappa^2 R / (beta Cp gamma)).
inline double discrete_coupling(const FiberGeometry& geom, double pitch_um, double wavelength_nm) {
  const double kappa = mode_coupling_coefficient(geom, pitch_um, wavelength_nm);
  const double beta = propagation_constant(geom, wavelength_nm);
  return std::sqrt(2.0 * std::numbers::pi * kappa * kappa * geom.bend_radius_m /
                   (beta * pitch_um * 1e-6 * geom.twist_rate_rad_per_m));
}

/// Unrounded expected number of phase-matching points, L gamma / pi.
inline double expected_pmp_count(double length_m, double twist_rate_rad_per_m) {
  return length_m * twist_rate_rad_per_m / std::numbers::pi;
}

/// N = round(L gamma / pi), rounded half away from zero.  Throws ConfigError if N < 1.
inline int pmp_count(double length_m, double twist_rate_rad_per_m) {
  if (!(length_m > 0.0) || !(twist_rate_rad_per_m > 0.0)) {
    throw ConfigError("pmp_count: length and twist rate must be positive");
  }
  const double n = std::round(expected_pmp_count(length_m, twist_rate_rad_per_m));
  if (n < 1.0) {
    throw ConfigError("pmp_count: L*gamma/pi = " +
                      std::to_string(expected_pmp_count(length_m, twist_rate_rad_per_m)) +
                      " rounds below one phase-matching point (fiber too short or untwisted)");
  }
  return static_cast<int>(n);
}

/// Shift indices by dn/dT * dT and stretch the length by (1 + c_L dT).
/// dT must lie in [-30, 60] K.
inline FiberGeometry apply_temperature(const FiberGeometry& geom, double delta_t_k,
                                       const ThermalCoefficients& coeffs) {
  if (!(delta_t_k >= -30.0 && delta_t_k <= 60.0)) {
    throw DomainError("apply_temperature: temperature change " + std::to_string(delta_t_k) +
                      " K outside [-30, 60] K");
  }
  if (delta_t_k == 0.0) return geom;
  FiberGeometry out = geom;
  out.n_core += coeffs.dn_core_per_k * delta_t_k;
  out.n_cladding += coeffs.dn_cladding_per_k * delta_t_k;
  out.n_trench += coeffs.dn_trench_per_k * delta_t_k;
  out.length_m *= 1.0 + coeffs.length_per_k * delta_t_k;
  return out;
}

}  // namespace mcfxt::fiber

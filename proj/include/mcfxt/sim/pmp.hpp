#pragma once

// Phase-matching-point state for one excited core: fixed random positions along
// the fiber, and a Brownian phase offset per point and polarization.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/coupling.hpp"
#include "mcfxt/signal/spectrum.hpp"
#include "mcfxt/sim/rng.hpp"

namespace mcfxt::sim {

inline constexpr int kPolarizations = 2;

struct PmpState {
  int core = 0;
  std::vector<double> positions_m;                       ///< ascending, in [0, L]
  std::array<std::vector<double>, kPolarizations> phases;  ///< unwrapped, rad
  double walkoff_s_per_m = 0.0;
  double coupling = 0.0;  ///< |K|
  std::array<std::vector<GaussianStream>, kPolarizations> streams;

  std::size_t size() const { return positions_m.size(); }

  void validate(double length_m) const {
    if (positions_m.empty()) throw ConfigError("PMP state: no phase-matching points");
    for (std::size_t i = 1; i < positions_m.size(); ++i) {
      if (!(positions_m[i] > positions_m[i - 1])) {
        throw ConfigError("PMP state: positions must be strictly increasing");
      }
    }
    if (positions_m.front() < 0.0 || positions_m.back() > length_m) {
      throw ConfigError("PMP state: positions outside [0, L]");
    }
    for (const auto& p : phases) {
      if (p.size() != positions_m.size()) throw ConfigError("PMP state: phase list length mismatch");
    }
    if (!(walkoff_s_per_m >= 0.0)) throw ConfigError("PMP state: walk-off must be >= 0");
  }
};

/// N = pmp_count points placed uniformly at random along the fiber and sorted;
/// phases start uniform in [0, 2 pi).  Everything is drawn from streams keyed
/// by (seed, core[, polarization, point]).
inline PmpState init_pmps(const fiber::FiberGeometry& geom, double pitch_um, double wavelength_nm,
                          double walkoff_s_per_m, std::uint64_t seed, int core) {
  const int n = fiber::pmp_count(geom.length_m, geom.twist_rate_rad_per_m);
  PmpState s;
  s.core = core;
  s.walkoff_s_per_m = walkoff_s_per_m;
  s.coupling = fiber::discrete_coupling(geom, pitch_um, wavelength_nm);

  auto pos_stream = make_stream(seed, StreamPurpose::Positions, {static_cast<std::uint32_t>(core)});
  std::uniform_real_distribution<double> along(0.0, geom.length_m);
  s.positions_m.resize(static_cast<std::size_t>(n));
  for (auto& z : s.positions_m) z = along(pos_stream);
  std::sort(s.positions_m.begin(), s.positions_m.end());
  // Coincident draws are measure-zero; nudge to keep the ordering strict.
  for (std::size_t i = 1; i < s.positions_m.size(); ++i) {
    if (!(s.positions_m[i] > s.positions_m[i - 1])) {
      s.positions_m[i] = std::nextafter(s.positions_m[i - 1], geom.length_m);
    }
  }

  for (int pol = 0; pol < kPolarizations; ++pol) {
    auto& streams = s.streams[static_cast<std::size_t>(pol)];
    auto& phases = s.phases[static_cast<std::size_t>(pol)];
    streams.reserve(static_cast<std::size_t>(n));
    phases.reserve(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
      streams.push_back(GaussianStream{make_stream(seed, StreamPurpose::Phase,
                                                   {static_cast<std::uint32_t>(core),
                                                    static_cast<std::uint32_t>(pol),
                                                    static_cast<std::uint32_t>(l)})});
      phases.push_back(streams.back().uniform(0.0, 2.0 * std::numbers::pi));
    }
  }
  s.validate(geom.length_m);
  return s;
}

/// Adds an independent N(0, 2 D dt) increment to every phase.
inline void evolve_phases(PmpState& state, double dt, double diffusion) {
  if (!(dt > 0.0)) throw DomainError("evolve_phases: dt must be positive");
  if (!(diffusion >= 0.0)) throw DomainError("evolve_phases: diffusion must be >= 0");
  if (diffusion == 0.0) return;
  const double sigma = std::sqrt(2.0 * diffusion * dt);
  for (int pol = 0; pol < kPolarizations; ++pol) {
    auto& phases = state.phases[static_cast<std::size_t>(pol)];
    auto& streams = state.streams[static_cast<std::size_t>(pol)];
    for (std::size_t l = 0; l < phases.size(); ++l) phases[l] += sigma * streams[l]();
  }
}

/// Complex crosstalk field K sum_l exp(-j (Phi_l + s z_l omega)) for one polarization.
inline std::complex<double> coupled_field(const PmpState& state, int pol, double omega) {
  const auto& phases = state.phases[static_cast<std::size_t>(pol)];
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t l = 0; l < phases.size(); ++l) {
    sum += std::polar(1.0, -(phases[l] + state.walkoff_s_per_m * state.positions_m[l] * omega));
  }
  return state.coupling * sum;
}

/// |K sum_l exp(-j (Phi_l + s z_l omega))|^2 at angular offset omega (rad/s).
inline double transfer_power(const PmpState& state, int pol, double omega) {
  return std::norm(coupled_field(state, pol, omega));
}

/// Launched power splits evenly between the two polarizations.
inline constexpr double kPolarizationWeight = 0.5;

/// Reference evaluation: line-by-line sum over the spectrum and both polarizations,
/// one excited core, floor added.
inline double instantaneous_xt(const PmpState& state, const signal::SourceSpectrum& spectrum,
                               double xt_floor) {
  double total = 0.0;
  for (int pol = 0; pol < kPolarizations; ++pol) {
    double p = spectrum.carrier_fraction * transfer_power(state, pol, 0.0);
    for (const auto& line : spectrum.lines) {
      p += line.fraction * transfer_power(state, pol, 2.0 * std::numbers::pi * line.offset_hz);
    }
    total += kPolarizationWeight * p;
  }
  return total + xt_floor;
}

/// Several excited cores fed from one split source: fields add with per-core
/// path phases before detection.  Reference evaluation, floor added per core.
inline double instantaneous_xt_coherent(std::span<const PmpState> states,
                                        std::span<const double> path_phases,
                                        const signal::SourceSpectrum& spectrum, double xt_floor) {
  auto field_power = [&](int pol, double omega) {
    std::complex<double> e{0.0, 0.0};
    for (std::size_t c = 0; c < states.size(); ++c) {
      e += std::polar(1.0, -path_phases[c]) * coupled_field(states[c], pol, omega);
    }
    return std::norm(e);
  };
  double total = 0.0;
  for (int pol = 0; pol < kPolarizations; ++pol) {
    double p = spectrum.carrier_fraction * field_power(pol, 0.0);
    for (const auto& line : spectrum.lines) {
      p += line.fraction * field_power(pol, 2.0 * std::numbers::pi * line.offset_hz);
    }
    total += kPolarizationWeight * p;
  }
  return total + xt_floor * static_cast<double>(states.size());
}

}  // namespace mcfxt::sim

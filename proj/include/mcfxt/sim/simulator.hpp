#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/coupling.hpp"
#include "mcfxt/fiber/geometry.hpp"
#include "mcfxt/signal/spectrum.hpp"
#include "mcfxt/sim/kernel.hpp"
#include "mcfxt/sim/pmp.hpp"
#include "mcfxt/sim/rng.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::sim {

/// How contributions from several excited cores meet in the target core.
///  Coherent:   fields add before detection, each core's path carrying its own
///              slowly drifting phase (the excited cores share one source).
///  Incoherent: every core is an independent PMP process and powers add.
enum class CoreCombining { Coherent, Incoherent };

inline std::string_view to_string(CoreCombining c) {
  return c == CoreCombining::Coherent ? "coherent" : "incoherent";
}

inline CoreCombining core_combining_from_string(std::string_view s) {
  if (s == "coherent") return CoreCombining::Coherent;
  if (s == "incoherent") return CoreCombining::Incoherent;
  throw ConfigError("unknown core combining '" + std::string(s) + "' (expected coherent or incoherent)");
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInvTwoPi = 1.0 / kTwoPi;

inline constexpr double kDefaultWalkoffSPerM = 1e-13;  // 0.1 ps/m
inline constexpr double kDefaultTemperatureC = 23.0;

struct SimConfig {
  fiber::FiberGeometry geometry = fiber::calibrated_geometry();
  fiber::CoreLayout layout = fiber::default_eight_core_layout();
  fiber::ThermalCoefficients thermal = fiber::default_thermal_coefficients();
  signal::SourceSpectrum source = signal::build_cw_spectrum();
  std::vector<int> excited_cores = {1};
  int target_core = 3;
  double wavelength_nm = 1550.0;
  double duration_s = 600.0;
  double sample_interval_s = 0.025;
  double averaging_time_s = 0.025;
  int substeps_per_sample = 8;           ///< power evaluations per averaging window
  double phase_diffusion = 0.01;          ///< D, rad^2/s
  double walkoff_s_per_m = kDefaultWalkoffSPerM;
  double temperature_c = kDefaultTemperatureC;
  std::uint64_t seed = 1;
  CoreCombining combining = CoreCombining::Coherent;
  double path_phase_diffusion_ratio = 2000.0;  ///< path-phase D as a multiple of phase_diffusion

  std::size_t sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s / sample_interval_s));
  }
  double substep_s() const { return averaging_time_s / substeps_per_sample; }

  void validate() const {
    auto require = [](bool ok, const std::string& what) {
      if (!ok) throw ConfigError("simulation config: " + what);
    };
    geometry.validate();
    layout.validate(geometry.core_radius_um);
    source.validate();
    require(duration_s > 0.0, "duration must be > 0");
    require(sample_interval_s > 0.0, "sample interval must be > 0");
    require(sample_count() >= 1, "duration shorter than one sample interval");
    require(substeps_per_sample >= 1, "substeps_per_sample must be >= 1");
    require(averaging_time_s > 0.0, "averaging time must be > 0");
    require(averaging_time_s <= sample_interval_s * (1.0 + 1e-12),
            "averaging time must not exceed the sample interval (use resample for coarser averaging)");
    require(phase_diffusion >= 0.0, "phase diffusion must be >= 0");
    require(path_phase_diffusion_ratio >= 0.0, "path phase diffusion ratio must be >= 0");
    require(walkoff_s_per_m >= 0.0, "walk-off must be >= 0");
    require(!excited_cores.empty(), "at least one excited core required");
    require(layout.contains(target_core), "target core " + std::to_string(target_core) + " not in layout");
    std::set<int> seen;
    for (int c : excited_cores) {
      require(layout.contains(c), "excited core " + std::to_string(c) + " not in layout");
      require(c != target_core, "excited cores must exclude the target core");
      require(seen.insert(c).second, "excited core " + std::to_string(c) + " listed twice");
    }
    fiber::check_wavelength(wavelength_nm);
    (void)fiber::pmp_count(geometry.length_m, geometry.twist_rate_rad_per_m);
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Move the configuration to temperature `t_c` (20..80 C): indices and length via
/// apply_temperature, walk-off scaled by (1 + c_s dT).
inline SimConfig set_temperature(const SimConfig& config, double t_c) {
  if (!(t_c >= 20.0 && t_c <= 80.0)) {
    throw ConfigError("temperature " + std::to_string(t_c) + " C outside [20, 80] C");
  }
  const double dt = t_c - config.temperature_c;
  if (dt == 0.0) return config;
  SimConfig out = config;
  try {
    out.geometry = fiber::apply_temperature(config.geometry, dt, config.thermal);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  out.walkoff_s_per_m = config.walkoff_s_per_m * (1.0 + config.thermal.walkoff_per_k * dt);
  out.temperature_c = t_c;
  return out;
}

/// Mean linear crosstalk the configuration converges to: the coupled-mode mean per excited core plus its floor.
inline double expected_mean_xt(const SimConfig& config) {
  double total = 0.0;
  for (int c : config.excited_cores) {
    total += fiber::mean_crosstalk(config.geometry, config.layout.pitch_um(c, config.target_core),
                                   config.wavelength_nm);
  }
  return total;
}

/// Stateful stepper behind simulate_series; exposed for tests that need the
/// instantaneous power.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config) : config_(config) {
    config_.validate();
    for (int c : config_.excited_cores) {
      states_.push_back(init_pmps(config_.geometry, config_.layout.pitch_um(c, config_.target_core),
                                  config_.wavelength_nm, config_.walkoff_s_per_m, config_.seed, c));
      path_streams_.push_back(GaussianStream{make_stream(config_.seed, StreamPurpose::PathPhase,
                                                         {static_cast<std::uint32_t>(c)})});
      path_phases_.push_back(path_streams_.back().uniform(0.0, 2.0 * std::numbers::pi));
    }
    floor_ = config_.geometry.xt_floor * static_cast<double>(states_.size());
    if (config_.combining == CoreCombining::Coherent || states_.size() == 1) {
      std::vector<double> delays;
      for (const auto& s : states_) {
        for (double z : s.positions_m) delays.push_back(s.walkoff_s_per_m * z);
      }
      kernels_.emplace_back(delays, config_.source);
    } else {
      for (const auto& s : states_) {
        std::vector<double> delays;
        for (double z : s.positions_m) delays.push_back(s.walkoff_s_per_m * z);
        kernels_.emplace_back(delays, config_.source);
      }
    }
  }

  const SimConfig& config() const { return config_; }
  const std::vector<PmpState>& states() const { return states_; }
  const std::vector<double>& path_phases() const { return path_phases_; }

  void advance(double dt) {
    for (auto& s : states_) evolve_phases(s, dt, config_.phase_diffusion);
    if (config_.combining == CoreCombining::Coherent && states_.size() > 1) {
      const double d = config_.phase_diffusion * config_.path_phase_diffusion_ratio;
      if (d > 0.0) {
        const double sigma = std::sqrt(2.0 * d * dt);
        for (std::size_t c = 0; c < path_phases_.size(); ++c) path_phases_[c] += sigma * path_streams_[c]();
      }
    }
  }

  /// Linear crosstalk at the current state, floor included.
  double power() {
    double total = 0.0;
    const bool joint = kernels_.size() == 1;
    for (int pol = 0; pol < kPolarizations; ++pol) {
      double p = 0.0;
      std::size_t offset = 0;
      for (std::size_t c = 0; c < states_.size(); ++c) {
        const auto& s = states_[c];
        const auto& phases = s.phases[static_cast<std::size_t>(pol)];
        if (!joint) offset = 0;
        resize(joint ? total_points() : s.size());
        const double theta = joint ? path_phases_[c] : 0.0;
        for (std::size_t l = 0; l < phases.size(); ++l) {
          // Reduce before sin/cos: glibc's argument reduction slows down as the
          // unwrapped phases wander far from zero.
          double phi = phases[l] + theta;
          phi -= kTwoPi * std::nearbyint(phi * kInvTwoPi);
          re_(static_cast<Eigen::Index>(offset + l)) = s.coupling * std::cos(phi);
          im_(static_cast<Eigen::Index>(offset + l)) = s.coupling * std::sin(phi);
        }
        offset += phases.size();
        if (!joint) p += kernels_[c].evaluate(re_, im_);
      }
      if (joint) p = kernels_.front().evaluate(re_, im_);
      total += kPolarizationWeight * p;
    }
    return total + floor_;
  }

 private:
  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& s : states_) n += s.size();
    return n;
  }
  void resize(std::size_t n) {
    if (static_cast<std::size_t>(re_.size()) != n) {
      re_.resize(static_cast<Eigen::Index>(n));
      im_.resize(static_cast<Eigen::Index>(n));
    }
  }

  SimConfig config_;
  std::vector<PmpState> states_;
  std::vector<GaussianStream> path_streams_;
  std::vector<double> path_phases_;
  std::vector<TransferKernel> kernels_;
  double floor_ = 0.0;
  Eigen::VectorXd re_, im_;
};

inline SeriesMetadata metadata_for(const SimConfig& config) {
  SeriesMetadata m;
  m.source_kind = std::string(signal::to_string(config.source.kind));
  m.baud = config.source.baud;
  m.prbs_order = config.source.prbs_order;
  m.qam_order = config.source.qam_order;
  m.temperature_c = config.temperature_c;
  m.seed = config.seed;
  m.excited_cores = config.excited_cores;
  m.target_core = config.target_core;
  return m;
}

/// One sample per sample interval; each is the linear mean of `substeps_per_sample`
/// evaluations spread over the last `averaging_time_s` of the interval.
inline XtSeries simulate_series(const SimConfig& config) {
  Simulator sim(config);
  const std::size_t n = config.sample_count();
  const double sub = config.substep_s();
  const double gap = config.sample_interval_s - config.averaging_time_s;
  XtSeries out;
  out.averaging_time_s = config.averaging_time_s;
  out.metadata = metadata_for(config);
  out.time_s.reserve(n);
  out.xt_db.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (gap > 1e-12 * config.sample_interval_s) sim.advance(gap);
    double acc = 0.0;
    for (int k = 0; k < config.substeps_per_sample; ++k) {
      sim.advance(sub);
      acc += sim.power();
    }
    out.time_s.push_back(static_cast<double>(i + 1) * config.sample_interval_s);
    out.xt_db.push_back(fiber::linear_to_db(acc / config.substeps_per_sample));
  }
  return out;
}

}  // namespace mcfxt::sim

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"

namespace mcfxt::fiber {

/// Linear power ratio from dB and back.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Step-index core surrounded by a depressed trench inside a silica cladding.
///
/// Indices are stored directly; the relative index differences are derived:
///   delta1 = (n_core^2 - n_cladding^2) / (2 n_core^2)
///   delta2 = (n_trench^2 - n_cladding^2) / (2 n_cladding^2)   (negative for a trench)
struct FiberGeometry {
  double core_radius_um = 4.0;
  double trench_width_um = 0.0;
  double n_core = 1.45;
  double n_cladding = 1.444;
  double n_trench = 1.444;
  double length_m = 1000.0;
  double bend_radius_m = 0.17;
  double twist_rate_rad_per_m = 0.1;
  double xt_floor = 0.0;  ///< fan-in/out leakage, linear power ratio

  double delta1() const {
    return (n_core * n_core - n_cladding * n_cladding) / (2.0 * n_core * n_core);
  }
  double delta2() const {
    return (n_trench * n_trench - n_cladding * n_cladding) / (2.0 * n_cladding * n_cladding);
  }

  /// Build from the relative index differences instead of absolute indices.
  static FiberGeometry from_deltas(double core_radius_um, double trench_width_um, double n_cladding,
                                   double delta1, double delta2) {
    FiberGeometry g;
    g.core_radius_um = core_radius_um;
    g.trench_width_um = trench_width_um;
    g.n_cladding = n_cladding;
    g.n_core = n_cladding / std::sqrt(1.0 - 2.0 * delta1);
    g.n_trench = n_cladding * std::sqrt(1.0 + 2.0 * delta2);
    return g;
  }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ConfigError(std::string("fiber geometry: ") + what);
    };
    require(core_radius_um > 0.0, "core_radius_um must be > 0");
    require(trench_width_um >= 0.0, "trench_width_um must be >= 0");
    require(length_m > 0.0, "length_m must be > 0");
    require(bend_radius_m > 0.0, "bend_radius_m must be > 0");
    require(twist_rate_rad_per_m > 0.0, "twist_rate_rad_per_m must be > 0");
    require(n_core > n_cladding, "n_core must exceed n_cladding (delta1 > 0)");
    require(n_trench <= n_cladding, "n_trench must not exceed n_cladding (delta2 <= 0)");
    require(xt_floor >= 0.0, "xt_floor must be >= 0");
  }

  friend bool operator==(const FiberGeometry&, const FiberGeometry&) = default;
};

/// Core dn/dT below the 1.1e-5 /K cladding value; the differential lowers delta1
/// with temperature.  Set by tools/calibrate_geometry for +1.5 dB over +30 K.
inline constexpr double kCalibratedDnCorePerK = 6.0001378550815034e-06;

/// dn/dT per region plus the relative length expansion and skew growth.
struct ThermalCoefficients {
  double dn_core_per_k = kCalibratedDnCorePerK;
  double dn_cladding_per_k = 1.1e-5;
  double dn_trench_per_k = 1.1e-5;
  double length_per_k = 4.1e-7;    ///< relative length change per kelvin
  double walkoff_per_k = 0.01;     ///< relative walk-off growth per kelvin

  friend bool operator==(const ThermalCoefficients&, const ThermalCoefficients&) = default;
};

struct CorePosition {
  double x_um = 0.0;
  double y_um = 0.0;
  friend bool operator==(const CorePosition&, const CorePosition&) = default;
};

/// Core centres in the fiber cross-section.  Cores are addressed by 1-based id.
class CoreLayout {
 public:
  CoreLayout() = default;
  explicit CoreLayout(std::vector<CorePosition> cores) : cores_(std::move(cores)) {}

  std::size_t size() const { return cores_.size(); }
  const std::vector<CorePosition>& cores() const { return cores_; }

  /// Centre-to-centre distance in micrometres between two 1-based core ids.
  double pitch_um(int core_a, int core_b) const {
    const auto& a = at(core_a);
    const auto& b = at(core_b);
    return std::hypot(a.x_um - b.x_um, a.y_um - b.y_um);
  }

  std::vector<std::vector<double>> pitch_matrix() const {
    const std::size_t n = cores_.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m[i][j] = m[j][i] = pitch_um(static_cast<int>(i + 1), static_cast<int>(j + 1));
      }
    }
    return m;
  }

  /// All pairwise pitches must exceed one core diameter.
  void validate(double core_radius_um) const {
    if (cores_.empty()) throw ConfigError("core layout: no cores defined");
    for (std::size_t i = 0; i < cores_.size(); ++i) {
      for (std::size_t j = i + 1; j < cores_.size(); ++j) {
        const double p = pitch_um(static_cast<int>(i + 1), static_cast<int>(j + 1));
        if (!(p > 2.0 * core_radius_um)) {
          throw ConfigError("core layout: cores " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " overlap (pitch " + std::to_string(p) +
                            " um <= 2a)");
        }
      }
    }
  }

  bool contains(int core) const { return core >= 1 && static_cast<std::size_t>(core) <= cores_.size(); }

  friend bool operator==(const CoreLayout&, const CoreLayout&) = default;

 private:
  const CorePosition& at(int core) const {
    if (!contains(core)) throw ConfigError("core layout: unknown core id " + std::to_string(core));
    return cores_[static_cast<std::size_t>(core - 1)];
  }

  std::vector<CorePosition> cores_;
};

/// Eight cores in two rows of four.  Horizontal neighbours are 35 um apart,
/// vertical neighbours 45 um; odd ids run along the top row, even ids along the bottom:
///
///     1   3   5   7
///     2   4   6   8
inline CoreLayout default_eight_core_layout() {
  constexpr double dx = 35.0;
  constexpr double dy = 45.0;
  std::vector<CorePosition> cores;
  for (int col = 0; col < 4; ++col) {
    const double x = (col - 1.5) * dx;
    cores.push_back({x, 0.5 * dy});
    cores.push_back({x, -0.5 * dy});
  }
  return CoreLayout(std::move(cores));
}

/// Mid-point of the measured fan-in/out leakage range (-72 .. -55 dB).
inline constexpr double kDefaultXtFloorDb = -63.5;

// Calibrated so the mean crosstalk (floor included) is -45.95 dB at 1550 nm over a
// 35 um pitch with a 0.113 dB/nm least-squares slope across 1480-1630 nm, and a
// +30 K change raises it by 1.5 dB.  Regenerate with
// tools/calibrate_geometry.
inline constexpr double kCalibratedCoreRadiusUm = 4.0;
inline constexpr double kCalibratedNCladding = 1.444;
inline constexpr double kCalibratedDelta2 = -0.007;
inline constexpr double kCalibratedDelta1 = 0.0053249839315445933;
inline constexpr double kCalibratedTrenchWidthUm = 0.87644096287697226;

/// The default trench-assisted fiber: 1 km, 0.17 m bend radius, -63.5 dB floor.
inline FiberGeometry calibrated_geometry() {
  FiberGeometry g = FiberGeometry::from_deltas(kCalibratedCoreRadiusUm, kCalibratedTrenchWidthUm,
                                               kCalibratedNCladding, kCalibratedDelta1,
                                               kCalibratedDelta2);
  g.length_m = 1000.0;
  g.bend_radius_m = 0.17;
  g.twist_rate_rad_per_m = 0.1;
  g.xt_floor = db_to_linear(kDefaultXtFloorDb);
  return g;
}

inline ThermalCoefficients default_thermal_coefficients() { return ThermalCoefficients{}; }

}  // namespace mcfxt::fiber

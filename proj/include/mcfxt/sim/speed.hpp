#pragma once

#include <algorithm>
#include <string>

#include "mcfxt/errors.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::sim {

inline constexpr double kDefaultHysteresisDb = 0.5;

/// Number of confirmed peaks and bottoms: an extremum counts once the series has
/// moved `hysteresis_db` away from it.  The first such move only fixes the direction.
inline std::size_t count_extrema(const XtSeries& series, double hysteresis_db = kDefaultHysteresisDb) {
  if (series.size() < 3) throw AnalysisError("fluctuation speed needs at least 3 samples");
  if (!(hysteresis_db > 0.0)) throw AnalysisError("hysteresis must be > 0 dB");
  const auto& x = series.xt_db;
  int direction = 0;  // +1 rising, -1 falling, 0 unknown
  double hi = x[0], lo = x[0];
  std::size_t events = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double v = x[i];
    if (direction == 0) {
      hi = std::max(hi, v);
      lo = std::min(lo, v);
      if (v - lo >= hysteresis_db) {
        direction = 1;
        hi = v;
      } else if (hi - v >= hysteresis_db) {
        direction = -1;
        lo = v;
      }
    } else if (direction > 0) {
      if (v > hi) {
        hi = v;
      } else if (hi - v >= hysteresis_db) {
        ++events;
        direction = -1;
        lo = v;
      }
    } else {
      if (v < lo) {
        lo = v;
      } else if (v - lo >= hysteresis_db) {
        ++events;
        direction = 1;
        hi = v;
      }
    }
  }
  return events;
}

/// Peaks plus bottoms per hour of series time.
inline double fluctuation_speed(const XtSeries& series, double hysteresis_db = kDefaultHysteresisDb) {
  const std::size_t events = count_extrema(series, hysteresis_db);
  const double span = series.time_s.back() - series.time_s.front() + series.sample_interval();
  if (!(span > 0.0)) throw AnalysisError("fluctuation speed: series spans no time");
  return static_cast<double>(events) * 3600.0 / span;
}

}  // namespace mcfxt::sim

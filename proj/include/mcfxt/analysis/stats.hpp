#pragma once

// Window statistics over crosstalk series.  Averages are taken in linear power
// and reported in dB, as a power meter integrates power.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/geometry.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::analysis {

using sim::XtSeries;

/// Half-open time range [start_s, end_s) over sample timestamps.
struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;
  double length() const { return end_s - start_s; }
};

/// The window covering every sample of the series.
inline TimeWindow whole(const XtSeries& s) {
  if (s.empty()) throw AnalysisError("empty series");
  return {s.time_s.front(), s.time_s.back() + std::max(s.sample_interval(), 1e-9)};
}

/// The first `length_s` seconds of the series.
inline TimeWindow prefix(const XtSeries& s, double length_s) {
  if (s.empty()) throw AnalysisError("empty series");
  return {s.time_s.front(), s.time_s.front() + length_s};
}

struct WindowStats {
  double window_length_s = 0.0;
  double static_xt_db = 0.0;
  double dynamic_xt_db = 0.0;
  double worst_case_xt_db = 0.0;
  std::size_t sample_count = 0;
};

namespace detail {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline IndexRange select(const XtSeries& s, const TimeWindow& w) {
  if (s.time_s.size() != s.xt_db.size()) throw AnalysisError("series: time and value arrays differ in length");
  // Tolerance keeps a prefix window of k intervals at exactly k samples despite rounding.
  const double tol = 1e-9 * std::max(s.sample_interval(), 1e-12);
  const auto lo = std::lower_bound(s.time_s.begin(), s.time_s.end(), w.start_s - tol);
  const auto hi = std::lower_bound(lo, s.time_s.end(), w.end_s - tol);
  IndexRange r{static_cast<std::size_t>(lo - s.time_s.begin()), static_cast<std::size_t>(hi - s.time_s.begin())};
  if (r.begin >= r.end) {
    throw AnalysisError("window [" + std::to_string(w.start_s) + ", " + std::to_string(w.end_s) +
                        ") s contains no samples");
  }
  return r;
}

}  // namespace detail

/// 10 log10 of the mean linear power in the window.
inline double static_xt(const XtSeries& s, const TimeWindow& w) {
  const auto r = detail::select(s, w);
  double sum = 0.0;
  for (std::size_t i = r.begin; i < r.end; ++i) sum += fiber::db_to_linear(s.xt_db[i]);
  return fiber::linear_to_db(sum / static_cast<double>(r.end - r.begin));
}
inline double static_xt(const XtSeries& s) { return static_xt(s, whole(s)); }

/// max - min of the dB samples in the window.
inline double dynamic_xt(const XtSeries& s, const TimeWindow& w) {
  const auto r = detail::select(s, w);
  const auto [lo, hi] = std::minmax_element(s.xt_db.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                            s.xt_db.begin() + static_cast<std::ptrdiff_t>(r.end));
  return *hi - *lo;
}
inline double dynamic_xt(const XtSeries& s) { return dynamic_xt(s, whole(s)); }

/// Largest dB sample in the window.
inline double worst_case_xt(const XtSeries& s, const TimeWindow& w) {
  const auto r = detail::select(s, w);
  return *std::max_element(s.xt_db.begin() + static_cast<std::ptrdiff_t>(r.begin),
                           s.xt_db.begin() + static_cast<std::ptrdiff_t>(r.end));
}
inline double worst_case_xt(const XtSeries& s) { return worst_case_xt(s, whole(s)); }

inline WindowStats window_stats(const XtSeries& s, const TimeWindow& w) {
  const auto r = detail::select(s, w);
  WindowStats out;
  out.sample_count = r.end - r.begin;
  out.window_length_s = static_cast<double>(out.sample_count) * s.sample_interval();
  out.static_xt_db = static_xt(s, w);
  out.dynamic_xt_db = dynamic_xt(s, w);
  out.worst_case_xt_db = worst_case_xt(s, w);
  return out;
}
inline WindowStats window_stats(const XtSeries& s) { return window_stats(s, whole(s)); }

/// zeta_t = S_{t+1} - S_t.
inline std::vector<double> step_sequence(const XtSeries& s) {
  if (s.size() < 2) throw AnalysisError("step sequence needs at least 2 samples");
  std::vector<double> out(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) out[i] = s.xt_db[i + 1] - s.xt_db[i];
  return out;
}

/// Average non-overlapping blocks of consecutive samples in linear power.  The new
/// averaging time must be an integer multiple of the current one; a trailing
/// partial block is dropped.  Each block is stamped with its last sample's time.
inline XtSeries resample_average(const XtSeries& s, double new_averaging_time_s) {
  if (!(s.averaging_time_s > 0.0)) throw AnalysisError("series has no recorded averaging time");
  const double ratio = new_averaging_time_s / s.averaging_time_s;
  const double k = std::round(ratio);
  if (!(k >= 1.0) || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio)) {
    const double lo = std::max(1.0, std::floor(ratio)) * s.averaging_time_s;
    const double hi = std::max(1.0, std::ceil(ratio)) * s.averaging_time_s;
    throw AnalysisError("averaging time " + std::to_string(new_averaging_time_s) +
                        " s is not an integer multiple of " + std::to_string(s.averaging_time_s) +
                        " s; nearest valid values are " + std::to_string(lo) + " s and " +
                        std::to_string(hi) + " s");
  }
  const auto factor = static_cast<std::size_t>(k);
  if (factor > s.size()) {
    throw AnalysisError("averaging time " + std::to_string(new_averaging_time_s) +
                        " s exceeds the series length");
  }
  XtSeries out;
  out.averaging_time_s = new_averaging_time_s;
  out.metadata = s.metadata;
  if (factor == 1) {
    out.time_s = s.time_s;
    out.xt_db = s.xt_db;
    return out;
  }
  const std::size_t blocks = s.size() / factor;
  out.time_s.reserve(blocks);
  out.xt_db.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t i = b * factor; i < (b + 1) * factor; ++i) sum += fiber::db_to_linear(s.xt_db[i]);
    out.time_s.push_back(s.time_s[(b + 1) * factor - 1]);
    out.xt_db.push_back(fiber::linear_to_db(sum / static_cast<double>(factor)));
  }
  return out;
}

/// base, 2 base, 4 base, ... while the rung does not exceed `max_s` (x2 steps).
inline std::vector<double> averaging_ladder(double base_s, double max_s) {
  if (!(base_s > 0.0) || !(max_s >= base_s)) throw AnalysisError("averaging ladder: need 0 < base <= max");
  std::vector<double> out;
  for (double t = base_s; t <= max_s * (1.0 + 1e-12); t *= 2.0) out.push_back(t);
  return out;
}

}  // namespace mcfxt::analysis

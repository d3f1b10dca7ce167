#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"

namespace mcfxt::sim {

struct SeriesMetadata {
  std::string source_kind;
  double baud = 0.0;
  int prbs_order = 0;
  int qam_order = 0;
  double temperature_c = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> excited_cores;
  int target_core = 0;

  friend bool operator==(const SeriesMetadata&, const SeriesMetadata&) = default;
};

/// Timestamped crosstalk samples in dB, each the linear-power average over `averaging_time_s`.
struct XtSeries {
  std::vector<double> time_s;
  std::vector<double> xt_db;
  double averaging_time_s = 0.0;
  SeriesMetadata metadata;

  std::size_t size() const { return xt_db.size(); }
  bool empty() const { return xt_db.empty(); }

  std::vector<double> linear() const {
    std::vector<double> out(xt_db.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(10.0, xt_db[i] / 10.0);
    return out;
  }

  /// Spacing between consecutive samples (0 for fewer than two samples).
  double sample_interval() const {
    return time_s.size() < 2 ? 0.0
                             : (time_s.back() - time_s.front()) / static_cast<double>(time_s.size() - 1);
  }

  void validate() const {
    if (time_s.size() != xt_db.size()) throw AnalysisError("series: time and value arrays differ in length");
    for (std::size_t i = 0; i < xt_db.size(); ++i) {
      if (!std::isfinite(xt_db[i]) || !std::isfinite(time_s[i])) {
        throw AnalysisError("series: non-finite sample at index " + std::to_string(i));
      }
      if (i > 0 && !(time_s[i] > time_s[i - 1])) {
        throw AnalysisError("series: timestamps not increasing at index " + std::to_string(i));
      }
    }
  }

  friend bool operator==(const XtSeries&, const XtSeries&) = default;
};

}  // namespace mcfxt::sim

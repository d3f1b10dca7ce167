#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"

namespace mcfxt::analysis {

/// Equal-width bins.  density[i] = counts[i] / (total * width), so mass that falls
/// outside the bin range still counts towards the normalization.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> counts;
  std::vector<double> density;
  std::size_t total = 0;

  std::size_t bins() const { return counts.size(); }
  double width() const { return edges.size() < 2 ? 0.0 : edges[1] - edges[0]; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

/// Linear-interpolated quantile of sorted data (type 7).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw AnalysisError("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double f = pos - static_cast<double>(i);
  return sorted[i] + f * (sorted[i + 1] - sorted[i]);
}

struct Quartiles {
  double q1, median, q3;
  double iqr() const { return q3 - q1; }
};

inline Quartiles quartiles(std::span<const double> data) {
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end());
  return {quantile_sorted(s, 0.25), quantile_sorted(s, 0.5), quantile_sorted(s, 0.75)};
}

inline Histogram histogram(std::span<const double> data, double lo, double hi, std::size_t bins) {
  if (data.empty()) throw AnalysisError("histogram of empty data");
  if (!(hi > lo) || bins == 0) throw AnalysisError("histogram: need hi > lo and at least one bin");
  Histogram h;
  h.total = data.size();
  h.edges.resize(bins + 1);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + w * static_cast<double>(i);
  h.counts.assign(bins, 0.0);
  for (double v : data) {
    if (!(v >= lo && v <= hi)) continue;
    auto i = static_cast<std::size_t>((v - lo) / w);
    if (i >= bins) i = bins - 1;
    h.counts[i] += 1.0;
  }
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.density[i] = h.counts[i] / (static_cast<double>(h.total) * w);
  return h;
}

inline constexpr double kDefaultClipIqr = 10.0;
inline constexpr std::size_t kMaxBins = 5000;

/// Freedman-Diaconis width 2 IQR n^(-1/3) over median +- clip_iqr * IQR, clamped to
/// the data range.  Heavy tails beyond the clip stay in the normalization only.
inline Histogram freedman_diaconis_histogram(std::span<const double> data,
                                             double clip_iqr = kDefaultClipIqr) {
  if (data.size() < 2) throw AnalysisError("histogram needs at least 2 samples");
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end());
  const double q1 = quantile_sorted(s, 0.25), med = quantile_sorted(s, 0.5), q3 = quantile_sorted(s, 0.75);
  const double iqr = q3 - q1;
  if (!(iqr > 0.0)) throw AnalysisError("histogram: data has zero interquartile range");
  const double lo = std::max(s.front(), med - clip_iqr * iqr);
  const double hi = std::min(s.back(), med + clip_iqr * iqr);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
  const auto bins = static_cast<std::size_t>(
      std::clamp(std::ceil((hi - lo) / width), 1.0, static_cast<double>(kMaxBins)));
  return histogram(s, lo, hi, bins);
}

/// 1 - SS_res / SS_tot over bins.
inline double r2_score(std::span<const double> observed, std::span<const double> model) {
  if (observed.size() != model.size() || observed.empty()) {
    throw AnalysisError("r2_score: inputs must be non-empty and equal length");
  }
  double mean = 0.0;
  for (double v : observed) mean += v;
  mean /= static_cast<double>(observed.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - model[i]) * (observed[i] - model[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (!(ss_tot > 0.0)) throw AnalysisError("r2_score: observed values have zero variance");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace mcfxt::analysis

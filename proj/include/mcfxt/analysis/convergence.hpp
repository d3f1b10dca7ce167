#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcfxt/analysis/histogram.hpp"
#include "mcfxt/analysis/stats.hpp"

namespace mcfxt::analysis {

struct ConvergencePoint {
  double window_s = 0.0;
  double static_xt_db = 0.0;
  double dynamic_xt_db = 0.0;
  double static_delta_db = 0.0;   ///< |static(w) - static(bench)|
  double dynamic_delta_db = 0.0;  ///< |dynamic(w) - dynamic(bench)|
  double convergence_pct = 0.0;   ///< 100 (1 - |dynamic(w) - dynamic(bench)| / |dynamic(bench)|)
  /// R^2 of the window's dB density against the benchmark's, on the benchmark's
  /// Freedman-Diaconis bins; NaN when the benchmark has no spread.
  double similarity_r2 = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceCurve {
  WindowStats benchmark;
  std::vector<ConvergencePoint> points;
  std::vector<std::string> warnings;
};

/// 10, 20, 40, 80, 160 and 300 minutes, relative to a 12-hour benchmark.
inline const std::vector<double>& default_window_ladder_min() {
  static const std::vector<double> ladder = {10.0, 20.0, 40.0, 80.0, 160.0, 300.0};
  return ladder;
}
inline constexpr double kReferenceBenchmarkMin = 720.0;

/// Prefix windows of the series against the prefix benchmark window.  Ladder
/// entries are in minutes of a 12-hour benchmark and are scaled to the actual
/// benchmark length; rungs longer than the benchmark are dropped with a warning.
inline ConvergenceCurve window_convergence(const XtSeries& s, double benchmark_s,
                                           const std::vector<double>& ladder_min = default_window_ladder_min()) {
  const TimeWindow span = whole(s);
  if (!(benchmark_s > 0.0)) throw AnalysisError("benchmark window must be > 0 s");
  if (benchmark_s > span.length() * (1.0 + 1e-9)) {
    throw AnalysisError("benchmark window " + std::to_string(benchmark_s) + " s exceeds the series (" +
                        std::to_string(span.length()) + " s)");
  }
  ConvergenceCurve out;
  out.benchmark = window_stats(s, prefix(s, benchmark_s));
  auto values = [&](double length_s) {
    const auto r = detail::select(s, prefix(s, length_s));
    return std::span<const double>(s.xt_db).subspan(r.begin, r.end - r.begin);
  };
  std::optional<Histogram> bench_hist;
  try {
    bench_hist = freedman_diaconis_histogram(values(benchmark_s));
  } catch (const AnalysisError&) {
  }
  const double scale = benchmark_s / (kReferenceBenchmarkMin * 60.0);
  for (double minutes : ladder_min) {
    const double w = minutes * 60.0 * scale;
    if (w > benchmark_s * (1.0 + 1e-9)) {
      out.warnings.push_back("window of " + std::to_string(w) + " s exceeds the benchmark; trimmed");
      continue;
    }
    ConvergencePoint p;
    p.window_s = w;
    const auto ws = window_stats(s, prefix(s, w));
    p.static_xt_db = ws.static_xt_db;
    p.dynamic_xt_db = ws.dynamic_xt_db;
    p.static_delta_db = std::abs(ws.static_xt_db - out.benchmark.static_xt_db);
    p.dynamic_delta_db = std::abs(ws.dynamic_xt_db - out.benchmark.dynamic_xt_db);
    p.convergence_pct = out.benchmark.dynamic_xt_db != 0.0
                            ? 100.0 * (1.0 - p.dynamic_delta_db / std::abs(out.benchmark.dynamic_xt_db))
                            : (p.dynamic_delta_db == 0.0 ? 100.0 : 0.0);
    if (bench_hist) {
      const auto& b = *bench_hist;
      const auto h = histogram(values(w), b.edges.front(), b.edges.back(), b.bins());
      p.similarity_r2 = r2_score(b.density, h.density);
    }
    out.points.push_back(p);
  }
  return out;
}

inline ConvergenceCurve window_convergence(const XtSeries& s) {
  return window_convergence(s, whole(s).length());
}

}  // namespace mcfxt::analysis

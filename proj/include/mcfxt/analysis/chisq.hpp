#pragma once

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mcfxt/analysis/histogram.hpp"
#include "mcfxt/errors.hpp"

namespace mcfxt::analysis {

inline constexpr int kChiSqDof = 4;
inline constexpr std::size_t kChiSqMinSamples = 10000;

/// 4-DOF chi-square scaled by `scale`: x = scale * sum of four squared unit normals,
/// so the mean is 4 scale.  CDF 1 - exp(-x / 2s) (1 + x / 2s).
inline double chisq4_cdf(double x, double scale) {
  if (!(scale > 0.0)) throw DomainError("chisq4_cdf: scale must be > 0");
  if (x <= 0.0) return 0.0;
  const double u = x / (2.0 * scale);
  return -std::expm1(-u) - u * std::exp(-u);
}

inline double chisq4_pdf(double x, double scale) {
  if (!(scale > 0.0)) throw DomainError("chisq4_pdf: scale must be > 0");
  if (x < 0.0) return 0.0;
  return x * std::exp(-x / (2.0 * scale)) / (4.0 * scale * scale);
}

struct ChiSqFit {
  int dof = kChiSqDof;
  double scale = 0.0;
  double r2 = 0.0;
  double residual_ss = 0.0;
  Histogram histogram;
  std::vector<double> model_density;
};

namespace detail {

inline std::vector<double> binned_chisq4(const Histogram& h, double scale) {
  std::vector<double> out(h.bins());
  const double w = h.width();
  double prev = chisq4_cdf(h.edges[0], scale);
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double next = chisq4_cdf(h.edges[i + 1], scale);
    out[i] = (next - prev) / w;
    prev = next;
  }
  return out;
}

}  // namespace detail

/// One-parameter fit of the binned 4-DOF chi-square density to the histogram of
/// linear powers; Brent search over log(scale) around mean / 4.
inline ChiSqFit fit_chisq4(std::span<const double> linear_powers) {
  if (linear_powers.size() < kChiSqMinSamples) {
    throw AnalysisError("fit_chisq4 needs at least " + std::to_string(kChiSqMinSamples) +
                        " samples, got " + std::to_string(linear_powers.size()));
  }
  double mean = 0.0;
  for (double v : linear_powers) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw AnalysisError("fit_chisq4: powers must be finite and >= 0");
    mean += v;
  }
  mean /= static_cast<double>(linear_powers.size());
  if (!(mean > 0.0)) throw AnalysisError("fit_chisq4: all powers are zero");

  ChiSqFit fit;
  fit.histogram = freedman_diaconis_histogram(linear_powers);
  const auto& h = fit.histogram;
  auto cost = [&](double log_scale) {
    const auto model = detail::binned_chisq4(h, std::exp(log_scale));
    double ss = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) ss += (model[i] - h.density[i]) * (model[i] - h.density[i]);
    return ss;
  };
  const double centre = std::log(mean / kChiSqDof);
  const auto [best, ss] = boost::math::tools::brent_find_minima(cost, centre - std::log(20.0),
                                                                centre + std::log(20.0), 52);
  if (!std::isfinite(ss)) throw FitError("fit_chisq4: non-finite residual", ss);
  fit.scale = std::exp(best);
  fit.residual_ss = ss;
  fit.model_density = detail::binned_chisq4(h, fit.scale);
  fit.r2 = r2_score(h.density, fit.model_density);
  return fit;
}

}  // namespace mcfxt::analysis

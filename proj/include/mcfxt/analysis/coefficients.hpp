#pragma once

// Dependence coefficients from sweeps: straight lines in dB against temperature,
// wavelength or log2 of the PRBS order, and y = A B^x against baud rate.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcfxt/analysis/stats.hpp"
#include "mcfxt/errors.hpp"

namespace mcfxt::analysis {

enum class CoefficientAxis { Temperature, Wavelength, PrbsLog2, BaudExp };

inline std::string_view to_string(CoefficientAxis a) {
  switch (a) {
    case CoefficientAxis::Temperature: return "temperature";
    case CoefficientAxis::Wavelength: return "wavelength";
    case CoefficientAxis::PrbsLog2: return "prbs_log2";
    case CoefficientAxis::BaudExp: return "baud_exp";
  }
  return "?";
}

inline CoefficientAxis coefficient_axis_from_string(std::string_view s) {
  if (s == "temperature") return CoefficientAxis::Temperature;
  if (s == "wavelength") return CoefficientAxis::Wavelength;
  if (s == "prbs_log2" || s == "prbs") return CoefficientAxis::PrbsLog2;
  if (s == "baud_exp" || s == "baud") return CoefficientAxis::BaudExp;
  throw ConfigError("unknown coefficient axis '" + std::string(s) +
                    "' (expected temperature, wavelength, prbs_log2 or baud_exp)");
}

/// One run of a sweep: the axis value (K or C, nm, PRBS order i, GBd) and its statistics.
struct SweepRun {
  double axis_value = 0.0;
  WindowStats stats;
};

struct CoefficientFit {
  CoefficientAxis axis = CoefficientAxis::Temperature;
  double slope = 0.0;      ///< linear axes: dB per unit of the transformed coordinate
  double intercept = 0.0;
  double a = 0.0;          ///< exponential axis: y = a b^x
  double b = 0.0;
  std::vector<double> residuals;  ///< observed - fitted, in the units of y
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("fit_line: x and y differ in length");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw FitError("fit_line: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-24 * n * std::max(1.0, mx * mx))) {
    throw FitError("fit_line: rank-deficient input (all x values equal)");
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Fit along `axis`.  Linear axes use static crosstalk; the baud axis fits dynamic
/// crosstalk as a b^x through a straight line in log y.
inline CoefficientFit extract_coefficients(std::span<const double> axis_values, std::span<const double> y,
                                           CoefficientAxis axis) {
  if (axis_values.size() != y.size()) throw FitError("extract_coefficients: length mismatch");
  if (axis_values.size() < 3) throw FitError("extract_coefficients: need at least 3 runs along the axis");
  CoefficientFit fit;
  fit.axis = axis;
  std::vector<double> x(axis_values.begin(), axis_values.end());
  if (axis == CoefficientAxis::PrbsLog2) {
    for (auto& v : x) {
      if (!(v > 0.0)) throw FitError("extract_coefficients: PRBS orders must be positive");
      v = std::log2(v);
    }
  }
  if (axis == CoefficientAxis::BaudExp) {
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!(y[i] > 0.0)) throw FitError("extract_coefficients: exponential fit needs positive values");
      ly[i] = std::log(y[i]);
    }
    const auto line = fit_line(x, ly);
    fit.a = std::exp(line.intercept);
    fit.b = std::exp(line.slope);
    for (std::size_t i = 0; i < y.size(); ++i) fit.residuals.push_back(y[i] - fit.a * std::pow(fit.b, x[i]));
    return fit;
  }
  const auto line = fit_line(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  for (std::size_t i = 0; i < y.size(); ++i) fit.residuals.push_back(y[i] - (line.slope * x[i] + line.intercept));
  return fit;
}

inline CoefficientFit extract_coefficients(std::span<const SweepRun> runs, CoefficientAxis axis) {
  std::vector<double> x, y;
  for (const auto& r : runs) {
    x.push_back(r.axis_value);
    y.push_back(axis == CoefficientAxis::BaudExp ? r.stats.dynamic_xt_db : r.stats.static_xt_db);
  }
  return extract_coefficients(x, y, axis);
}

}  // namespace mcfxt::analysis

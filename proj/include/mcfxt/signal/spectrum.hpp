#pragma once

// Discrete power spectra of the signalling sources.  A spectrum is a set of
// lines (offset from the optical carrier, fraction of launched power) plus a
// residual-carrier fraction that sits at zero offset.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcfxt/errors.hpp"

namespace mcfxt::signal {

enum class SourceKind { CW, ASE, OOK, PAM4, QAM };

inline std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::CW: return "CW";
    case SourceKind::ASE: return "ASE";
    case SourceKind::OOK: return "OOK";
    case SourceKind::PAM4: return "PAM4";
    case SourceKind::QAM: return "QAM";
  }
  return "?";
}

inline SourceKind source_kind_from_string(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  up.erase(std::remove(up.begin(), up.end(), '-'), up.end());
  if (up == "CW") return SourceKind::CW;
  if (up == "ASE") return SourceKind::ASE;
  if (up == "OOK") return SourceKind::OOK;
  if (up == "PAM4") return SourceKind::PAM4;
  if (up == "QAM") return SourceKind::QAM;
  throw ConfigError("unknown source kind '" + std::string(s) + "'");
}

struct SpectralLine {
  double offset_hz = 0.0;
  double fraction = 0.0;
  friend bool operator==(const SpectralLine&, const SpectralLine&) = default;
};

struct SourceSpectrum {
  SourceKind kind = SourceKind::CW;
  std::vector<SpectralLine> lines;
  double carrier_fraction = 0.0;
  double baud = 0.0;
  int prbs_order = 0;
  int qam_order = 0;
  std::optional<double> osnr_db;
  /// Width of the frequency bins when the comb is decimated or gridded; 0 for an exact comb.
  double bin_width_hz = 0.0;

  friend bool operator==(const SourceSpectrum&, const SourceSpectrum&) = default;

  /// Unmodulated power: the residual carrier, or the whole line of a CW source.
  double carrier_power() const {
    if (kind == SourceKind::CW) return carrier_fraction + lines.front().fraction;
    return carrier_fraction;
  }

  double total_power() const {
    return carrier_fraction + std::accumulate(lines.begin(), lines.end(), 0.0,
                                              [](double s, const SpectralLine& l) { return s + l.fraction; });
  }

  void validate() const {
    if (lines.empty() && carrier_fraction <= 0.0) throw ConfigError("spectrum: no power");
    if (!(carrier_fraction >= 0.0 && carrier_fraction <= 1.0)) {
      throw ConfigError("spectrum: carrier fraction outside [0, 1]");
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!(lines[i].fraction >= 0.0)) throw ConfigError("spectrum: negative line power");
      if (i > 0 && !(lines[i].offset_hz > lines[i - 1].offset_hz)) {
        throw ConfigError("spectrum: line offsets must be strictly increasing");
      }
    }
    if (std::abs(total_power() - 1.0) > 1e-9) {
      throw ConfigError("spectrum: power fractions sum to " + std::to_string(total_power()) +
                        ", expected 1");
    }
    if (kind == SourceKind::CW &&
        (lines.size() != 1 || lines[0].offset_hz != 0.0 || carrier_fraction != 0.0)) {
      throw ConfigError("spectrum: CW must be a single line at zero offset");
    }
    if (kind == SourceKind::QAM && carrier_fraction != 0.0) {
      throw ConfigError("spectrum: QAM must be carrier-suppressed");
    }
  }
};

/// Line budget for a comb; denser combs are decimated onto this many bins.
inline constexpr std::size_t kMaxCombLines = 4097;

inline constexpr std::array<int, 8> kSupportedPrbsOrders = {7, 9, 10, 11, 15, 20, 23, 31};
inline constexpr std::array<int, 4> kSupportedQamOrders = {4, 16, 64, 256};

/// Period of a PRBS of order i, 2^i - 1.
inline double prbs_period(int order) { return std::ldexp(1.0, order) - 1.0; }

/// Comb spacing baud / (2^i - 1) in Hz.
inline double prbs_line_spacing(double baud, int order) {
  if (std::find(kSupportedPrbsOrders.begin(), kSupportedPrbsOrders.end(), order) ==
      kSupportedPrbsOrders.end()) {
    throw ConfigError("unsupported PRBS order " + std::to_string(order) +
                      " (expected one of 7, 9, 10, 11, 15, 20, 23, 31)");
  }
  if (!(baud > 0.0)) throw ConfigError("baud rate must be positive");
  return baud / prbs_period(order);
}

/// Carrier fraction |E[a]|^2 / E[|a|^2] of an equiprobable amplitude alphabet.
inline double alphabet_carrier_fraction(std::span<const double> levels) {
  double mean = 0.0, mean_sq = 0.0;
  for (double a : levels) {
    mean += a;
    mean_sq += a * a;
  }
  mean /= static_cast<double>(levels.size());
  mean_sq /= static_cast<double>(levels.size());
  return mean * mean / mean_sq;
}

inline constexpr std::array<double, 2> kOokLevels = {0.0, 1.0};
inline constexpr std::array<double, 4> kPam4Levels = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};

namespace detail {

inline double sinc2(double x) {
  if (x == 0.0) return 1.0;
  const double s = std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  return s * s;
}

// Integral of sinc^2(f / baud) over [f0, f1] in Hz, 8-point Gauss-Legendre per sub-interval.
inline double sinc2_integral(double f0, double f1, double baud) {
  static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290,
                                              0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};
  const int pieces = std::max(1, static_cast<int>(std::ceil(4.0 * (f1 - f0) / baud)));
  const double h = (f1 - f0) / pieces;
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double c = f0 + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = 0.5 * h * x[i];
      total += w[i] * (sinc2((c - d) / baud) + sinc2((c + d) / baud));
    }
  }
  return 0.5 * h * total;
}

inline void check_truncation(double baud, double truncation_bandwidth_hz) {
  if (!(baud > 0.0)) throw ConfigError("baud rate must be positive");
  if (!(truncation_bandwidth_hz >= 2.0 * baud)) {
    throw ConfigError("truncation bandwidth " + std::to_string(truncation_bandwidth_hz) +
                      " Hz cuts into the main lobe (needs >= 2 x baud)");
  }
}

// Symmetric grid of kMaxCombLines bins over +-W/2; each bin carries the sinc^2
// envelope integrated across it.  Normalized to `power`.
inline std::vector<SpectralLine> gridded_envelope(double baud, double truncation_bandwidth_hz,
                                                  double power, double& bin_width) {
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kMaxCombLines / 2);
  const double edge = 0.5 * truncation_bandwidth_hz;
  bin_width = truncation_bandwidth_hz / static_cast<double>(kMaxCombLines - 1);
  std::vector<SpectralLine> lines;
  lines.reserve(kMaxCombLines);
  for (std::ptrdiff_t j = -half; j <= half; ++j) {
    const double c = static_cast<double>(j) * bin_width;
    const double lo = std::max(-edge, c - 0.5 * bin_width);
    const double hi = std::min(edge, c + 0.5 * bin_width);
    const double p = sinc2_integral(lo, hi, baud);
    lines.push_back({c, p});
  }
  for (std::size_t i = 0; i < lines.size() / 2; ++i) {
    lines[lines.size() - 1 - i].fraction = lines[i].fraction;  // exact mirror symmetry
  }
  const double sum = std::accumulate(lines.begin(), lines.end(), 0.0,
                        [](double s, const SpectralLine& l) { return s + l.fraction; });
  for (auto& l : lines) l.fraction *= power / sum;
  return lines;
}

inline SourceSpectrum build_prbs_spectrum(SourceKind kind, double baud, int order,
                                          double truncation_bandwidth_hz, double carrier_fraction) {
  const double spacing = prbs_line_spacing(baud, order);
  check_truncation(baud, truncation_bandwidth_hz);
  SourceSpectrum s;
  s.kind = kind;
  s.baud = baud;
  s.prbs_order = order;
  s.carrier_fraction = carrier_fraction;
  const double signal_power = 1.0 - carrier_fraction;
  const double per_side = std::floor(0.5 * truncation_bandwidth_hz / spacing * (1.0 + 1e-12));
  if (2.0 * per_side + 1.0 <= static_cast<double>(kMaxCombLines)) {
    const auto k_max = static_cast<std::ptrdiff_t>(per_side);
    std::vector<double> weights;
    for (std::ptrdiff_t k = 1; k <= k_max; ++k) {
      weights.push_back(sinc2(static_cast<double>(k) * spacing / baud));
    }
    const double sum = 2.0 * std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::ptrdiff_t k = k_max; k >= 1; --k) {
      s.lines.push_back({-static_cast<double>(k) * spacing,
                         weights[static_cast<std::size_t>(k - 1)] / sum * signal_power});
    }
    for (std::ptrdiff_t k = 1; k <= k_max; ++k) {
      s.lines.push_back({static_cast<double>(k) * spacing,
                         weights[static_cast<std::size_t>(k - 1)] / sum * signal_power});
    }
  } else {
    s.lines = gridded_envelope(baud, truncation_bandwidth_hz, signal_power, s.bin_width_hz);
  }
  s.validate();
  return s;
}

}  // namespace detail

/// Default comb truncation: second sinc null on each side, i.e. a full width of 4 x baud.
inline double default_truncation_bandwidth(double baud) { return 4.0 * baud; }

/// NRZ OOK driven by a PRBS of order i.  The comb spans +-truncation/2 around the carrier.
inline SourceSpectrum build_ook_spectrum(double baud, int order, double truncation_bandwidth_hz) {
  return detail::build_prbs_spectrum(SourceKind::OOK, baud, order, truncation_bandwidth_hz,
                                     alphabet_carrier_fraction(kOokLevels));
}
inline SourceSpectrum build_ook_spectrum(double baud, int order) {
  return build_ook_spectrum(baud, order, default_truncation_bandwidth(baud));
}

/// NRZ PAM-4 with equiprobable amplitude levels {0, 1/3, 2/3, 1}.
inline SourceSpectrum build_pam4_spectrum(double baud, int order, double truncation_bandwidth_hz) {
  return detail::build_prbs_spectrum(SourceKind::PAM4, baud, order, truncation_bandwidth_hz,
                                     alphabet_carrier_fraction(kPam4Levels));
}
inline SourceSpectrum build_pam4_spectrum(double baud, int order) {
  return build_pam4_spectrum(baud, order, default_truncation_bandwidth(baud));
}

/// Carrier-suppressed m-QAM on a dense grid (spacing baud / 1024 at the default truncation).
inline SourceSpectrum build_qam_spectrum(double baud, int qam_order, double truncation_bandwidth_hz,
                                         std::optional<double> osnr_db = std::nullopt) {
  if (std::find(kSupportedQamOrders.begin(), kSupportedQamOrders.end(), qam_order) ==
      kSupportedQamOrders.end()) {
    throw ConfigError("unsupported QAM order " + std::to_string(qam_order) +
                      " (expected 4, 16, 64 or 256)");
  }
  if (!(baud >= 15e9 && baud <= 80e9)) {
    throw ConfigError("QAM baud rate " + std::to_string(baud) + " outside [15, 80] GBd");
  }
  detail::check_truncation(baud, truncation_bandwidth_hz);
  SourceSpectrum s;
  s.kind = SourceKind::QAM;
  s.baud = baud;
  s.qam_order = qam_order;
  s.osnr_db = osnr_db;
  s.lines = detail::gridded_envelope(baud, truncation_bandwidth_hz, 1.0, s.bin_width_hz);
  s.validate();
  return s;
}
inline SourceSpectrum build_qam_spectrum(double baud, int qam_order) {
  return build_qam_spectrum(baud, qam_order, default_truncation_bandwidth(baud));
}

inline SourceSpectrum build_cw_spectrum() {
  SourceSpectrum s;
  s.kind = SourceKind::CW;
  s.lines = {{0.0, 1.0}};
  s.validate();
  return s;
}

inline constexpr std::size_t kDefaultAseLines = 301;
inline constexpr double kDefaultAseBandwidthHz = 150e9;

/// Flat broadband source: `line_count` equal lines evenly spanning the bandwidth.
inline SourceSpectrum build_ase_spectrum(double bandwidth_hz,
                                         std::size_t line_count = kDefaultAseLines) {
  if (!(bandwidth_hz > 0.0)) throw ConfigError("ASE bandwidth must be positive");
  if (line_count < 2) throw ConfigError("ASE needs at least two lines");
  SourceSpectrum s;
  s.kind = SourceKind::ASE;
  s.bin_width_hz = bandwidth_hz / static_cast<double>(line_count - 1);
  const double w = 1.0 / static_cast<double>(line_count);
  const auto half = static_cast<double>(line_count - 1) / 2.0;
  for (std::size_t m = 0; m < line_count; ++m) {
    s.lines.push_back({(static_cast<double>(m) - half) * s.bin_width_hz, w});
  }
  s.validate();
  return s;
}

/// 10 log10(carrier / signal) in dB; -infinity for a carrier-free spectrum.
inline double carrier_to_signal_ratio(const SourceSpectrum& s) {
  const double c = s.carrier_power();
  if (c >= 1.0 - 1e-12) {
    throw DomainError("carrier_to_signal_ratio: spectrum is a pure carrier");
  }
  if (c <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(c / (1.0 - c));
}

}  // namespace mcfxt::signal

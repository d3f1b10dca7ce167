#pragma once

// Column text for generic plotting tools: '#' header lines naming the columns
// and units, then comma-separated rows.

#include <ostream>
#include <string>
#include <vector>

#include "mcfxt/analysis/chisq.hpp"
#include "mcfxt/analysis/convergence.hpp"
#include "mcfxt/analysis/correlation.hpp"
#include "mcfxt/analysis/pvp.hpp"
#include "mcfxt/analysis/stats.hpp"
#include "mcfxt/io/csv.hpp"
#include "mcfxt/signal/spectrum.hpp"

namespace mcfxt::io {

struct SweepRow {
  std::string axis_value;
  analysis::WindowStats stats;
};

inline void emit_plot_data(std::ostream& os, const std::string& axis_name, const std::vector<SweepRow>& rows) {
  os << "# window statistics per sweep value\n"
     << "# " << axis_name << ", static_db [dB], dynamic_db [dB], worst_case_db [dB], samples\n";
  for (const auto& r : rows) {
    os << r.axis_value << ',' << format_number(r.stats.static_xt_db) << ','
       << format_number(r.stats.dynamic_xt_db) << ',' << format_number(r.stats.worst_case_xt_db) << ','
       << r.stats.sample_count << '\n';
  }
}

inline void emit_plot_data(std::ostream& os, const analysis::PvpFit& f) {
  os << "# pseudo-Voigt step fit: mu = " << format_number(f.mu) << " dB, sigma = " << format_number(f.sigma)
     << " dB, alpha = " << format_number(f.alpha) << ", r2 = " << format_number(f.r2) << '\n'
     << "# zeta_bin [dB], observed_density [1/dB], model_density [1/dB]\n";
  for (std::size_t i = 0; i < f.histogram.bins(); ++i) {
    os << format_number(f.histogram.center(i)) << ',' << format_number(f.histogram.density[i]) << ','
       << format_number(f.model_density[i]) << '\n';
  }
}

inline void emit_plot_data(std::ostream& os, const analysis::ChiSqFit& f) {
  os << "# chi-square (4 dof) fit: scale = " << format_number(f.scale) << ", r2 = " << format_number(f.r2)
     << '\n'
     << "# power_bin [linear], observed_density [1/linear], model_density [1/linear]\n";
  for (std::size_t i = 0; i < f.histogram.bins(); ++i) {
    os << format_number(f.histogram.center(i)) << ',' << format_number(f.histogram.density[i]) << ','
       << format_number(f.model_density[i]) << '\n';
  }
}

inline void emit_plot_data(std::ostream& os, const analysis::CorrelationProfile& p) {
  os << "# circular autocorrelation: max off-zero = " << format_number(p.max_offzero) << " at lag "
     << p.argmax_lag << '\n'
     << "# lag [samples], value [1]\n";
  for (std::size_t k = 0; k < p.values.size(); ++k) os << k << ',' << format_number(p.values[k]) << '\n';
}

inline void emit_plot_data(std::ostream& os, const analysis::ConvergenceCurve& c) {
  os << "# window convergence against a " << format_number(c.benchmark.window_length_s)
     << " s benchmark (static " << format_number(c.benchmark.static_xt_db) << " dB, dynamic "
     << format_number(c.benchmark.dynamic_xt_db) << " dB)\n";
  for (const auto& w : c.warnings) os << "# warning: " << w << '\n';
  os << "# window_s [s], static_db [dB], dynamic_db [dB], static_delta_db [dB], dynamic_delta_db [dB], "
        "convergence_pct [%], similarity_r2 [1]\n";
  for (const auto& p : c.points) {
    os << format_number(p.window_s) << ',' << format_number(p.static_xt_db) << ','
       << format_number(p.dynamic_xt_db) << ',' << format_number(p.static_delta_db) << ','
       << format_number(p.dynamic_delta_db) << ',' << format_number(p.convergence_pct) << ','
       << format_number(p.similarity_r2) << '\n';
  }
}

inline void emit_plot_data(std::ostream& os, const signal::SourceSpectrum& s) {
  os << "# " << signal::to_string(s.kind) << " spectrum: carrier_fraction = " << format_number(s.carrier_fraction)
     << ", lines = " << s.lines.size() << ", bin_width_hz = " << format_number(s.bin_width_hz) << '\n'
     << "# offset_hz [Hz], fraction [1], component\n";
  if (s.carrier_fraction > 0.0) os << "0," << format_number(s.carrier_fraction) << ",carrier\n";
  for (const auto& l : s.lines) {
    os << format_number(l.offset_hz) << ',' << format_number(l.fraction) << ",line\n";
  }
}

}  // namespace mcfxt::io

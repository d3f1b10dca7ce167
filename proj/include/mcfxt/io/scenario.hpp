#pragma once

// Scenario runner: one simulation per sweep value (all with the base seed), the
// requested analyses per run, a sweep table and a JSON manifest.

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mcfxt/analysis/chisq.hpp"
#include "mcfxt/analysis/convergence.hpp"
#include "mcfxt/analysis/correlation.hpp"
#include "mcfxt/analysis/pvp.hpp"
#include "mcfxt/analysis/stats.hpp"
#include "mcfxt/io/config.hpp"
#include "mcfxt/io/csv.hpp"
#include "mcfxt/io/plot.hpp"
#include "mcfxt/sim/simulator.hpp"
#include "mcfxt/sim/speed.hpp"

namespace mcfxt::io {

/// Source names as used in sweeps: CW, ASE, OOK, PAM4, QAM or <m>QAM (e.g. 16QAM).
inline SourceParams parse_source_value(const SourceParams& base, const std::string& value) {
  SourceParams p = base;
  std::string up(value);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  up.erase(std::remove(up.begin(), up.end(), '-'), up.end());
  if (up.size() > 3 && up.ends_with("QAM")) {
    p.kind = signal::SourceKind::QAM;
    try {
      p.qam_order = std::stoi(up.substr(0, up.size() - 3));
    } catch (const std::exception&) {
      throw ConfigError("bad QAM source '" + value + "'");
    }
    return p;
  }
  p.kind = signal::source_kind_from_string(up);
  return p;
}

inline double parse_sweep_number(const std::string& value) {
  try {
    return parse_number(value, 0);
  } catch (const ParseError&) {
    throw ConfigError("sweep value '" + value + "' is not a number");
  }
}

/// Configuration for one sweep value.  Baud values are in GBd, temperatures in C,
/// wavelengths in nm, PRBS values are the order i, core sets are joined by '+'.
/// Window and averaging sweeps leave the configuration unchanged.
inline RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, const std::string& value) {
  RunConfig rc = base;
  switch (axis) {
    case SweepAxis::Source: rc.source = parse_source_value(base.source, value); break;
    case SweepAxis::Baud: rc.source.baud = parse_sweep_number(value) * 1e9; break;
    case SweepAxis::Temperature: rc.simulation_temperature_c = parse_sweep_number(value); break;
    case SweepAxis::Wavelength: rc.sim.wavelength_nm = parse_sweep_number(value); break;
    case SweepAxis::Prbs: rc.source.prbs_order = static_cast<int>(parse_sweep_number(value)); break;
    case SweepAxis::ExcitedCores: rc.sim.excited_cores = parse_int_list(value); break;
    case SweepAxis::Window:
    case SweepAxis::Averaging: break;
  }
  return rc;
}

struct RunRecord {
  std::string label;
  std::string value;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string series_file;
  std::string series_hash;
  bool ok = false;
  std::string error;
  analysis::WindowStats stats;
  std::optional<double> speed_per_hour;
};

struct ScenarioResult {
  std::vector<RunRecord> runs;
  fs::path manifest;
  bool all_ok() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.ok; });
  }
};

namespace detail {

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

inline std::string series_text(const sim::XtSeries& s) {
  std::ostringstream os;
  write_series_csv(os, s);
  return os.str();
}

template <class F>
void write_file(const fs::path& p, F&& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  body(os);
}

}  // namespace detail

inline ScenarioResult run_scenario(const RunConfig& base, const fs::path& out_dir, std::optional<int> workers = {}) {
  const ScenarioSpec& spec = base.scenario;
  if (spec.values.empty()) throw ConfigError("[scenario] sweep_values must not be empty");
  fs::create_directories(out_dir);

  // Window and averaging sweeps analyse one shared simulation.
  const bool shared = spec.axis == SweepAxis::Window || spec.axis == SweepAxis::Averaging;
  std::optional<sim::XtSeries> shared_series;
  if (shared) shared_series = sim::simulate_series(materialize(base));

  ScenarioResult result;
  result.runs.resize(spec.values.size());
  auto run_one = [&](std::size_t i) {
    RunRecord& rec = result.runs[i];
    rec.value = spec.values[i];
    char idx[8];
    std::snprintf(idx, sizeof idx, "%02zu", i);
    rec.label = std::string(idx) + "_" + detail::sanitize(rec.value);
    try {
      const RunConfig rc = apply_sweep_value(base, spec.axis, rec.value);
      rec.seed = rc.sim.seed;
      rec.config_hash = config_hash(rc);
      sim::XtSeries series = shared ? *shared_series : sim::simulate_series(materialize(rc));
      analysis::TimeWindow window = analysis::whole(series);
      if (spec.axis == SweepAxis::Averaging) {
        series = analysis::resample_average(series, parse_sweep_number(rec.value));
        window = analysis::whole(series);
      } else if (spec.axis == SweepAxis::Window) {
        window = analysis::prefix(series, parse_sweep_number(rec.value));
      }
      rec.series_file = rec.label + ".csv";
      save_series(out_dir / rec.series_file, series);
      rec.series_hash = fnv1a_hex(detail::series_text(series));
      rec.stats = analysis::window_stats(series, window);
      for (const auto& o : spec.outputs) {
        const fs::path stem = out_dir / rec.label;
        if (o == "analyze") {
          detail::write_file(fs::path(stem.string() + ".stats.dat"),
                             [&](std::ostream& os) { emit_plot_data(os, "value", {{rec.value, rec.stats}}); });
        } else if (o == "fit-step") {
          const auto steps = analysis::step_sequence(series);
          const auto fit = analysis::fit_pvp(steps);
          detail::write_file(fs::path(stem.string() + ".pvp.dat"), [&](std::ostream& os) { emit_plot_data(os, fit); });
        } else if (o == "fit-chisq") {
          const auto lin = series.linear();
          const auto fit = analysis::fit_chisq4(lin);
          detail::write_file(fs::path(stem.string() + ".chisq.dat"),
                             [&](std::ostream& os) { emit_plot_data(os, fit); });
        } else if (o == "correlate") {
          const auto prof = analysis::circular_correlation(series);
          detail::write_file(fs::path(stem.string() + ".corr.dat"),
                             [&](std::ostream& os) { emit_plot_data(os, prof); });
        } else if (o == "convergence") {
          const auto curve = analysis::window_convergence(series);
          detail::write_file(fs::path(stem.string() + ".convergence.dat"),
                             [&](std::ostream& os) { emit_plot_data(os, curve); });
        } else if (o == "speed") {
          rec.speed_per_hour = sim::fluctuation_speed(series);
        }
      }
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers.value_or(spec.workers), static_cast<int>(spec.values.size())));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < spec.values.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < spec.values.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  for (const auto& r : result.runs) {
    if (r.ok) rows.push_back({r.value, r.stats});
  }
  detail::write_file(out_dir / "sweep.dat",
                     [&](std::ostream& os) { emit_plot_data(os, std::string(to_string(spec.axis)), rows); });
  if (spec.axis == SweepAxis::Source) {
    auto ordered = rows;
    std::stable_sort(ordered.begin(), ordered.end(), [](const SweepRow& a, const SweepRow& b) {
      return a.stats.dynamic_xt_db > b.stats.dynamic_xt_db;
    });
    detail::write_file(out_dir / "ordering.dat", [&](std::ostream& os) {
      os << "# sources ordered by dynamic crosstalk, largest first\n# rank, source, dynamic_db [dB]\n";
      for (std::size_t i = 0; i < ordered.size(); ++i) {
        os << i + 1 << ',' << ordered[i].axis_value << ',' << format_number(ordered[i].stats.dynamic_xt_db) << '\n';
      }
    });
  }

  nlohmann::ordered_json m;
  m["name"] = spec.name;
  m["sweep_axis"] = std::string(to_string(spec.axis));
  m["sweep_values"] = spec.values;
  m["outputs"] = spec.outputs;
  m["base_config_hash"] = config_hash(base);
  auto& runs = m["runs"] = nlohmann::ordered_json::array();
  std::size_t failed = 0;
  for (const auto& r : result.runs) {
    nlohmann::ordered_json j;
    j["label"] = r.label;
    j["value"] = r.value;
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;
    j["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      j["series_file"] = r.series_file;
      j["series_hash"] = r.series_hash;
      j["static_db"] = r.stats.static_xt_db;
      j["dynamic_db"] = r.stats.dynamic_xt_db;
      j["worst_case_db"] = r.stats.worst_case_xt_db;
      j["samples"] = r.stats.sample_count;
      if (r.speed_per_hour) j["speed_per_hour"] = *r.speed_per_hour;
    } else {
      j["error"] = r.error;
      ++failed;
    }
    runs.push_back(std::move(j));
  }
  m["failed"] = failed;
  result.manifest = out_dir / "manifest.json";
  detail::write_file(result.manifest, [&](std::ostream& os) { os << m.dump(2) << '\n'; });
  return result;
}

}  // namespace mcfxt::io

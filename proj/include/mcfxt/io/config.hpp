#pragma once

// INI configuration: [geometry] [layout] [thermal] [simulation] [source] [scenario].
// The geometry is given at the thermal reference temperature; the simulation
// temperature is applied on top when the run configuration is materialized.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/geometry.hpp"
#include "mcfxt/io/csv.hpp"
#include "mcfxt/signal/spectrum.hpp"
#include "mcfxt/sim/simulator.hpp"

namespace mcfxt::io {

struct SourceParams {
  signal::SourceKind kind = signal::SourceKind::CW;
  double baud = 25e9;
  int prbs_order = 15;
  int qam_order = 16;
  double truncation_bandwidth_hz = 0.0;  ///< 0: four times the baud rate
  double ase_bandwidth_hz = signal::kDefaultAseBandwidthHz;
  std::size_t ase_lines = signal::kDefaultAseLines;
  std::optional<double> osnr_db;

  friend bool operator==(const SourceParams&, const SourceParams&) = default;
};

inline signal::SourceSpectrum build_source(const SourceParams& p) {
  using signal::SourceKind;
  const double trunc = p.truncation_bandwidth_hz > 0.0 ? p.truncation_bandwidth_hz
                                                       : signal::default_truncation_bandwidth(p.baud);
  switch (p.kind) {
    case SourceKind::CW: return signal::build_cw_spectrum();
    case SourceKind::ASE: return signal::build_ase_spectrum(p.ase_bandwidth_hz, p.ase_lines);
    case SourceKind::OOK: return signal::build_ook_spectrum(p.baud, p.prbs_order, trunc);
    case SourceKind::PAM4: return signal::build_pam4_spectrum(p.baud, p.prbs_order, trunc);
    case SourceKind::QAM: return signal::build_qam_spectrum(p.baud, p.qam_order, trunc, p.osnr_db);
  }
  throw ConfigError("unknown source kind");
}

/// Floor override for wavelengths in [lo_nm, hi_nm].
struct FloorBand {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
  double floor_db = fiber::kDefaultXtFloorDb;
  friend bool operator==(const FloorBand&, const FloorBand&) = default;
};

enum class SweepAxis { Source, Baud, Temperature, Wavelength, Prbs, ExcitedCores, Window, Averaging };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Source: return "source";
    case SweepAxis::Baud: return "baud";
    case SweepAxis::Temperature: return "temperature";
    case SweepAxis::Wavelength: return "wavelength";
    case SweepAxis::Prbs: return "prbs";
    case SweepAxis::ExcitedCores: return "excited_cores";
    case SweepAxis::Window: return "window";
    case SweepAxis::Averaging: return "averaging";
  }
  return "?";
}

inline SweepAxis sweep_axis_from_string(std::string_view s) {
  for (auto a : {SweepAxis::Source, SweepAxis::Baud, SweepAxis::Temperature, SweepAxis::Wavelength,
                 SweepAxis::Prbs, SweepAxis::ExcitedCores, SweepAxis::Window, SweepAxis::Averaging}) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

/// Analyses a scenario may request per sweep value.
inline const std::set<std::string>& scenario_outputs() {
  static const std::set<std::string> outputs = {"analyze", "fit-step", "fit-chisq", "correlate", "convergence",
                                                "speed"};
  return outputs;
}

struct ScenarioSpec {
  std::string name = "scenario";
  SweepAxis axis = SweepAxis::Source;
  std::vector<std::string> values;
  std::vector<std::string> outputs;
  int workers = 1;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Everything the configuration file describes, before temperature and source are applied.
struct RunConfig {
  sim::SimConfig sim;                 ///< geometry at the reference temperature; source unused
  SourceParams source;
  double delta1 = fiber::kCalibratedDelta1;  ///< as configured; sim.geometry holds the derived indices
  double delta2 = fiber::kCalibratedDelta2;
  double reference_temperature_c = sim::kDefaultTemperatureC;
  double simulation_temperature_c = sim::kDefaultTemperatureC;
  double xt_floor_db = fiber::kDefaultXtFloorDb;
  std::vector<FloorBand> floor_bands;
  ScenarioSpec scenario;
  bool has_scenario = false;
};

inline double resolve_floor_db(const RunConfig& rc, double wavelength_nm) {
  for (const auto& b : rc.floor_bands) {
    if (wavelength_nm >= b.lo_nm && wavelength_nm <= b.hi_nm) return b.floor_db;
  }
  return rc.xt_floor_db;
}

/// The SimConfig actually simulated: source built, band floor resolved, temperature applied.
inline sim::SimConfig materialize(const RunConfig& rc) {
  sim::SimConfig c = rc.sim;
  c.source = build_source(rc.source);
  c.geometry.xt_floor = fiber::db_to_linear(resolve_floor_db(rc, c.wavelength_nm));
  c.temperature_c = rc.reference_temperature_c;
  c = sim::set_temperature(c, rc.simulation_temperature_c);
  c.validate();
  return c;
}

namespace detail {

using boost::property_tree::ptree;

class SectionReader {
 public:
  SectionReader(const ptree* node, std::string name) : node_(node), name_(std::move(name)) {}

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_) return;
    const auto v = node_->get_optional<std::string>(ptree::path_type(key, '\0'));
    if (!v) return;
    out = convert<T>(key, trim(*v));
  }

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    if (!node_) return std::nullopt;
    const auto v = node_->get_optional<std::string>(ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return std::string(trim(*v));
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (!seen_.count(key)) throw ConfigError("[" + name_ + "]: unknown key '" + key + "'");
    }
  }

 private:
  template <class T>
  T convert(const std::string& key, std::string_view text) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        return parse_number(text, 0);
      } else if constexpr (std::is_same_v<T, int>) {
        return std::stoi(std::string(text));
      } else if constexpr (std::is_same_v<T, std::size_t>) {
        return static_cast<std::size_t>(std::stoull(std::string(text)));
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        return std::stoull(std::string(text));
      } else {
        return std::string(text);
      }
    } catch (const std::exception&) {
      throw ConfigError("[" + name_ + "] " + key + ": cannot parse '" + std::string(text) + "'");
    }
  }

  const ptree* node_;
  std::string name_;
  std::set<std::string> seen_;
};

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "1530-1565:-63.5; 1565-1625:-62"
inline std::vector<FloorBand> parse_floor_bands(std::string_view text) {
  std::vector<FloorBand> out;
  for (auto item : split(text, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const auto dash = item.find('-');
    if (colon == std::string_view::npos || dash == std::string_view::npos || dash > colon) {
      throw ConfigError("[geometry] xt_floor_bands: expected 'lo-hi:dB', got '" + std::string(item) + "'");
    }
    FloorBand b;
    try {
      b.lo_nm = parse_number(item.substr(0, dash), 0);
      b.hi_nm = parse_number(item.substr(dash + 1, colon - dash - 1), 0);
      b.floor_db = parse_number(item.substr(colon + 1), 0);
    } catch (const ParseError&) {
      throw ConfigError("[geometry] xt_floor_bands: malformed entry '" + std::string(item) + "'");
    }
    if (!(b.hi_nm > b.lo_nm)) throw ConfigError("[geometry] xt_floor_bands: empty band");
    out.push_back(b);
  }
  return out;
}

// "x,y; x,y; ..." in micrometres
inline fiber::CoreLayout parse_cores(std::string_view text) {
  std::vector<fiber::CorePosition> cores;
  for (auto item : split(text, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw ConfigError("[layout] cores: expected 'x,y', got '" + std::string(item) + "'");
    try {
      cores.push_back({parse_number(xy[0], 0), parse_number(xy[1], 0)});
    } catch (const ParseError&) {
      throw ConfigError("[layout] cores: malformed entry '" + std::string(item) + "'");
    }
  }
  return fiber::CoreLayout(std::move(cores));
}

}  // namespace detail

/// `section.key=value` overrides applied before parsing (CLI --set).
inline void apply_override(boost::property_tree::ptree& pt, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  }
  const std::string section(trim(std::string_view(assignment).substr(0, dot)));
  const std::string key(trim(std::string_view(assignment).substr(dot + 1, eq - dot - 1)));
  const std::string value(trim(std::string_view(assignment).substr(eq + 1)));
  auto& node = pt.get_child_optional(section) ? pt.get_child(section) : pt.add_child(section, {});
  node.put(boost::property_tree::ptree::path_type(key, '\0'), value);
}

inline RunConfig parse_config(const boost::property_tree::ptree& pt) {
  static const std::set<std::string> sections = {"geometry", "layout", "thermal", "simulation", "source",
                                                 "scenario"};
  for (const auto& [name, child] : pt) {
    if (!sections.count(name)) {
      if (child.empty()) throw ConfigError("key '" + name + "' outside any section");
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  auto section = [&](const char* name) {
    const auto child = pt.get_child_optional(name);
    return detail::SectionReader(child ? &*child : nullptr, name);
  };

  RunConfig rc;
  auto& c = rc.sim;

  {
    auto s = section("geometry");
    double a = c.geometry.core_radius_um, wt = c.geometry.trench_width_um, n0 = c.geometry.n_cladding;
    double& d1 = rc.delta1;
    double& d2 = rc.delta2;
    s.read("core_radius_um", a);
    s.read("trench_width_um", wt);
    s.read("n_cladding", n0);
    s.read("delta1", d1);
    s.read("delta2", d2);
    const auto g0 = c.geometry;
    c.geometry = fiber::FiberGeometry::from_deltas(a, wt, n0, d1, d2);
    c.geometry.length_m = g0.length_m;
    c.geometry.bend_radius_m = g0.bend_radius_m;
    c.geometry.twist_rate_rad_per_m = g0.twist_rate_rad_per_m;
    s.read("length_m", c.geometry.length_m);
    s.read("bend_radius_m", c.geometry.bend_radius_m);
    s.read("twist_rate_rad_per_m", c.geometry.twist_rate_rad_per_m);
    s.read("xt_floor_db", rc.xt_floor_db);
    if (auto bands = s.raw("xt_floor_bands")) rc.floor_bands = detail::parse_floor_bands(*bands);
    s.finish();
  }
  {
    auto s = section("layout");
    std::string preset = "eight_core";
    s.read("preset", preset);
    if (auto cores = s.raw("cores")) {
      c.layout = detail::parse_cores(*cores);
    } else if (preset == "eight_core") {
      c.layout = fiber::default_eight_core_layout();
    } else {
      throw ConfigError("[layout] preset: unknown layout '" + preset + "' (expected eight_core or a cores list)");
    }
    s.finish();
  }
  {
    auto s = section("thermal");
    s.read("reference_temperature_c", rc.reference_temperature_c);
    s.read("dn_core_per_k", c.thermal.dn_core_per_k);
    s.read("dn_cladding_per_k", c.thermal.dn_cladding_per_k);
    s.read("dn_trench_per_k", c.thermal.dn_trench_per_k);
    s.read("length_per_k", c.thermal.length_per_k);
    s.read("walkoff_per_k", c.thermal.walkoff_per_k);
    s.finish();
  }
  {
    auto s = section("simulation");
    if (auto ex = s.raw("excited_cores")) {
      try {
        c.excited_cores = parse_int_list(*ex);
      } catch (const ParseError& e) {
        throw ConfigError(std::string("[simulation] excited_cores: ") + e.what());
      }
    }
    s.read("target_core", c.target_core);
    s.read("wavelength_nm", c.wavelength_nm);
    s.read("duration_s", c.duration_s);
    s.read("sample_interval_s", c.sample_interval_s);
    s.read("averaging_time_s", c.averaging_time_s);
    s.read("substeps_per_sample", c.substeps_per_sample);
    s.read("phase_diffusion", c.phase_diffusion);
    s.read("walkoff_s_per_m", c.walkoff_s_per_m);
    s.read("temperature_c", rc.simulation_temperature_c);
    s.read("seed", c.seed);
    if (auto comb = s.raw("combining")) c.combining = sim::core_combining_from_string(*comb);
    s.read("path_phase_diffusion_ratio", c.path_phase_diffusion_ratio);
    s.finish();
  }
  {
    auto s = section("source");
    auto& p = rc.source;
    if (auto kind = s.raw("kind")) p.kind = signal::source_kind_from_string(*kind);
    s.read("baud", p.baud);
    s.read("prbs_order", p.prbs_order);
    s.read("qam_order", p.qam_order);
    s.read("truncation_bandwidth_hz", p.truncation_bandwidth_hz);
    s.read("ase_bandwidth_hz", p.ase_bandwidth_hz);
    s.read("ase_lines", p.ase_lines);
    if (auto osnr = s.raw("osnr_db"); osnr && !osnr->empty()) {
      try {
        p.osnr_db = parse_number(*osnr, 0);
      } catch (const ParseError&) {
        throw ConfigError("[source] osnr_db: cannot parse '" + *osnr + "'");
      }
    }
    s.finish();
  }
  if (pt.get_child_optional("scenario")) {
    auto s = section("scenario");
    rc.has_scenario = true;
    auto& sc = rc.scenario;
    s.read("name", sc.name);
    if (auto axis = s.raw("sweep_axis")) sc.axis = sweep_axis_from_string(*axis);
    if (auto values = s.raw("sweep_values")) sc.values = detail::split_words(*values);
    if (auto outputs = s.raw("outputs")) sc.outputs = detail::split_words(*outputs);
    s.read("workers", sc.workers);
    s.finish();
    for (const auto& o : sc.outputs) {
      if (!scenario_outputs().count(o)) throw ConfigError("[scenario] outputs: unknown analysis '" + o + "'");
    }
    if (sc.workers < 1) throw ConfigError("[scenario] workers must be >= 1");
  }
  // Surface inconsistencies before any simulation starts.
  (void)materialize(rc);
  return rc;
}

inline boost::property_tree::ptree read_ini_text(std::istream& is) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }
  return pt;
}

inline RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  auto pt = read_ini_text(is);
  for (const auto& o : overrides) apply_override(pt, o);
  return parse_config(pt);
}

inline RunConfig default_config(const std::vector<std::string>& overrides = {}) {
  boost::property_tree::ptree pt;
  for (const auto& o : overrides) apply_override(pt, o);
  return parse_config(pt);
}

/// Canonical text of a run configuration: every field, fixed order, shortest
/// round-trip numbers.  Identical configurations give identical text.
inline std::string canonical_text(const RunConfig& rc) {
  const auto& c = rc.sim;
  const auto& g = c.geometry;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { kv(k, format_number(v)); };
  os << "[geometry]\n";
  num("core_radius_um", g.core_radius_um);
  num("trench_width_um", g.trench_width_um);
  num("n_cladding", g.n_cladding);
  num("delta1", rc.delta1);
  num("delta2", rc.delta2);
  num("length_m", g.length_m);
  num("bend_radius_m", g.bend_radius_m);
  num("twist_rate_rad_per_m", g.twist_rate_rad_per_m);
  num("xt_floor_db", rc.xt_floor_db);
  std::string bands;
  for (const auto& b : rc.floor_bands) {
    if (!bands.empty()) bands += "; ";
    bands += format_number(b.lo_nm) + "-" + format_number(b.hi_nm) + ":" + format_number(b.floor_db);
  }
  kv("xt_floor_bands", bands);
  os << "\n[layout]\n";
  std::string cores;
  for (const auto& p : c.layout.cores()) {
    if (!cores.empty()) cores += "; ";
    cores += format_number(p.x_um) + "," + format_number(p.y_um);
  }
  kv("cores", cores);
  os << "\n[thermal]\n";
  num("reference_temperature_c", rc.reference_temperature_c);
  num("dn_core_per_k", c.thermal.dn_core_per_k);
  num("dn_cladding_per_k", c.thermal.dn_cladding_per_k);
  num("dn_trench_per_k", c.thermal.dn_trench_per_k);
  num("length_per_k", c.thermal.length_per_k);
  num("walkoff_per_k", c.thermal.walkoff_per_k);
  os << "\n[simulation]\n";
  kv("excited_cores", join_ints(c.excited_cores));
  kv("target_core", std::to_string(c.target_core));
  num("wavelength_nm", c.wavelength_nm);
  num("duration_s", c.duration_s);
  num("sample_interval_s", c.sample_interval_s);
  num("averaging_time_s", c.averaging_time_s);
  kv("substeps_per_sample", std::to_string(c.substeps_per_sample));
  num("phase_diffusion", c.phase_diffusion);
  num("walkoff_s_per_m", c.walkoff_s_per_m);
  num("temperature_c", rc.simulation_temperature_c);
  kv("seed", std::to_string(c.seed));
  kv("combining", std::string(sim::to_string(c.combining)));
  num("path_phase_diffusion_ratio", c.path_phase_diffusion_ratio);
  os << "\n[source]\n";
  const auto& p = rc.source;
  kv("kind", std::string(signal::to_string(p.kind)));
  num("baud", p.baud);
  kv("prbs_order", std::to_string(p.prbs_order));
  kv("qam_order", std::to_string(p.qam_order));
  num("truncation_bandwidth_hz", p.truncation_bandwidth_hz);
  num("ase_bandwidth_hz", p.ase_bandwidth_hz);
  kv("ase_lines", std::to_string(p.ase_lines));
  kv("osnr_db", p.osnr_db ? format_number(*p.osnr_db) : "");
  return os.str();
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string config_hash(const RunConfig& rc) { return fnv1a_hex(canonical_text(rc)); }

}  // namespace mcfxt::io

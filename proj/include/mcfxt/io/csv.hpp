#pragma once

// XtSeries CSV (`time_s,xt_db`) plus its metadata sidecar, and the number
// formatting shared by every text output.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::io {

namespace fs = std::filesystem;

/// Shortest decimal text that parses back to the identical double.
inline std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view text, std::size_t line) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("malformed number '" + std::string(text) + "'", line);
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline constexpr std::string_view kSeriesHeader = "time_s,xt_db";

inline void write_series_csv(std::ostream& os, const sim::XtSeries& s) {
  os << kSeriesHeader << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_number(s.time_s[i]) << ',' << format_number(s.xt_db[i]) << '\n';
  }
}

/// Reads the sample rows only; metadata and averaging time come from the sidecar.
inline sim::XtSeries read_series_csv(std::istream& is) {
  sim::XtSeries s;
  std::string line;
  std::size_t n = 0;
  if (!std::getline(is, line)) throw ParseError("empty series file", 1);
  ++n;
  if (trim(line) != kSeriesHeader) {
    throw ParseError("expected header '" + std::string(kSeriesHeader) + "', got '" + line + "'", n);
  }
  while (std::getline(is, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), n);
    const double t = parse_number(fields[0], n);
    const double v = parse_number(fields[1], n);
    if (!std::isfinite(t) || !std::isfinite(v)) throw ParseError("non-finite value", n);
    if (!s.time_s.empty() && !(t > s.time_s.back())) throw ParseError("timestamps must increase", n);
    s.time_s.push_back(t);
    s.xt_db.push_back(v);
  }
  if (s.empty()) throw ParseError("series file has no samples", n);
  return s;
}

/// `run.csv` -> `run.meta.ini`.
inline fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".meta.ini");
  return p;
}

inline std::string join_ints(const std::vector<int>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

/// Integers separated by ',', '+', ';' or spaces ("3,7" or "3+7").
inline std::vector<int> parse_int_list(std::string_view text, std::size_t line = 0) {
  std::string norm(text);
  for (auto& c : norm) {
    if (c == '+' || c == ';' || c == ' ' || c == '\t') c = ',';
  }
  std::vector<int> out;
  for (auto f : split(norm, ',')) {
    f = trim(f);
    if (f.empty()) continue;
    int v = 0;
    const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
    if (r.ec != std::errc{} || r.ptr != f.data() + f.size()) {
      throw ParseError("malformed integer '" + std::string(f) + "'", line);
    }
    out.push_back(v);
  }
  return out;
}

inline void write_sidecar(std::ostream& os, const sim::XtSeries& s) {
  const auto& m = s.metadata;
  os << "seed = " << m.seed << '\n'
     << "source_kind = " << m.source_kind << '\n'
     << "baud = " << format_number(m.baud) << '\n'
     << "prbs_i = " << m.prbs_order << '\n'
     << "qam_m = " << m.qam_order << '\n'
     << "temperature_c = " << format_number(m.temperature_c) << '\n'
     << "averaging_time_s = " << format_number(s.averaging_time_s) << '\n'
     << "excited_cores = " << join_ints(m.excited_cores) << '\n'
     << "target_core = " << m.target_core << '\n';
}

/// Fills metadata and averaging time from sidecar text.
inline void read_sidecar(std::istream& is, sim::XtSeries& s) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError("sidecar: " + e.message(), e.line());
  }
  auto get = [&](const char* key) -> std::string {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) throw ParseError(std::string("sidecar: missing key '") + key + "'", 0);
    return *v;
  };
  auto& m = s.metadata;
  try {
    m.seed = std::stoull(get("seed"));
    m.source_kind = get("source_kind");
    m.baud = parse_number(get("baud"), 0);
    m.prbs_order = std::stoi(get("prbs_i"));
    m.qam_order = std::stoi(get("qam_m"));
    m.temperature_c = parse_number(get("temperature_c"), 0);
    s.averaging_time_s = parse_number(get("averaging_time_s"), 0);
    m.excited_cores = parse_int_list(get("excited_cores"));
    m.target_core = std::stoi(get("target_core"));
  } catch (const std::logic_error& e) {
    throw ParseError(std::string("sidecar: bad value (") + e.what() + ")", 0);
  }
}

inline void save_series(const fs::path& csv, const sim::XtSeries& s) {
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  {
    std::ofstream os(csv, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + csv.string());
    write_series_csv(os, s);
  }
  std::ofstream meta(sidecar_path(csv), std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + sidecar_path(csv).string());
  write_sidecar(meta, s);
}

/// Loads a series and, when present, its sidecar.  Without a sidecar the averaging
/// time defaults to the median sample spacing.
inline sim::XtSeries load_series(const fs::path& csv) {
  std::ifstream is(csv, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + csv.string());
  sim::XtSeries s = read_series_csv(is);
  const auto meta = sidecar_path(csv);
  if (fs::exists(meta)) {
    std::ifstream ms(meta, std::ios::binary);
    read_sidecar(ms, s);
  } else {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < s.size(); ++i) gaps.push_back(s.time_s[i] - s.time_s[i - 1]);
    if (!gaps.empty()) {
      std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
      // Snap to whole nanoseconds; differences of decimal timestamps carry rounding noise.
      s.averaging_time_s = std::round(gaps[gaps.size() / 2] * 1e9) / 1e9;
    }
  }
  return s;
}

}  // namespace mcfxt::io

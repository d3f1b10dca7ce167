#pragma once

// Power-meter logs: `time_s,ch1_dbm,...,chN_dbm`, up to 8 channels.

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/io/csv.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::io {

inline constexpr int kMaxChannels = 8;
inline constexpr double kMeterMinDbm = -90.0;       // sensitivity
inline constexpr double kMeterMaxDbm = 10.0;
inline constexpr double kMeterRangeMinDbm = -80.0;  // bottom of the specified range

struct PowerLog {
  std::vector<double> time_s;
  std::vector<std::vector<double>> channels_dbm;  ///< channels_dbm[c][row], channel c + 1

  std::size_t rows() const { return time_s.size(); }
  int channels() const { return static_cast<int>(channels_dbm.size()); }
};

inline PowerLog read_power_log(std::istream& is) {
  PowerLog log;
  std::string line;
  std::size_t n = 1;
  if (!std::getline(is, line)) throw ParseError("empty power log", 1);
  const auto header = split(trim(line), ',');
  if (header.size() < 2 || trim(header[0]) != "time_s") {
    throw ParseError("expected header 'time_s,ch1_dbm,...'", n);
  }
  if (header.size() - 1 > static_cast<std::size_t>(kMaxChannels)) {
    throw ParseError("at most " + std::to_string(kMaxChannels) + " channels supported", n);
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string expect = "ch" + std::to_string(c) + "_dbm";
    if (trim(header[c]) != expect) {
      throw ParseError("column " + std::to_string(c + 1) + ": expected '" + expect + "', got '" +
                           std::string(trim(header[c])) + "'",
                       n);
    }
  }
  log.channels_dbm.resize(header.size() - 1);
  while (std::getline(is, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       n);
    }
    const double t = parse_number(fields[0], n);
    if (!log.time_s.empty() && !(t > log.time_s.back())) throw ParseError("timestamps must increase", n);
    log.time_s.push_back(t);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const double p = parse_number(fields[c], n);
      if (!(p >= kMeterMinDbm && p <= kMeterMaxDbm)) {
        throw ParseError("channel " + std::to_string(c) + " power " + format_number(p) +
                             " dBm outside [-90, 10] dBm",
                         n);
      }
      log.channels_dbm[c - 1].push_back(p);
    }
  }
  return log;
}

inline PowerLog load_power_log(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_power_log(is);
}

inline void write_power_log(std::ostream& os, const PowerLog& log) {
  os << "time_s";
  for (int c = 1; c <= log.channels(); ++c) os << ",ch" << c << "_dbm";
  os << '\n';
  for (std::size_t r = 0; r < log.rows(); ++r) {
    os << format_number(log.time_s[r]);
    for (const auto& ch : log.channels_dbm) os << ',' << format_number(ch[r]);
    os << '\n';
  }
}

struct IngestResult {
  sim::XtSeries series;
  std::vector<std::size_t> low_power_rows;  ///< 0-based rows where a used channel is below -80 dBm
};

/// xt_db = P_target - P_excited per row.  Averaging time is the median timestamp spacing.
inline IngestResult ingest_power_log(const PowerLog& log, int excited_channel, int target_channel) {
  auto check = [&](int ch, const char* what) {
    if (ch < 1 || ch > log.channels()) {
      throw ParseError(std::string(what) + " channel " + std::to_string(ch) + " not present (log has " +
                           std::to_string(log.channels()) + " channels)",
                       1);
    }
  };
  check(excited_channel, "excited");
  check(target_channel, "target");
  if (log.rows() < 2) throw ParseError("power log needs at least 2 rows", 0);
  const auto& pe = log.channels_dbm[static_cast<std::size_t>(excited_channel - 1)];
  const auto& pt = log.channels_dbm[static_cast<std::size_t>(target_channel - 1)];
  IngestResult out;
  out.series.time_s = log.time_s;
  out.series.xt_db.resize(log.rows());
  for (std::size_t r = 0; r < log.rows(); ++r) {
    out.series.xt_db[r] = pt[r] - pe[r];
    if (pt[r] < kMeterRangeMinDbm || pe[r] < kMeterRangeMinDbm) out.low_power_rows.push_back(r);
  }
  std::vector<double> gaps;
  for (std::size_t i = 1; i < log.rows(); ++i) gaps.push_back(log.time_s[i] - log.time_s[i - 1]);
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  out.series.averaging_time_s = gaps[gaps.size() / 2];
  out.series.metadata.source_kind = "measured";
  out.series.metadata.excited_cores = {excited_channel};
  out.series.metadata.target_core = target_channel;
  return out;
}

}  // namespace mcfxt::io

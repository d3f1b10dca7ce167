// mcfxt: simulate and analyse inter-core crosstalk series.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mcfxt/mcfxt.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mcfxt;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
};

io::RunConfig load(const Globals& g) {
  auto overrides = g.overrides;
  if (g.seed) overrides.push_back("simulation.seed=" + std::to_string(*g.seed));
  return g.config.empty() ? io::default_config(overrides) : io::load_config(g.config, overrides);
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_or_print(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  body(os);
}

std::string n(double v) { return io::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inter-core crosstalk simulator and analysis toolkit for trench-assisted multi-core fibers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "INI configuration file (defaults apply when omitted)");
  app.add_option("--seed", g.seed, "override [simulation] seed");
  app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();
  app.add_option("--set", g.overrides, "override a config value, section.key=value (repeatable)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a crosstalk series from the configuration");
  std::string sim_name = "series";
  simulate->add_option("--name", sim_name, "output basename (<out-dir>/<name>.csv)")->capture_default_str();
  simulate->callback([&] {
    const auto rc = load(g);
    const auto cfg = io::materialize(rc);
    const auto s = sim::simulate_series(cfg);
    const auto path = out_path(g, sim_name + ".csv");
    io::save_series(path, s);
    const auto st = analysis::window_stats(s);
    std::cout << "wrote " << path.string() << " (" << s.size() << " samples, static " << n(st.static_xt_db)
              << " dB, dynamic " << n(st.dynamic_xt_db) << " dB, config " << io::config_hash(rc) << ")\n";
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "window statistics of one or more series");
  std::vector<std::string> analyze_files;
  std::optional<double> win_start, win_end, benchmark;
  bool convergence = false;
  std::string analyze_out;
  analyze->add_option("files", analyze_files, "series CSV files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--start", win_start, "window start time (s)");
  analyze->add_option("--end", win_end, "window end time (s, exclusive)");
  analyze->add_flag("--convergence", convergence, "report the window-length convergence curve");
  analyze->add_option("--benchmark", benchmark, "benchmark window length for --convergence (s)");
  analyze->add_option("--output", analyze_out, "write the table here instead of stdout");
  analyze->callback([&] {
    write_or_print(analyze_out, [&](std::ostream& os) {
      if (!convergence) {
        os << "file,window_s,static_db,dynamic_db,worst_case_db,samples\n";
      }
      for (const auto& f : analyze_files) {
        const auto s = io::load_series(f);
        if (convergence) {
          const auto curve = benchmark ? analysis::window_convergence(s, *benchmark) : analysis::window_convergence(s);
          os << "# " << f << '\n';
          io::emit_plot_data(os, curve);
          continue;
        }
        auto w = analysis::whole(s);
        if (win_start) w.start_s = *win_start;
        if (win_end) w.end_s = *win_end;
        const auto st = analysis::window_stats(s, w);
        os << f << ',' << n(st.window_length_s) << ',' << n(st.static_xt_db) << ',' << n(st.dynamic_xt_db) << ','
           << n(st.worst_case_xt_db) << ',' << st.sample_count << '\n';
      }
    });
  });

  // fit-step
  auto* fit_step = app.add_subcommand("fit-step", "pseudo-Voigt fit of the step distribution");
  std::string step_file, step_plot;
  fit_step->add_option("file", step_file, "series CSV")->required()->check(CLI::ExistingFile);
  fit_step->add_option("--plot", step_plot, "write histogram and model columns to this file");
  fit_step->callback([&] {
    const auto s = io::load_series(step_file);
    const auto steps = analysis::step_sequence(s);
    const auto fit = analysis::fit_pvp(steps);
    std::cout << "mu_db,sigma_db,alpha,r2,alpha_clamped,alpha_outside_unit\n"
              << n(fit.mu) << ',' << n(fit.sigma) << ',' << n(fit.alpha) << ',' << n(fit.r2) << ','
              << fit.alpha_clamped << ',' << fit.alpha_outside_unit << '\n';
    if (!step_plot.empty()) write_or_print(step_plot, [&](std::ostream& os) { io::emit_plot_data(os, fit); });
  });

  // fit-chisq
  auto* fit_chisq = app.add_subcommand("fit-chisq", "4-DOF chi-square fit of the linear powers");
  std::string chisq_file, chisq_plot;
  fit_chisq->add_option("file", chisq_file, "series CSV")->required()->check(CLI::ExistingFile);
  fit_chisq->add_option("--plot", chisq_plot, "write histogram and model columns to this file");
  fit_chisq->callback([&] {
    const auto s = io::load_series(chisq_file);
    const auto lin = s.linear();
    const auto fit = analysis::fit_chisq4(lin);
    std::cout << "dof,scale,r2\n" << fit.dof << ',' << n(fit.scale) << ',' << n(fit.r2) << '\n';
    if (!chisq_plot.empty()) write_or_print(chisq_plot, [&](std::ostream& os) { io::emit_plot_data(os, fit); });
  });

  // correlate
  auto* correlate = app.add_subcommand("correlate", "circular autocorrelation of a series");
  std::string corr_file, corr_out;
  correlate->add_option("file", corr_file, "series CSV")->required()->check(CLI::ExistingFile);
  correlate->add_option("--output", corr_out, "profile file (default <out-dir>/<stem>.corr.dat)");
  correlate->callback([&] {
    const auto s = io::load_series(corr_file);
    const auto prof = analysis::circular_correlation(s);
    const std::string path =
        corr_out.empty() ? out_path(g, fs::path(corr_file).stem().string() + ".corr.dat").string() : corr_out;
    write_or_print(path, [&](std::ostream& os) { io::emit_plot_data(os, prof); });
    std::cout << "max_offzero,lag\n" << n(prof.max_offzero) << ',' << prof.argmax_lag << '\n';
  });

  // coefficients
  auto* coefficients = app.add_subcommand("coefficients", "dependence coefficients from a sweep of series");
  std::vector<std::string> coef_files;
  std::string coef_axis;
  std::vector<double> coef_values;
  coefficients->add_option("files", coef_files, "series CSV files, one per sweep point")->required()->check(CLI::ExistingFile);
  coefficients->add_option("--axis", coef_axis, "temperature | wavelength | prbs_log2 | baud_exp")->required();
  coefficients->add_option("--values", coef_values,
                           "axis value per file (C, nm, PRBS order, GBd); default from the sidecars")
      ->delimiter(',');
  coefficients->callback([&] {
    const auto axis = analysis::coefficient_axis_from_string(coef_axis);
    if (!coef_values.empty() && coef_values.size() != coef_files.size()) {
      throw ConfigError("--values needs one value per file");
    }
    std::vector<analysis::SweepRun> runs;
    for (std::size_t i = 0; i < coef_files.size(); ++i) {
      const auto s = io::load_series(coef_files[i]);
      analysis::SweepRun r;
      r.stats = analysis::window_stats(s);
      if (!coef_values.empty()) {
        r.axis_value = coef_values[i];
      } else if (axis == analysis::CoefficientAxis::Temperature) {
        r.axis_value = s.metadata.temperature_c;
      } else if (axis == analysis::CoefficientAxis::PrbsLog2) {
        r.axis_value = s.metadata.prbs_order;
      } else if (axis == analysis::CoefficientAxis::BaudExp) {
        r.axis_value = s.metadata.baud / 1e9;
      } else {
        throw ConfigError("wavelength sweeps need --values (the sidecar does not record wavelength)");
      }
      runs.push_back(r);
    }
    const auto fit = analysis::extract_coefficients(runs, axis);
    if (axis == analysis::CoefficientAxis::BaudExp) {
      std::cout << "axis,a,b\n" << coef_axis << ',' << n(fit.a) << ',' << n(fit.b) << '\n';
    } else {
      std::cout << "axis,slope,intercept\n" << coef_axis << ',' << n(fit.slope) << ',' << n(fit.intercept) << '\n';
    }
    std::cout << "# residuals\n";
    for (std::size_t i = 0; i < fit.residuals.size(); ++i) {
      std::cout << coef_files[i] << ',' << n(runs[i].axis_value) << ',' << n(fit.residuals[i]) << '\n';
    }
  });

  // resample
  auto* resample = app.add_subcommand("resample", "average a series over a longer averaging time");
  std::string rs_file, rs_out;
  double rs_time = 0.0;
  resample->add_option("file", rs_file, "series CSV")->required()->check(CLI::ExistingFile);
  resample->add_option("--averaging-time", rs_time, "new averaging time (s), an integer multiple of the current")
      ->required();
  resample->add_option("--output", rs_out, "output CSV (default <out-dir>/<stem>_avg<T>.csv)");
  resample->callback([&] {
    const auto s = io::load_series(rs_file);
    const auto r = analysis::resample_average(s, rs_time);
    const fs::path path = rs_out.empty() ? out_path(g, fs::path(rs_file).stem().string() + "_avg" + n(rs_time) + ".csv")
                                         : fs::path(rs_out);
    io::save_series(path, r);
    const auto st = analysis::window_stats(r);
    std::cout << "wrote " << path.string() << " (" << r.size() << " samples, dynamic " << n(st.dynamic_xt_db)
              << " dB, worst case " << n(st.worst_case_xt_db) << " dB)\n";
  });

  // spectrum dump
  auto* spectrum = app.add_subcommand("spectrum", "source spectrum tools");
  spectrum->require_subcommand(1);
  auto* dump = spectrum->add_subcommand("dump", "print the configured source spectrum as offset_hz,fraction rows");
  std::string dump_out;
  dump->add_option("--output", dump_out, "write here instead of stdout");
  dump->callback([&] {
    const auto rc = load(g);
    const auto s = io::build_source(rc.source);
    write_or_print(dump_out, [&](std::ostream& os) { io::emit_plot_data(os, s); });
  });

  // scenario run
  auto* scenario = app.add_subcommand("scenario", "sweep experiments");
  scenario->require_subcommand(1);
  auto* scenario_run = scenario->add_subcommand("run", "run the [scenario] section of the configuration");
  std::optional<int> workers;
  scenario_run->add_option("--workers", workers, "parallel runs (default [scenario] workers)");
  int scenario_exit = 0;
  scenario_run->callback([&] {
    const auto rc = load(g);
    if (!rc.has_scenario) throw ConfigError("configuration has no [scenario] section");
    const auto result = io::run_scenario(rc, g.out_dir, workers);
    for (const auto& r : result.runs) {
      if (r.ok) {
        std::cout << r.label << ": static " << n(r.stats.static_xt_db) << " dB, dynamic " << n(r.stats.dynamic_xt_db)
                  << " dB\n";
      } else {
        std::cout << r.label << ": FAILED: " << r.error << '\n';
      }
    }
    std::cout << "manifest " << result.manifest.string() << '\n';
    if (!result.all_ok()) scenario_exit = 1;
  });

  // ingest
  auto* ingest = app.add_subcommand("ingest", "convert a power-meter log into a crosstalk series");
  std::string log_file, ingest_name = "ingested";
  int excited = 0, target = 0;
  ingest->add_option("file", log_file, "power log CSV (time_s,ch1_dbm,...)")->required()->check(CLI::ExistingFile);
  ingest->add_option("--excited", excited, "channel of the excited core")->required();
  ingest->add_option("--target", target, "channel of the crosstalk (target) core")->required();
  ingest->add_option("--name", ingest_name, "output basename")->capture_default_str();
  ingest->callback([&] {
    const auto log = io::load_power_log(log_file);
    const auto res = io::ingest_power_log(log, excited, target);
    const auto path = out_path(g, ingest_name + ".csv");
    io::save_series(path, res.series);
    std::cout << "wrote " << path.string() << " (" << res.series.size() << " samples, averaging time "
              << n(res.series.averaging_time_s) << " s)\n";
    if (!res.low_power_rows.empty()) {
      std::cout << "warning: " << res.low_power_rows.size() << " rows below -80 dBm (first at data row "
                << res.low_power_rows.front() + 1 << ")\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mcfxt::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return scenario_exit;
}

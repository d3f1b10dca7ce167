#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "mcfxt/analysis/stats.hpp"
#include "mcfxt/sim/kernel.hpp"
#include "mcfxt/sim/pmp.hpp"
#include "mcfxt/sim/simulator.hpp"
#include "mcfxt/sim/speed.hpp"

using namespace mcfxt;
using namespace mcfxt::sim;

namespace {

PmpState default_state(std::uint64_t seed = 1, int core = 1) {
  return init_pmps(fiber::calibrated_geometry(), 35.0, 1550.0, kDefaultWalkoffSPerM, seed, core);
}

double variance(const std::vector<double>& x) {
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double v = 0.0;
  for (double a : x) v += (a - m) * (a - m);
  return v / static_cast<double>(x.size() - 1);
}

SimConfig short_config(signal::SourceSpectrum source, double duration = 60.0, double d = 0.5) {
  SimConfig c;
  c.source = std::move(source);
  c.duration_s = duration;
  c.phase_diffusion = d;
  return c;
}

}  // namespace

TEST(InitPmps, DeterministicAndSized) {
  const auto a = default_state(7);
  const auto b = default_state(7);
  EXPECT_EQ(a.positions_m, b.positions_m);
  EXPECT_EQ(a.phases, b.phases);
  EXPECT_EQ(a.size(), static_cast<std::size_t>(fiber::pmp_count(1000.0, 0.1)));
  EXPECT_EQ(a.phases[0].size(), a.size());
  EXPECT_EQ(a.phases[1].size(), a.size());
  EXPECT_NO_THROW(a.validate(1000.0));
  for (double p : a.phases[0]) {
    EXPECT_GE(p, 0.0);
    EXPECT_LT(p, 2.0 * std::numbers::pi);
  }
  EXPECT_NE(default_state(8).positions_m, a.positions_m);
}

TEST(InitPmps, PositionMeanIsHalfLength) {
  // Mean of N uniform draws has standard deviation L / sqrt(12 N); average over seeds.
  const double L = 1000.0;
  double sum = 0.0;
  const int seeds = 200;
  std::size_t n = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto st = default_state(static_cast<std::uint64_t>(s) + 100);
    for (double z : st.positions_m) sum += z;
    n += st.size();
  }
  const double mean = sum / static_cast<double>(n);
  EXPECT_NEAR(mean, L / 2.0, 3.0 * L / (2.0 * std::sqrt(3.0 * static_cast<double>(n))));
}

TEST(EvolvePhases, ZeroDiffusionLeavesPhases) {
  auto s = default_state();
  const auto before = s.phases;
  evolve_phases(s, 1.0, 0.0);
  EXPECT_EQ(s.phases, before);
  EXPECT_THROW(evolve_phases(s, 0.0, 1.0), DomainError);
  EXPECT_THROW(evolve_phases(s, 1.0, -1.0), DomainError);
}

TEST(EvolvePhases, IncrementVarianceIsTwoDt) {
  auto s = default_state();
  const auto start = s.phases;
  const double d = 0.3, dt = 0.05;
  const int steps = 200;
  for (int k = 0; k < steps; ++k) evolve_phases(s, dt, d);
  // 2 x 32 points, each one accumulated sample: repeat over seeds to reach 1e4 samples.
  std::vector<double> inc;
  for (int seed = 0; seed < 160; ++seed) {
    auto t = default_state(static_cast<std::uint64_t>(seed) + 1000);
    const auto t0 = t.phases;
    for (int k = 0; k < steps; ++k) evolve_phases(t, dt, d);
    for (int pol = 0; pol < kPolarizations; ++pol) {
      for (std::size_t l = 0; l < t.size(); ++l) inc.push_back(t.phases[pol][l] - t0[pol][l]);
    }
  }
  ASSERT_GE(inc.size(), 10000u);
  EXPECT_NEAR(variance(inc) / (2.0 * d * dt * steps), 1.0, 0.05);
  EXPECT_NE(s.phases, start);
}

TEST(EvolvePhases, DifferentSeedsDecorrelate) {
  auto a = default_state(1);
  auto b = default_state(2);
  std::vector<double> x, y;
  for (int k = 0; k < 200; ++k) {
    const auto a0 = a.phases[0], b0 = b.phases[0];
    evolve_phases(a, 0.1, 1.0);
    evolve_phases(b, 0.1, 1.0);
    for (std::size_t l = 0; l < a.size(); ++l) {
      x.push_back(a.phases[0][l] - a0[l]);
      y.push_back(b.phases[0][l] - b0[l]);
    }
  }
  const double n = static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 3.0 / std::sqrt(n));
}

TEST(TransferPower, CoherentSumAndSinglePoint) {
  auto s = default_state();
  const double n = static_cast<double>(s.size());
  for (auto& p : s.phases) std::fill(p.begin(), p.end(), 0.0);
  EXPECT_NEAR(transfer_power(s, 0, 0.0), n * n * s.coupling * s.coupling, 1e-12 * n * n * s.coupling * s.coupling);
  for (double w : {0.0, 1e9, 5e10}) EXPECT_LE(transfer_power(s, 0, w), n * n * s.coupling * s.coupling * (1 + 1e-12));

  PmpState one = s;
  one.positions_m = {500.0};
  one.phases = {std::vector<double>{1.234}, std::vector<double>{-2.0}};
  for (double w : {0.0, 3e10}) EXPECT_NEAR(transfer_power(one, 0, w), s.coupling * s.coupling, 1e-20);
}

TEST(TransferPower, RandomPhaseMeanIsClosedForm) {
  auto s = default_state();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  const int draws = 100000;
  double acc = 0.0;
  for (int k = 0; k < draws; ++k) {
    for (auto& p : s.phases[0]) p = u(rng);
    acc += transfer_power(s, 0, 0.0);
  }
  const double expect = static_cast<double>(s.size()) * s.coupling * s.coupling;
  // Each draw is roughly exponential with mean `expect`.
  EXPECT_NEAR(acc / draws / expect, 1.0, 4.0 / std::sqrt(draws));
}

TEST(InstantaneousXt, CwIsPolarizationSumAtZero) {
  const auto s = default_state();
  const double floor = 1e-7;
  const double expect = 0.5 * (transfer_power(s, 0, 0.0) + transfer_power(s, 1, 0.0)) + floor;
  EXPECT_NEAR(instantaneous_xt(s, signal::build_cw_spectrum(), floor), expect, 1e-15 * expect);
}

TEST(InstantaneousXt, SingleLineIsTransferAtThatOffset) {
  const auto s = default_state();
  signal::SourceSpectrum one;
  one.kind = signal::SourceKind::ASE;
  one.lines = {{12.5e9, 1.0}};
  const double w = 2.0 * std::numbers::pi * 12.5e9;
  const double expect = 0.5 * (transfer_power(s, 0, w) + transfer_power(s, 1, w));
  EXPECT_NEAR(instantaneous_xt(s, one, 0.0), expect, 1e-14 * expect);
}

TEST(TransferKernel, MatchesLineByLineSum) {
  auto s = default_state(5);
  for (const auto& spectrum : {signal::build_cw_spectrum(), signal::build_ook_spectrum(25e9, 7),
                               signal::build_qam_spectrum(25e9, 16), signal::build_ase_spectrum(150e9)}) {
    std::vector<double> delays;
    for (double z : s.positions_m) delays.push_back(s.walkoff_s_per_m * z);
    TransferKernel k(delays, spectrum);
    EXPECT_LE(k.rank(), k.dimension());
    for (int rep = 0; rep < 3; ++rep) {
      evolve_phases(s, 1.0, 1.0);
      double p = 0.0;
      for (int pol = 0; pol < kPolarizations; ++pol) {
        Eigen::VectorXd re(static_cast<Eigen::Index>(s.size())), im(static_cast<Eigen::Index>(s.size()));
        for (std::size_t l = 0; l < s.size(); ++l) {
          re(static_cast<Eigen::Index>(l)) = s.coupling * std::cos(s.phases[pol][l]);
          im(static_cast<Eigen::Index>(l)) = s.coupling * std::sin(s.phases[pol][l]);
        }
        p += kPolarizationWeight * k.evaluate(re, im);
      }
      const double ref = instantaneous_xt(s, spectrum, 0.0);
      EXPECT_NEAR(p, ref, 1e-9 * ref);
    }
  }
}

TEST(Simulator, CoherentPowerMatchesReference) {
  SimConfig c = short_config(signal::build_ook_spectrum(25e9, 7));
  c.excited_cores = {1, 5};
  Simulator sim(c);
  for (int k = 0; k < 5; ++k) {
    sim.advance(0.1);
    const double ref = instantaneous_xt_coherent(sim.states(), sim.path_phases(), c.source, c.geometry.xt_floor);
    EXPECT_NEAR(sim.power(), ref, 1e-9 * ref);
  }
  c.combining = CoreCombining::Incoherent;
  Simulator inc(c);
  inc.advance(0.1);
  const double ref = instantaneous_xt(inc.states()[0], c.source, c.geometry.xt_floor) +
                     instantaneous_xt(inc.states()[1], c.source, c.geometry.xt_floor);
  EXPECT_NEAR(inc.power(), ref, 1e-9 * ref);
}

TEST(SimulateSeries, FrozenPhasesGiveConstantSeries) {
  auto c = short_config(signal::build_cw_spectrum(), 10.0, 0.0);
  const auto s = simulate_series(c);
  EXPECT_EQ(s.size(), 400u);
  EXPECT_EQ(analysis::dynamic_xt(s), 0.0);
  EXPECT_NO_THROW(s.validate());
  EXPECT_DOUBLE_EQ(s.time_s.front(), 0.025);
}

TEST(SimulateSeries, Deterministic) {
  const auto c = short_config(signal::build_pam4_spectrum(25e9, 9), 5.0);
  EXPECT_EQ(simulate_series(c), simulate_series(c));
  auto d = c;
  d.seed = 2;
  EXPECT_NE(simulate_series(c).xt_db, simulate_series(d).xt_db);
}

TEST(SimulateSeries, LongRunMeanMatchesClosedForm) {
  auto c = short_config(signal::build_cw_spectrum(), 600.0, 2.0);
  c.substeps_per_sample = 2;
  const auto s = simulate_series(c);
  EXPECT_NEAR(analysis::static_xt(s), fiber::linear_to_db(expected_mean_xt(c)), 0.5);
}

TEST(SimulateSeries, CwFluctuatesMoreThanAse) {
  const auto cw = simulate_series(short_config(signal::build_cw_spectrum(), 120.0));
  const auto ase = simulate_series(short_config(signal::build_ase_spectrum(150e9), 120.0));
  EXPECT_GT(analysis::dynamic_xt(cw), analysis::dynamic_xt(ase) + 5.0);
  EXPECT_GT(variance(cw.xt_db), variance(ase.xt_db));
}

TEST(SimulateSeries, NarrowAseBehavesLikeCw) {
  // A 1 Hz wide ASE band adds no phase spread; variance matches CW within sampling error.
  double v_cw = 0.0, v_ase = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto c = short_config(signal::build_cw_spectrum(), 120.0);
    c.seed = seed;
    v_cw += variance(simulate_series(c).xt_db);
    c.source = signal::build_ase_spectrum(1.0);
    v_ase += variance(simulate_series(c).xt_db);
  }
  EXPECT_NEAR(v_ase / v_cw, 1.0, 1e-6);
}

TEST(SimulateSeries, SubstepHalvingKeepsStaticXt) {
  // Different substep counts draw different phase paths, so compare each with the ergodic mean.
  auto c = short_config(signal::build_cw_spectrum(), 600.0, 2.0);
  const double expect = fiber::linear_to_db(expected_mean_xt(c));
  for (int substeps : {2, 4}) {
    c.substeps_per_sample = substeps;
    EXPECT_NEAR(analysis::static_xt(simulate_series(c)), expect, 0.5) << substeps;
  }
}

TEST(SimulateSeries, ShortAveragingLeavesGap) {
  auto c = short_config(signal::build_cw_spectrum(), 2.0);
  c.averaging_time_s = 0.005;
  const auto s = simulate_series(c);
  EXPECT_EQ(s.averaging_time_s, 0.005);
  EXPECT_EQ(s.size(), 80u);
  c.averaging_time_s = 0.05;
  EXPECT_THROW(simulate_series(c), ConfigError);
}

TEST(SimConfig, RejectsInconsistencies) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.excited_cores = {3};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.excited_cores = {};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.target_core = 9;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.duration_s = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.geometry.length_m = 1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SetTemperature, IdentityAndRange) {
  SimConfig c;
  EXPECT_EQ(set_temperature(c, c.temperature_c), c);
  EXPECT_THROW(set_temperature(c, 19.0), ConfigError);
  EXPECT_THROW(set_temperature(c, 81.0), ConfigError);
  const auto h = set_temperature(c, 53.0);
  EXPECT_EQ(h.temperature_c, 53.0);
  EXPECT_DOUBLE_EQ(h.walkoff_s_per_m, c.walkoff_s_per_m * (1.0 + 30.0 * c.thermal.walkoff_per_k));
  EXPECT_GT(expected_mean_xt(h), expected_mean_xt(c));
}

TEST(SetTemperature, HotterRaisesStaticXt) {
  auto c = short_config(signal::build_ase_spectrum(150e9), 120.0);
  const double cold = analysis::static_xt(simulate_series(c));
  const double hot = analysis::static_xt(simulate_series(set_temperature(c, 53.0)));
  EXPECT_GT(hot, cold);
}

TEST(FluctuationSpeed, ConstantSeriesIsZero) {
  XtSeries s;
  for (int i = 0; i < 100; ++i) {
    s.time_s.push_back(0.025 * (i + 1));
    s.xt_db.push_back(-45.0);
  }
  EXPECT_EQ(fluctuation_speed(s), 0.0);
  s.time_s.resize(2);
  s.xt_db.resize(2);
  EXPECT_THROW(fluctuation_speed(s), AnalysisError);
}

TEST(FluctuationSpeed, SinusoidCountsTwoPerPeriod) {
  const double f = 0.2, T = 600.0, dt = 0.025;
  XtSeries s;
  for (int i = 0; i < static_cast<int>(T / dt); ++i) {
    const double t = dt * i;
    s.time_s.push_back(t);
    s.xt_db.push_back(-45.0 + 3.0 * std::sin(2.0 * std::numbers::pi * f * t));
  }
  EXPECT_NEAR(static_cast<double>(count_extrema(s)), 2.0 * f * T, 2.0);
  EXPECT_NEAR(fluctuation_speed(s), 2.0 * f * 3600.0, 2.0 * 3600.0 / T);
  // Ripple below the hysteresis is ignored.
  for (auto& v : s.xt_db) v = -45.0 + 0.2 * (v + 45.0) / 3.0;
  EXPECT_EQ(count_extrema(s), 0u);
}

TEST(CoreCombining, Names) {
  EXPECT_EQ(core_combining_from_string("incoherent"), CoreCombining::Incoherent);
  EXPECT_EQ(to_string(CoreCombining::Coherent), "coherent");
  EXPECT_THROW(core_combining_from_string("sum"), ConfigError);
}

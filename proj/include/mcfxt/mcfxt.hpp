#pragma once

#include "mcfxt/errors.hpp"
#include "mcfxt/fiber/bessel.hpp"
#include "mcfxt/fiber/coupling.hpp"
#include "mcfxt/fiber/geometry.hpp"
#include "mcfxt/signal/spectrum.hpp"
#include "mcfxt/sim/kernel.hpp"
#include "mcfxt/sim/pmp.hpp"
#include "mcfxt/sim/rng.hpp"
#include "mcfxt/sim/series.hpp"
#include "mcfxt/sim/simulator.hpp"
#include "mcfxt/sim/speed.hpp"
#include "mcfxt/analysis/chisq.hpp"
#include "mcfxt/analysis/coefficients.hpp"
#include "mcfxt/analysis/convergence.hpp"
#include "mcfxt/analysis/correlation.hpp"
#include "mcfxt/analysis/histogram.hpp"
#include "mcfxt/analysis/pvp.hpp"
#include "mcfxt/analysis/stats.hpp"
#include "mcfxt/io/config.hpp"
#include "mcfxt/io/csv.hpp"
#include "mcfxt/io/plot.hpp"
#include "mcfxt/io/power_log.hpp"
#include "mcfxt/io/scenario.hpp"

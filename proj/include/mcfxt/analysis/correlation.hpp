#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "mcfxt/errors.hpp"
#include "mcfxt/sim/series.hpp"

namespace mcfxt::analysis {

struct CorrelationProfile {
  std::vector<double> values;  ///< lag 0 .. n-1, values[0] == 1
  double max_offzero = 0.0;    ///< max |values[k]| for k >= 1
  std::size_t argmax_lag = 0;
};

namespace detail {

// FFTW's planner is not reentrant; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace detail

/// Normalized circular autocorrelation of the mean-removed sequence, computed as
/// IFFT(|FFT(x)|^2) / (n var).
inline CorrelationProfile circular_correlation(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 16) throw AnalysisError("circular correlation needs at least 16 samples");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t nc = n / 2 + 1;
  std::unique_ptr<double, detail::FftwFree> buf(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, detail::FftwFree> spec(fftw_alloc_complex(nc));
  if (!buf || !spec) throw std::bad_alloc();
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.get(), spec.get(), FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.get(), buf.get(), FFTW_ESTIMATE);
  }
  double* b = buf.get();
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = x[i] - mean;
    ss += b[i] * b[i];
  }
  if (!(ss > 1e-24 * static_cast<double>(n) * std::max(1.0, mean * mean))) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    throw AnalysisError("circular correlation: series has zero variance");
  }
  fftw_execute(fwd);
  for (std::size_t k = 0; k < nc; ++k) {
    spec.get()[k][0] = spec.get()[k][0] * spec.get()[k][0] + spec.get()[k][1] * spec.get()[k][1];
    spec.get()[k][1] = 0.0;
  }
  fftw_execute(inv);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }

  const double zero = b[0];
  CorrelationProfile out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = b[i] / zero;
  out.values[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(out.values[k]) > out.max_offzero) {
      out.max_offzero = std::abs(out.values[k]);
      out.argmax_lag = k;
    }
  }
  return out;
}

inline CorrelationProfile circular_correlation(const sim::XtSeries& s) {
  return circular_correlation(std::span<const double>(s.xt_db));
}

}  // namespace mcfxt::analysis

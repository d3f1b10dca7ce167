#pragma once

// Pseudo-Voigt step distribution: a Gaussian and a Lorentzian sharing mean and
// half-width, mixed with weight alpha on the Lorentzian.

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mcfxt/analysis/histogram.hpp"
#include "mcfxt/errors.hpp"

namespace mcfxt::analysis {

/// Gaussian standard deviation with the same half width at half maximum as a Lorentzian of scale sigma.
inline double pvp_gaussian_sigma(double sigma) { return sigma / std::sqrt(2.0 * std::numbers::ln2); }

inline double pvp_pdf(double zeta, double mu, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw DomainError("pvp_pdf: sigma must be > 0");
  const double sg = pvp_gaussian_sigma(sigma);
  const double u = (zeta - mu) / sg;
  const double gauss = std::exp(-0.5 * u * u) / (sg * std::sqrt(2.0 * std::numbers::pi));
  const double v = (zeta - mu) / sigma;
  const double lorentz = 1.0 / (std::numbers::pi * sigma * (1.0 + v * v));
  return (1.0 - alpha) * gauss + alpha * lorentz;
}

inline double pvp_cdf(double zeta, double mu, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw DomainError("pvp_cdf: sigma must be > 0");
  const double sg = pvp_gaussian_sigma(sigma);
  const double gauss = 0.5 * std::erfc(-(zeta - mu) / (sg * std::numbers::sqrt2));
  const double lorentz = 0.5 + std::atan((zeta - mu) / sigma) / std::numbers::pi;
  return (1.0 - alpha) * gauss + alpha * lorentz;
}

/// Draws from the mixture; alpha must lie in [0, 1] for this to be a distribution.
template <class Rng>
std::vector<double> sample_pvp(std::size_t n, double mu, double sigma, double alpha, Rng& rng) {
  if (!(sigma > 0.0)) throw DomainError("sample_pvp: sigma must be > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("sample_pvp: alpha must lie in [0, 1]");
  std::bernoulli_distribution pick(alpha);
  std::normal_distribution<double> gauss(mu, pvp_gaussian_sigma(sigma));
  std::cauchy_distribution<double> lorentz(mu, sigma);
  std::vector<double> out(n);
  for (auto& z : out) z = pick(rng) ? lorentz(rng) : gauss(rng);
  return out;
}

inline constexpr double kPvpAlphaMin = -0.1;
inline constexpr double kPvpAlphaMax = 1.1;
inline constexpr std::size_t kPvpMinSteps = 500;

struct PvpFit {
  double mu = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double r2 = 0.0;
  bool alpha_clamped = false;       ///< hit a bound of [-0.1, 1.1]
  bool alpha_outside_unit = false;  ///< alpha outside [0, 1]
  double residual_ss = 0.0;
  Histogram histogram;
  std::vector<double> model_density;  ///< bin-averaged model on the histogram
};

namespace detail {

inline std::vector<double> binned_pvp(const Histogram& h, double mu, double sigma, double alpha) {
  std::vector<double> out(h.bins());
  const double w = h.width();
  double prev = pvp_cdf(h.edges[0], mu, sigma, alpha);
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double next = pvp_cdf(h.edges[i + 1], mu, sigma, alpha);
    out[i] = (next - prev) / w;
    prev = next;
  }
  return out;
}

// Parameters (mu, log sigma[, alpha]); alpha is held at `fixed_alpha` when only two are free.
struct PvpResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Histogram* h = nullptr;
  int free = 3;
  double fixed_alpha = 0.0;

  int inputs() const { return free; }
  int values() const { return static_cast<int>(h->bins()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    const double alpha = free == 3 ? p(2) : fixed_alpha;
    const auto model = binned_pvp(*h, p(0), std::exp(p(1)), alpha);
    for (std::size_t i = 0; i < model.size(); ++i) {
      f(static_cast<Eigen::Index>(i)) = model[i] - h->density[i];
    }
    return 0;
  }
};

inline bool lm_converged(int status) {
  using namespace Eigen::LevenbergMarquardtSpace;
  return status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
         status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
         status == XtolTooSmall || status == FtolTooSmall || status == GtolTooSmall;
}

}  // namespace detail

/// Least-squares fit of the binned PVP density to the step histogram.  Starts from
/// mu = median, sigma = IQR / 2, alpha = 0.5; alpha is confined to [-0.1, 1.1] by
/// clamping and refitting mu and sigma at the bound.
inline PvpFit fit_pvp(std::span<const double> steps, int max_evaluations = 4000) {
  if (steps.size() < kPvpMinSteps) {
    throw AnalysisError("fit_pvp needs at least " + std::to_string(kPvpMinSteps) + " steps, got " +
                        std::to_string(steps.size()));
  }
  const Quartiles q = quartiles(steps);
  PvpFit fit;
  fit.histogram = freedman_diaconis_histogram(steps);

  detail::PvpResidual residual{&fit.histogram, 3, 0.0};
  Eigen::VectorXd p(3);
  p << q.median, std::log(0.5 * q.iqr()), 0.5;
  auto run = [&](detail::PvpResidual r, Eigen::VectorXd& x) {
    Eigen::NumericalDiff<detail::PvpResidual> diff(r);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::PvpResidual>> lm(diff);
    lm.parameters.maxfev = max_evaluations;
    const int status = lm.minimize(x);
    Eigen::VectorXd f(r.values());
    r(x, f);
    if (!detail::lm_converged(status) || !x.allFinite()) {
      throw FitError("fit_pvp: Levenberg-Marquardt did not converge (status " + std::to_string(status) +
                         ")",
                     f.squaredNorm());
    }
    return f.squaredNorm();
  };
  fit.residual_ss = run(residual, p);
  fit.mu = p(0);
  fit.sigma = std::exp(p(1));
  fit.alpha = p(2);
  if (fit.alpha < kPvpAlphaMin || fit.alpha > kPvpAlphaMax) {
    fit.alpha = std::clamp(fit.alpha, kPvpAlphaMin, kPvpAlphaMax);
    fit.alpha_clamped = true;
    detail::PvpResidual fixed{&fit.histogram, 2, fit.alpha};
    Eigen::VectorXd p2(2);
    p2 << q.median, std::log(0.5 * q.iqr());
    fit.residual_ss = run(fixed, p2);
    fit.mu = p2(0);
    fit.sigma = std::exp(p2(1));
  }
  fit.alpha_outside_unit = fit.alpha < 0.0 || fit.alpha > 1.0;
  fit.model_density = detail::binned_pvp(fit.histogram, fit.mu, fit.sigma, fit.alpha);
  fit.r2 = r2_score(fit.histogram.density, fit.model_density);
  return fit;
}

}  // namespace mcfxt::analysis

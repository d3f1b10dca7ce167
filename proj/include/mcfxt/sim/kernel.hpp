#pragma once

// Spectrum-averaged transfer as a quadratic form in the PMP phasors.
//
// With c_l = K_l exp(-j Phi_l) the detected power over a symmetric spectrum is
//   P = sum_k p_k |sum_l c_l exp(-j s z_l w_k)|^2 = c^H M c,
//   M_lm = sum_k p_k cos(s (z_l - z_m) w_k),
// a real symmetric matrix fixed by the PMP positions.  Its eigen-decomposition
// truncated to the numerically non-zero spectrum gives P = sum_r lambda_r |u_r . c|^2,
// which costs rank x N per evaluation instead of lines x N.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "mcfxt/signal/spectrum.hpp"

namespace mcfxt::sim {

class TransferKernel {
 public:
  TransferKernel() = default;

  /// `delays_s` holds s * z_l for every phasor (seconds).
  TransferKernel(const std::vector<double>& delays_s, const signal::SourceSpectrum& spectrum) {
    const auto n = static_cast<Eigen::Index>(delays_s.size());
    Eigen::MatrixXd m(n, n);
    std::vector<double> omegas;
    std::vector<double> weights;
    for (const auto& line : spectrum.lines) {
      if (line.fraction <= 0.0) continue;
      omegas.push_back(2.0 * std::numbers::pi * line.offset_hz);
      weights.push_back(line.fraction);
    }
    for (Eigen::Index l = 0; l < n; ++l) {
      m(l, l) = spectrum.total_power();
      for (Eigen::Index k = l + 1; k < n; ++k) {
        const double dt = delays_s[static_cast<std::size_t>(l)] - delays_s[static_cast<std::size_t>(k)];
        double v = spectrum.carrier_fraction;
        for (std::size_t i = 0; i < omegas.size(); ++i) v += weights[i] * std::cos(omegas[i] * dt);
        m(l, k) = m(k, l) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const double cutoff = 1e-13 * lambda.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < lambda.size(); ++r) {
      if (lambda(r) > cutoff) keep.push_back(r);
    }
    eigenvalues_.resize(static_cast<Eigen::Index>(keep.size()));
    basis_.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      eigenvalues_(col) = lambda(keep[i]);
      basis_.col(col) = solver.eigenvectors().col(keep[i]);
    }
    // Row-major transpose for contiguous dot products in evaluate().
    basis_t_ = basis_.transpose();
    pr_.resize(rank());
    pi_.resize(rank());
  }

  Eigen::Index rank() const { return eigenvalues_.size(); }
  Eigen::Index dimension() const { return basis_.rows(); }

  /// c^H M c for phasors given as real and imaginary parts.  Not reentrant: uses
  /// per-kernel scratch space.
  double evaluate(const Eigen::VectorXd& re, const Eigen::VectorXd& im) const {
    pr_.noalias() = basis_t_ * re;
    pi_.noalias() = basis_t_ * im;
    return (eigenvalues_.array() * (pr_.array().square() + pi_.array().square())).sum();
  }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd basis_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> basis_t_;
  mutable Eigen::VectorXd pr_, pi_;
};

}  // namespace mcfxt::sim

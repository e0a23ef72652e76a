#pragma once

// Minimization of a smooth function of a q x u orthonormal basis that only
// depends on its span. Curvilinear search along the Cayley transform of the
// projected gradient, Armijo backtracking, Barzilai-Borwein trial steps.

#include <cmath>
#include <limits>
#include <vector>

#include "revar/matrix_kit.hpp"

namespace revar {

enum class StopReason { GradientTol, ObjectiveTol, Stalled, MaxIter };

template <class Scalar = double>
struct GrassmannOptions {
  Scalar gtol = Scalar(1e-6);
  Scalar ftol = Scalar(1e-8);
  int max_iter = 500;
  Scalar armijo = Scalar(1e-4);
  int max_backtracks = 40;
};

template <class Scalar = double>
struct GrassmannResult {
  Mat<Scalar> point;
  Scalar value = Scalar(0);
  Scalar grad_norm = Scalar(0);
  int iterations = 0;
  StopReason reason = StopReason::MaxIter;
  std::vector<Scalar> trace;

  bool converged() const { return reason != StopReason::MaxIter; }
};

/// Y(tau) = D - tau U (I + tau/2 V'U)^{-1} V'D with U = [xi, D], V = [D, -xi].
/// This is (I + tau/2 W)^{-1}(I - tau/2 W) D for W = xi D' - D xi'.
template <class Scalar>
Mat<Scalar> cayley_step(const Mat<Scalar>& d, const Mat<Scalar>& xi, Scalar tau) {
  const Index u = d.cols();
  Mat<Scalar> big_u(d.rows(), 2 * u);
  big_u << xi, d;
  Mat<Scalar> big_v(d.rows(), 2 * u);
  big_v << d, -xi;
  Mat<Scalar> inner = Mat<Scalar>::Identity(2 * u, 2 * u) + (tau / Scalar(2)) * (big_v.transpose() * big_u);
  Mat<Scalar> rhs = big_v.transpose() * d;
  return d - tau * big_u * inner.partialPivLu().solve(rhs);
}

/// `f.value(D)` returns the objective (may throw revar::Error for degenerate
/// candidates, treated as +inf); `f.gradient(D)` returns the Euclidean gradient.
template <class Scalar, class Objective>
GrassmannResult<Scalar> grassmann_minimize(Objective& f, const Mat<Scalar>& start,
                                           const GrassmannOptions<Scalar>& opts = {}) {
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  auto safe_value = [&](const Mat<Scalar>& d) -> Scalar {
    try {
      const Scalar v = f.value(d);
      return std::isfinite(v) ? v : inf;
    } catch (const Error&) {
      return inf;
    }
  };

  GrassmannResult<Scalar> out;
  Mat<Scalar> d = orthonormalize(start);
  Scalar fd = f.value(d);
  out.trace.push_back(fd);

  Mat<Scalar> grad = f.gradient(d);
  Mat<Scalar> xi = grad - d * (d.transpose() * grad);
  Scalar gnorm = xi.norm();
  Scalar tau = gnorm > Scalar(0) ? Scalar(1) / gnorm : Scalar(1);
  Mat<Scalar> prev_d, prev_xi;

  int iter = 0;
  bool stopped = false;
  for (; iter < opts.max_iter; ++iter) {
    if (gnorm < opts.gtol) {
      out.reason = StopReason::GradientTol;
      stopped = true;
      break;
    }
    if (iter > 0) {
      // Alternating Barzilai-Borwein steps.
      const Mat<Scalar> s = d - prev_d;
      const Mat<Scalar> y = xi - prev_xi;
      const Scalar sy = std::abs((s.array() * y.array()).sum());
      if (sy > Scalar(0)) {
        tau = (iter % 2 == 1) ? s.squaredNorm() / sy : sy / y.squaredNorm();
      }
      tau = std::clamp(tau, Scalar(1e-12), Scalar(1e12));
    }

    const Scalar slope = gnorm * gnorm;
    Mat<Scalar> trial;
    Scalar ftrial = inf;
    bool accepted = false;
    for (int k = 0; k < opts.max_backtracks; ++k) {
      trial = orthonormalize(cayley_step<Scalar>(d, xi, tau));
      ftrial = safe_value(trial);
      if (ftrial <= fd - opts.armijo * tau * slope) {
        accepted = true;
        break;
      }
      tau *= Scalar(0.5);
    }
    if (!accepted) {
      out.reason = StopReason::Stalled;
      stopped = true;
      break;
    }

    prev_d = d;
    prev_xi = xi;
    const Scalar change = std::abs(fd - ftrial);
    d = trial;
    const Scalar previous = fd;
    fd = ftrial;
    out.trace.push_back(fd);
    grad = f.gradient(d);
    xi = grad - d * (d.transpose() * grad);
    gnorm = xi.norm();
    if (change < opts.ftol * std::max(Scalar(1), std::abs(previous))) {
      out.reason = gnorm < opts.gtol ? StopReason::GradientTol : StopReason::ObjectiveTol;
      stopped = true;
      ++iter;
      break;
    }
  }
  if (!stopped) out.reason = gnorm < opts.gtol ? StopReason::GradientTol : StopReason::MaxIter;
  out.point = d;
  out.value = fd;
  out.grad_norm = gnorm;
  out.iterations = iter;
  return out;
}

}  // namespace revar

#pragma once

#include <random>

#include "revar/dgp_sim.hpp"

namespace revar::testing {

inline MatrixXd random_matrix(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  MatrixXd m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = n(rng);
  }
  return m;
}

inline MatrixXd random_spd(Index n, std::mt19937_64& rng, double ridge = 0.5) {
  const MatrixXd a = random_matrix(n, n, rng);
  return a * a.transpose() / static_cast<double>(n) + ridge * MatrixXd::Identity(n, n);
}

/// A stationary REVAR process and a sample of length T from it.
struct Sample {
  TrueParameters truth;
  SimulatedSeries series;
  AutocovarianceSet acov;
};

inline Sample simulate_sample(const Dims& dims, Index T, std::uint64_t seed,
                              ErrorFamily family = ErrorFamily::Normal) {
  Sample s;
  s.truth = generate_true_parameters(dims, seed);
  const MatrixXd e = generate_errors(family, T, s.truth.sigma, seed + 1);
  s.series = simulate_var(s.truth.beta, e, seed + 2);
  s.acov = sample_autocovariances(build_lag_design(s.series.presample, s.series.data, dims.p));
  return s;
}

/// Random parameter point of a REVAR(d, u, p, q) with a stationary-looking Gamma_(p).
inline ParameterVectors random_parameters(const Dims& dims, std::mt19937_64& rng) {
  const Index q = dims.q, u = dims.u, d = dims.d, qp = static_cast<Index>(dims.q) * dims.p;
  const MatrixXd phi = orthonormalize(random_matrix(q, u, rng));
  return make_parameters(phi, random_matrix(u, d, rng), random_matrix(d, qp, rng), random_spd(u, rng),
                         random_spd(q - u, rng), random_spd(qp, rng));
}

}  // namespace revar::testing

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revar/asymptotics.hpp"
#include "revar/selection.hpp"

namespace revar {

enum class ErrorFamily { Normal, Uniform, T6, Chi2_6, Mds, SvMds };

std::string to_string(ErrorFamily f);
ErrorFamily parse_family(const std::string& s);

struct TrueParameters {
  Dims dims;
  MatrixXd beta;
  MatrixXd phi;
  MatrixXd phi0;
  MatrixXd nu;
  MatrixXd b;
  MatrixXd omega;
  MatrixXd omega0;
  MatrixXd sigma;
  double spectral_radius = 0.0;
  int attempts = 0;
};

/// [M]_{ij} = scale * rho^{|i-j|}.
MatrixXd toeplitz_power(Index n, double rho, double scale = 1.0);

TrueParameters generate_true_parameters(const Dims& dims, std::uint64_t seed);

/// qp x qp companion matrix of beta = (beta_1, ..., beta_p).
MatrixXd companion_matrix(const MatrixXd& beta);
double spectral_radius(const MatrixXd& m);
/// Gamma_(p) of the stationary VAR, from X = F X F' + blockdiag(Sigma, 0) by doubling.
MatrixXd stationary_covariance(const MatrixXd& beta, const MatrixXd& sigma);

/// Mean-zero, identity-covariance draws Upsilon_t (T x q) before mixing.
MatrixXd standardized_innovations(ErrorFamily family, Index T, Index q, std::uint64_t seed);
/// T x q errors with covariance Sigma.
MatrixXd generate_errors(ErrorFamily family, Index T, const MatrixXd& sigma, std::uint64_t seed);

struct SimulatedSeries {
  MatrixXd presample;  // p x q, oldest first
  TimeSeriesData data;
};

/// y_t = beta x_t + e_t from a standard normal presample.
SimulatedSeries simulate_var(const MatrixXd& beta, const MatrixXd& errors, std::uint64_t presample_seed);

struct SimulationScenario {
  std::string name = "scenario";
  Dims dims;
  ErrorFamily family = ErrorFamily::Normal;
  std::vector<Index> sample_sizes{160, 270, 450, 740, 1200, 2000};
  int replications = 100;
  std::uint64_t seed = 1;
  EnvelopeOptions envelope;
  bool se_ratios = true;
  int p_max = 4;
  double alpha = 0.05;
  int threads = 1;
};

struct McRow {
  Index T = 0;
  ModelKind model = ModelKind::OLSVAR;
  int n = 0;
  double mean_error = 0.0;
  double se_mean = 0.0;
  double r_min = 1.0;
  double r_max = 1.0;
  double r_avg = 1.0;
};

struct McReport {
  SimulationScenario scenario;
  TrueParameters truth;
  std::vector<McRow> rows;
  /// errors[t][model][rep]; NaN for failed replications.
  std::vector<std::vector<std::vector<double>>> errors;
  int failures = 0;
  int convergence_warnings = 0;
  std::vector<std::string> failure_messages;
};

McReport run_monte_carlo(const SimulationScenario& scenario);

struct SelectionStudyRow {
  Index T = 0;
  int n = 0;
  double p_correct = 0.0;  // fractions in [0, 1]
  double d_correct = 0.0;
  double u_correct = 0.0;
  int u_over = 0;
  int u_under = 0;
};

struct SelectionStudy {
  SimulationScenario scenario;
  TrueParameters truth;
  std::vector<SelectionStudyRow> rows;
  int failures = 0;
};

/// Per T: BIC lag order, sequential chi-squared rank, and BIC envelope
/// dimension at the selected rank.
SelectionStudy run_selection_study(const SimulationScenario& scenario);

/// Runs job(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
template <class Job>
void parallel_for(int n, int threads, Job&& job);

}  // namespace revar

#include <atomic>
#include <thread>

namespace revar {

template <class Job>
void parallel_for(int n, int threads, Job&& job) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace revar

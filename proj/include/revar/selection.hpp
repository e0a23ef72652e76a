#pragma once

#include <string>
#include <vector>

#include "revar/estimators.hpp"

namespace revar {

enum class Criterion { AIC, BIC };
enum class DimsMode { Grid, Sequential };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& s);
std::string to_string(DimsMode m);
DimsMode parse_dims_mode(const std::string& s);

struct LagCandidate {
  int p = 0;
  double logdet = 0.0;
  long nop = 0;
  double value = 0.0;
};

struct RankTestResult {
  int d0 = 0;
  double statistic = 0.0;
  long df = 0;
  double p_value = 1.0;
};

struct DimsCandidate {
  int d = 0;
  int u = 0;
  double loglik = 0.0;
  long nop = 0;
  double value = 0.0;
  bool failed = false;
  bool converged = true;
  std::string error;
};

struct DimsTestResult {
  int u0 = 0;
  double statistic = 0.0;
  long df = 0;
  double p_value = 1.0;
};

struct SelectionReport {
  Criterion criterion = Criterion::BIC;
  DimsMode mode = DimsMode::Grid;
  double alpha = 0.05;
  Index sample_size = 0;
  std::vector<LagCandidate> lags;
  std::vector<RankTestResult> rank_tests;
  std::vector<DimsCandidate> grid;
  std::vector<DimsTestResult> dims_tests;
  int p_hat = -1;
  int d_hat = -1;
  int u_hat = -1;
};

/// Lag order by ln|Sigma(p)| + c_T * NOP_OLSVAR(p), p = 0..p_max, all
/// candidates fit on the rows after the first p_max.
SelectionReport select_lag(const TimeSeriesData& data, int p_max, Criterion criterion);

/// Chi-squared test of rank(beta) = d0 from the standardized OLS coefficients.
RankTestResult rank_test(const AutocovarianceSet& acov, int d0, Index T);

/// Sequential rank tests d0 = 0, 1, ...; stops at the first p-value above alpha.
SelectionReport select_rank(const AutocovarianceSet& acov, Index T, double alpha);

/// Envelope dimension and rank. Grid mode minimizes the information criterion
/// over 1 <= d <= u <= q and the zero model; sequential mode fixes d by
/// select_rank and tests u = d, ..., q-1 against u = q.
SelectionReport select_dims(const AutocovarianceSet& acov, Index T, DimsMode mode, Criterion criterion,
                            double alpha, const EnvelopeOptions& opts = {});

/// Information criterion over u = d..q at fixed d (nested warm starts).
SelectionReport select_envelope_dim(const AutocovarianceSet& acov, Index T, int d, Criterion criterion,
                                    const EnvelopeOptions& opts = {});

double information_criterion(Criterion criterion, double loglik, long nop, Index T);

}  // namespace revar

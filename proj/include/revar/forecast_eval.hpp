#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revar/estimators.hpp"

namespace revar {

/// h-step forecast from the last p rows of `history` (oldest first),
/// iterating the fitted VAR and feeding forecasts back in.
VectorXd forecast_h(const VarEstimate& est, const MatrixXd& history, int h);
/// Forecasts for horizons 1..H as an H x q matrix.
MatrixXd forecast_path(const VarEstimate& est, const MatrixXd& history, int H);

enum class RefitPolicy { Refit, Reuse };

std::string to_string(RefitPolicy r);
RefitPolicy parse_refit_policy(const std::string& s);

struct ModelSpec {
  ModelKind model = ModelKind::OLSVAR;
  Dims dims;
};

struct EvalConfig {
  double eval_start = 0.75;  // T0 = round(eval_start * T)
  int horizons = 4;
  RefitPolicy policy = RefitPolicy::Refit;
  EnvelopeOptions envelope;
};

struct ForecastRun {
  ModelSpec spec;
  Index t0 = 0;     // T0 = round(eval_start * T)
  Index t_end = 0;  // T
  int horizons = 0;
  RefitPolicy policy = RefitPolicy::Refit;
  /// Row k of forecasts[h-1] predicts observation T0 + H + k (1-based)
  /// from origin T0 + H + k - h.
  std::vector<MatrixXd> forecasts;
  std::vector<MatrixXd> sq_errors;
  MatrixXd rmsfe_per_variable;  // H x q
  VectorXd rmsfe;               // H, aggregate sqrt(mean over variables of MSE)
  int fit_failures = 0;
  int convergence_warnings = 0;
  std::vector<std::string> messages;
};

/// Expanding-window pseudo-real-time evaluation over the targets
/// T0 + H, ..., T (1-based). Every forecast uses only rows up to its origin;
/// dims are held fixed.
ForecastRun evaluate_rmsfe(const TimeSeriesData& data, const ModelSpec& spec, const EvalConfig& cfg);

/// Geometric block lengths with mean `block_length`, circular indexing.
std::vector<TimeSeriesData> stationary_bootstrap(const TimeSeriesData& data, double block_length, int B,
                                                 std::uint64_t seed);
/// Row indices of one resample.
std::vector<Index> stationary_bootstrap_indices(Index T, double block_length, std::uint64_t seed);
double default_block_length(Index T);

struct ForecastTableRow {
  ModelSpec spec;
  long nop = 0;
  double r_avg = 1.0;
  VectorXd rmsfe;   // averaged over bootstrap samples
  int samples = 0;  // samples that produced a finite RMSFE
  int fit_failures = 0;
  int convergence_warnings = 0;
};

struct ForecastTable {
  int bootstrap = 0;
  double block_length = 0.0;
  std::uint64_t seed = 0;
  EvalConfig config;
  std::vector<ForecastTableRow> rows;
};

/// B = 0 evaluates the original series once. r_avg compares each model's
/// avar to REVAR's at the full-sample REVAR fit of the first REVAR spec.
ForecastTable bootstrap_forecast_table(const TimeSeriesData& data, const std::vector<ModelSpec>& specs, int B,
                                       const EvalConfig& cfg, std::uint64_t seed,
                                       std::optional<double> block_length = std::nullopt, int threads = 1);

}  // namespace revar

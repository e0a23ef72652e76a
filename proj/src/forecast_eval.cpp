#include "revar/forecast_eval.hpp"

#include <cmath>
#include <random>

#include "revar/asymptotics.hpp"
#include "revar/dgp_sim.hpp"
#include "revar/stats.hpp"

namespace revar {

MatrixXd forecast_path(const VarEstimate& est, const MatrixXd& history, int H) {
  if (H < 1) throw Error(ErrorKind::BadHorizon, "horizon must be >= 1");
  const Index q = est.beta.rows();
  const Index p = q > 0 ? est.beta.cols() / q : 0;
  if (history.cols() != q) throw Error(ErrorKind::DimensionMismatch, "history has wrong number of columns");
  if (history.rows() < p) throw Error(ErrorKind::TooShort, "history shorter than p");
  // x holds (y_t', y_{t-1}', ..., y_{t-p+1}')', newest first.
  VectorXd x(q * p);
  for (Index k = 0; k < p; ++k) x.segment(k * q, q) = history.row(history.rows() - 1 - k).transpose();
  MatrixXd out(H, q);
  for (int h = 0; h < H; ++h) {
    const VectorXd y = est.alpha + est.beta * x;
    out.row(h) = y.transpose();
    if (p > 1) x.tail(q * (p - 1)) = x.head(q * (p - 1)).eval();
    if (p > 0) x.head(q) = y;
  }
  return out;
}

VectorXd forecast_h(const VarEstimate& est, const MatrixXd& history, int h) {
  return forecast_path(est, history, h).row(h - 1).transpose();
}

std::string to_string(RefitPolicy r) { return r == RefitPolicy::Refit ? "refit" : "reuse"; }

RefitPolicy parse_refit_policy(const std::string& s) {
  if (s == "refit") return RefitPolicy::Refit;
  if (s == "reuse") return RefitPolicy::Reuse;
  throw Error(ErrorKind::InvalidArgument, "unknown refit policy '" + s + "'");
}

namespace {

VarEstimate fit_prefix(const TimeSeriesData& data, Index rows, const ModelSpec& spec, const EnvelopeOptions& opts) {
  TimeSeriesData sub;
  sub.values = data.values.topRows(rows);
  const AutocovarianceSet acov = sample_autocovariances(build_lag_design(sub, spec.dims.p));
  return fit_model(spec.model, acov, spec.dims, opts);
}

}  // namespace

ForecastRun evaluate_rmsfe(const TimeSeriesData& data, const ModelSpec& spec, const EvalConfig& cfg) {
  const Index T = data.length();
  const Index q = data.dim();
  const int H = cfg.horizons;
  if (H < 1) throw Error(ErrorKind::BadHorizon, "horizons must be >= 1");
  if (!(cfg.eval_start > 0.0 && cfg.eval_start < 1.0))
    throw Error(ErrorKind::InvalidArgument, "eval_start must be in (0,1)");
  const Index t0 = static_cast<Index>(std::llround(cfg.eval_start * static_cast<double>(T)));
  const Index count = T - t0 - H + 1;
  if (count < 1) throw Error(ErrorKind::TooShort, "evaluation window shorter than the horizon");
  if (t0 <= static_cast<Index>(q) * spec.dims.p + spec.dims.p + 1)
    throw Error(ErrorKind::TooShort, "pre-evaluation sample too short for the model");

  ForecastRun run;
  run.spec = spec;
  run.t0 = t0;
  run.t_end = T;
  run.horizons = H;
  run.policy = cfg.policy;
  run.forecasts.assign(H, MatrixXd::Constant(count, q, std::nan("")));
  run.sq_errors.assign(H, MatrixXd::Constant(count, q, std::nan("")));

  std::optional<VarEstimate> current;
  EnvelopeOptions opts = cfg.envelope;
  // Origins o = T0, ..., T-1 (observations available); target o + h.
  for (Index o = t0; o < T; ++o) {
    if (!current || cfg.policy == RefitPolicy::Refit) {
      try {
        VarEstimate est = fit_prefix(data, o, spec, opts);
        if (est.has_envelope() && !est.envelope.converged) ++run.convergence_warnings;
        if (est.has_envelope() && est.phi.cols() < q) opts.warm_starts = {est.phi};
        current = std::move(est);
      } catch (const Error& e) {
        ++run.fit_failures;
        run.messages.push_back("origin " + std::to_string(o) + ": " + e.what());
      }
    }
    if (!current) continue;
    const MatrixXd path = forecast_path(*current, data.values.topRows(o), H);
    for (int h = 1; h <= H; ++h) {
      const Index target = o + h;  // 1-based
      const Index k = target - (t0 + H);
      if (k < 0 || target > T) continue;
      run.forecasts[h - 1].row(k) = path.row(h - 1);
      run.sq_errors[h - 1].row(k) = (path.row(h - 1) - data.values.row(target - 1)).array().square().matrix();
    }
  }

  run.rmsfe_per_variable.resize(H, q);
  run.rmsfe.resize(H);
  for (int h = 0; h < H; ++h) {
    const MatrixXd& se = run.sq_errors[h];
    const VectorXd mse = se.colwise().sum().transpose() / static_cast<double>(count);
    run.rmsfe_per_variable.row(h) = mse.cwiseSqrt().transpose();
    run.rmsfe(h) = std::sqrt(mse.mean());
  }
  return run;
}

double default_block_length(Index T) { return std::ceil(std::cbrt(static_cast<double>(T))); }

std::vector<Index> stationary_bootstrap_indices(Index T, double block_length, std::uint64_t seed) {
  if (!(block_length >= 1.0)) throw Error(ErrorKind::InvalidArgument, "block length must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> start(0, T - 1);
  std::bernoulli_distribution restart(1.0 / block_length);
  std::vector<Index> idx(T);
  Index cur = start(rng);
  for (Index t = 0; t < T; ++t) {
    if (t > 0) cur = restart(rng) ? start(rng) : (cur + 1) % T;
    idx[t] = cur;
  }
  return idx;
}

std::vector<TimeSeriesData> stationary_bootstrap(const TimeSeriesData& data, double block_length, int B,
                                                 std::uint64_t seed) {
  if (B < 1) throw Error(ErrorKind::InvalidArgument, "need at least one bootstrap sample");
  std::vector<TimeSeriesData> out(B);
  for (int b = 0; b < B; ++b) {
    const std::vector<Index> idx = stationary_bootstrap_indices(data.length(), block_length, derive_seed(seed, b));
    out[b].names = data.names;
    out[b].values.resize(data.length(), data.dim());
    for (Index t = 0; t < data.length(); ++t) out[b].values.row(t) = data.values.row(idx[t]);
  }
  return out;
}

ForecastTable bootstrap_forecast_table(const TimeSeriesData& data, const std::vector<ModelSpec>& specs, int B,
                                       const EvalConfig& cfg, std::uint64_t seed,
                                       std::optional<double> block_length, int threads) {
  if (specs.empty()) throw Error(ErrorKind::InvalidArgument, "no model specs");
  if (B < 0) throw Error(ErrorKind::InvalidArgument, "bootstrap count must be >= 0");
  ForecastTable table;
  table.bootstrap = B;
  table.block_length = block_length.value_or(default_block_length(data.length()));
  table.seed = seed;
  table.config = cfg;

  // r_avg at the full-sample REVAR fit.
  std::optional<ParameterVectors> revar_params;
  for (const ModelSpec& s : specs) {
    if (s.model != ModelKind::REVAR) continue;
    try {
      const AutocovarianceSet acov = sample_autocovariances(build_lag_design(data, s.dims.p));
      revar_params = parameters_from_estimate(fit_model(s.model, acov, s.dims, cfg.envelope), acov.gamma_p);
    } catch (const Error&) {
    }
    break;
  }
  std::optional<MatrixXd> base;
  if (revar_params) base = avar(ModelKind::REVAR, *revar_params).beta_block;

  const int samples = std::max(B, 1);
  // results[b][s]
  std::vector<std::vector<std::optional<ForecastRun>>> results(samples,
                                                               std::vector<std::optional<ForecastRun>>(specs.size()));
  parallel_for(samples, threads, [&](int b) {
    TimeSeriesData series = data;
    if (B > 0) {
      const std::vector<Index> idx =
          stationary_bootstrap_indices(data.length(), table.block_length, derive_seed(seed, b));
      for (Index t = 0; t < data.length(); ++t) series.values.row(t) = data.values.row(idx[t]);
    }
    for (std::size_t s = 0; s < specs.size(); ++s) {
      try {
        results[b][s] = evaluate_rmsfe(series, specs[s], cfg);
      } catch (const Error&) {
      }
    }
  });

  for (std::size_t s = 0; s < specs.size(); ++s) {
    ForecastTableRow row;
    row.spec = specs[s];
    row.nop = nop_count(specs[s].model, specs[s].dims);
    row.r_avg = std::nan("");
    if (base && specs[s].model != ModelKind::REVAR) {
      try {
        row.r_avg = se_ratios(avar(specs[s].model, *revar_params).beta_block, *base).r_avg;
      } catch (const Error&) {
      }
    }
    row.rmsfe = VectorXd::Zero(cfg.horizons);
    for (int b = 0; b < samples; ++b) {
      const std::optional<ForecastRun>& run = results[b][s];
      if (!run) {
        ++row.fit_failures;
        continue;
      }
      row.fit_failures += run->fit_failures;
      row.convergence_warnings += run->convergence_warnings;
      if (!run->rmsfe.allFinite()) continue;
      row.rmsfe += run->rmsfe;
      ++row.samples;
    }
    if (row.samples > 0) {
      row.rmsfe /= static_cast<double>(row.samples);
    } else {
      row.rmsfe.setConstant(std::nan(""));
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace revar

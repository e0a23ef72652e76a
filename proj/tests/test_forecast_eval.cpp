#include <gtest/gtest.h>

#include "revar/forecast_eval.hpp"
#include "support.hpp"

using namespace revar;
using revar::testing::random_matrix;

namespace {

VarEstimate manual_estimate(const MatrixXd& beta, const VectorXd& alpha) {
  VarEstimate e;
  e.beta = beta;
  e.alpha = alpha;
  return e;
}

}  // namespace

TEST(Forecast, OneStepScalar) {
  const VarEstimate e = manual_estimate(MatrixXd::Constant(1, 1, 0.5), VectorXd::Constant(1, 2.0));
  MatrixXd hist(3, 1);
  hist << 1, 2, 4;
  EXPECT_DOUBLE_EQ(forecast_h(e, hist, 1)(0), 2.0 + 0.5 * 4.0);
  EXPECT_DOUBLE_EQ(forecast_h(e, hist, 2)(0), 2.0 + 0.5 * (2.0 + 0.5 * 4.0));
  EXPECT_THROW(forecast_h(e, hist, 0), Error);
}

TEST(Forecast, ZeroBetaGivesIntercept) {
  VectorXd a(2);
  a << 1.5, -0.5;
  const VarEstimate e = manual_estimate(MatrixXd::Zero(2, 4), a);
  std::mt19937_64 rng(1);
  const MatrixXd path = forecast_path(e, random_matrix(5, 2, rng), 4);
  for (int h = 0; h < 4; ++h) EXPECT_EQ((path.row(h).transpose() - a).norm(), 0.0);
}

TEST(Forecast, CompanionOracle) {
  std::mt19937_64 rng(2);
  const MatrixXd beta = 0.3 * random_matrix(3, 6, rng);
  const VectorXd alpha = random_matrix(3, 1, rng);
  const MatrixXd hist = random_matrix(4, 3, rng);
  const VarEstimate e = manual_estimate(beta, alpha);
  // State s = (y_t', y_{t-1}')', s_{t+1} = c + F s_t.
  const MatrixXd f = companion_matrix(beta);
  VectorXd c = VectorXd::Zero(6), s(6);
  c.head(3) = alpha;
  s << hist.row(3).transpose(), hist.row(2).transpose();
  const VectorXd two = c + f * c + f * f * s;
  EXPECT_LT((forecast_h(e, hist, 2) - two.head(3)).norm(), 1e-10);
}

TEST(Evaluate, PerfectForesightHasZeroError) {
  TimeSeriesData d;
  d.values.resize(120, 2);
  d.values.row(0) << 1.0, 0.0;
  MatrixXd rot(2, 2);
  rot << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  rot *= 0.995;
  for (Index t = 1; t < 120; ++t) d.values.row(t) = (rot * d.values.row(t - 1).transpose()).transpose();
  const ForecastRun run = evaluate_rmsfe(d, {ModelKind::OLSVAR, {0, 0, 1, 2}}, {});
  EXPECT_LT(run.rmsfe.maxCoeff(), 1e-8);
  EXPECT_EQ(run.forecasts[0].rows(), 120 - 90 - 4 + 1);
}

TEST(Evaluate, HandRolledTwoOriginScalar) {
  TimeSeriesData d;
  d.values.resize(8, 1);
  d.values << 0.3, -0.1, 0.8, 0.2, -0.5, 0.4, 0.9, -0.2;
  EvalConfig cfg;
  cfg.eval_start = 0.75;  // T0 = 6, H = 1: targets 7 and 8 from origins 6 and 7
  cfg.horizons = 1;
  const ForecastRun run = evaluate_rmsfe(d, {ModelKind::OLSVAR, {0, 0, 1, 1}}, cfg);
  ASSERT_EQ(run.t0, 6);
  double sse = 0.0;
  for (int o : {6, 7}) {
    // Scalar regression of y_t on (1, y_{t-1}) over t = 2..o.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = o - 1;
    for (int t = 1; t < o; ++t) {
      const double x = d.values(t - 1, 0), y = d.values(t, 0);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double b = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    const double a = sy / n - b * sx / n;
    const double err = a + b * d.values(o - 1, 0) - d.values(o, 0);
    sse += err * err;
  }
  EXPECT_NEAR(run.rmsfe(0), std::sqrt(sse / 2.0), 1e-12);
}

TEST(Evaluate, NoLookAheadAndBatchAccumulation) {
  const auto s = revar::testing::simulate_sample({1, 2, 1, 3}, 200, 3);
  TimeSeriesData d = s.series.data;
  EvalConfig cfg;
  cfg.horizons = 2;
  const ModelSpec spec{ModelKind::REVAR, {1, 2, 1, 3}};
  const ForecastRun a = evaluate_rmsfe(d, spec, cfg);
  d.values.row(199) *= 10.0;  // only the last target changes
  const ForecastRun b = evaluate_rmsfe(d, spec, cfg);
  for (int h = 0; h < 2; ++h) EXPECT_EQ((a.forecasts[h] - b.forecasts[h]).norm(), 0.0);
  for (int h = 0; h < 2; ++h) {
    const double batch = std::sqrt(a.sq_errors[h].mean());
    EXPECT_NEAR(a.rmsfe(h), batch, 1e-12);
    EXPECT_NEAR(a.rmsfe_per_variable(h, 1), std::sqrt(a.sq_errors[h].col(1).mean()), 1e-12);
  }
  EvalConfig reuse = cfg;
  reuse.policy = RefitPolicy::Reuse;
  EXPECT_EQ(evaluate_rmsfe(d, spec, reuse).policy, RefitPolicy::Reuse);
}

TEST(Bootstrap, LimitsOfBlockLength) {
  const std::vector<Index> shift = stationary_bootstrap_indices(50, 1e12, 4);
  for (Index t = 1; t < 50; ++t) EXPECT_EQ(shift[t], (shift[t - 1] + 1) % 50);
  const std::vector<Index> iid = stationary_bootstrap_indices(50, 1.0, 5);
  int runs = 0;
  for (Index t = 1; t < 50; ++t) runs += iid[t] == (iid[t - 1] + 1) % 50;
  EXPECT_LT(runs, 6);
  EXPECT_THROW(stationary_bootstrap_indices(50, 0.5, 5), Error);
}

TEST(Bootstrap, MeanBlockLength) {
  const Index T = 1000000;
  const std::vector<Index> idx = stationary_bootstrap_indices(T, 10.0, 6);
  long blocks = 1;
  for (Index t = 1; t < T; ++t) blocks += idx[t] != (idx[t - 1] + 1) % T;
  EXPECT_NEAR(static_cast<double>(T) / blocks, 10.0, 0.2);
}

TEST(Bootstrap, DeterministicAndPreservesMeans) {
  std::mt19937_64 rng(7);
  TimeSeriesData d;
  d.values = random_matrix(300, 2, rng);
  const auto a = stationary_bootstrap(d, 5.0, 200, 9), b = stationary_bootstrap(d, 5.0, 200, 9);
  VectorXd avg = VectorXd::Zero(2);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ((a[i].values - b[i].values).norm(), 0.0);
    avg += a[i].values.colwise().mean().transpose();
  }
  avg /= 200.0;
  EXPECT_LT((avg - d.values.colwise().mean().transpose()).cwiseAbs().maxCoeff(), 0.02);
  EXPECT_DOUBLE_EQ(default_block_length(700), 9.0);
}

TEST(Table, ZeroBootstrapEqualsPlainEvaluation) {
  const auto s = revar::testing::simulate_sample({1, 2, 1, 3}, 160, 8);
  const Dims dims{1, 2, 1, 3};
  const std::vector<ModelSpec> specs = {
      {ModelKind::OLSVAR, dims}, {ModelKind::EVAR, dims}, {ModelKind::RRVAR, dims}, {ModelKind::REVAR, dims}};
  EvalConfig cfg;
  const ForecastTable t = bootstrap_forecast_table(s.series.data, specs, 0, cfg, 1);
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(t.rows[i].rmsfe.size(), 4);
    EXPECT_LT((t.rows[i].rmsfe - evaluate_rmsfe(s.series.data, specs[i], cfg).rmsfe).norm(), 1e-14);
  }
  EXPECT_EQ(t.rows[0].nop, 3 * 3 + 6);
  EXPECT_TRUE(std::isnan(t.rows[3].r_avg));
  EXPECT_GE(t.rows[0].r_avg, 1.0);
  const ForecastTable b1 = bootstrap_forecast_table(s.series.data, specs, 2, cfg, 1, std::nullopt, 1);
  const ForecastTable b2 = bootstrap_forecast_table(s.series.data, specs, 2, cfg, 1, std::nullopt, 2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ((b1.rows[i].rmsfe - b2.rows[i].rmsfe).norm(), 0.0);
}

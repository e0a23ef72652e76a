#include "revar/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "revar/stats.hpp"

namespace revar {

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::OLSVAR: return "OLSVAR";
    case ModelKind::RRVAR: return "RRVAR";
    case ModelKind::EVAR: return "EVAR";
    case ModelKind::REVAR: return "REVAR";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  std::string k;
  for (char c : s) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "olsvar" || k == "ols" || k == "var") return ModelKind::OLSVAR;
  if (k == "rrvar" || k == "rr") return ModelKind::RRVAR;
  if (k == "evar") return ModelKind::EVAR;
  if (k == "revar") return ModelKind::REVAR;
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + s + "'");
}

std::string to_string(EnvelopeAlgorithm a) {
  switch (a) {
    case EnvelopeAlgorithm::FG: return "fg";
    case EnvelopeAlgorithm::OneD: return "1d";
    case EnvelopeAlgorithm::Auto: return "auto";
  }
  return "?";
}

EnvelopeAlgorithm parse_algorithm(const std::string& s) {
  if (s == "fg" || s == "FG") return EnvelopeAlgorithm::FG;
  if (s == "1d" || s == "1D") return EnvelopeAlgorithm::OneD;
  if (s == "auto") return EnvelopeAlgorithm::Auto;
  throw Error(ErrorKind::InvalidArgument, "unknown optimizer '" + s + "'");
}

long nop_count(ModelKind model, const Dims& dims) {
  const long d = dims.d, u = dims.u, p = dims.p, q = dims.q;
  if (p < 1 || q < 1) throw Error(ErrorKind::BadDims, "need p >= 1 and q >= 1");
  const long cov = q * (q + 1) / 2;
  switch (model) {
    case ModelKind::OLSVAR:
      return q * q * p + cov;
    case ModelKind::RRVAR:
      if (d < 0 || d > q) throw Error(ErrorKind::BadDims, "RRVAR needs 0 <= d <= q");
      return d * (q * (p + 1) - d) + cov;
    case ModelKind::EVAR:
      if (u < 0 || u > q) throw Error(ErrorKind::BadDims, "EVAR needs 0 <= u <= q");
      return u * q * p + cov;
    case ModelKind::REVAR:
      if (d < 0 || d > u || u > q || (d == 0) != (u == 0)) {
        throw Error(ErrorKind::BadDims, "REVAR needs 1 <= d <= u <= q");
      }
      return d * (q * p + u - d) + cov;
  }
  return 0;
}

namespace {

Dims dims_of(const AutocovarianceSet& acov, int d, int u) {
  Dims dims;
  dims.d = d;
  dims.u = u;
  dims.p = acov.p;
  dims.q = static_cast<int>(acov.dim());
  return dims;
}

void finish(VarEstimate& est, const AutocovarianceSet& acov) {
  est.sample_size = acov.sample_size;
  est.alpha = acov.target_mean - est.beta * acov.lagged_mean;
  try {
    est.loglik = conditional_loglik(est, acov);
  } catch (const Error&) {
    // Exact fit: Sigma-hat is singular and the likelihood is unbounded.
    est.loglik = std::numeric_limits<double>::infinity();
  }
  est.nop = nop_count(est.model, est.dims);
}

MatrixXd top_eigenvectors(const MatrixXd& m, Index k) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(SymMatd(m).matrix());
  return es.eigenvectors().rightCols(k).rowwise().reverse();
}

MatrixXd random_basis(Index q, Index u, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd m(q, u);
  for (Index j = 0; j < u; ++j) {
    for (Index i = 0; i < q; ++i) m(i, j) = normal(rng);
  }
  return orthonormalize(m);
}

GrassmannOptions<double> grassmann_options(const EnvelopeOptions& opts) {
  GrassmannOptions<double> g;
  g.gtol = opts.gtol;
  g.ftol = opts.ftol;
  g.max_iter = opts.max_iter;
  return g;
}

struct ObjectiveAdapter {
  const EnvelopeObjective& ctx;
  double value(const MatrixXd& d) const { return ctx.value(d); }
  MatrixXd gradient(const MatrixXd& d) const { return ctx.gradient(d); }
};

// Objective of the k-th one-direction subproblem: w -> F([fixed, basis w]).
struct DirectionAdapter {
  const EnvelopeObjective& ctx;
  const MatrixXd& fixed;
  const MatrixXd& basis;

  MatrixXd assemble(const MatrixXd& w) const {
    MatrixXd d(fixed.rows(), fixed.cols() + 1);
    d << fixed, basis * w;
    return d;
  }
  double value(const MatrixXd& w) const { return ctx.value(assemble(w)); }
  MatrixXd gradient(const MatrixXd& w) const {
    const MatrixXd g = ctx.gradient(assemble(w));
    return basis.transpose() * g.rightCols(1);
  }
};

double value_or_inf(const EnvelopeObjective& ctx, const MatrixXd& d) {
  try {
    return ctx.value(d);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

EnvelopeFit full_space_fit(const EnvelopeObjective& ctx) {
  EnvelopeFit fit;
  fit.phi = MatrixXd::Identity(ctx.dim(), ctx.dim());
  fit.objective = ctx.value(fit.phi);
  fit.start = "identity";
  fit.trace = {fit.objective};
  return fit;
}

EnvelopeFit best_of_starts(const EnvelopeObjective& ctx,
                           const std::vector<std::pair<std::string, MatrixXd>>& starts,
                           const EnvelopeOptions& opts) {
  ObjectiveAdapter f{ctx};
  const GrassmannOptions<double> gopts = grassmann_options(opts);
  EnvelopeFit best;
  bool found = false;
  for (const auto& [label, start] : starts) {
    if (!std::isfinite(value_or_inf(ctx, orthonormalize(start)))) continue;
    GrassmannResult<double> r = grassmann_minimize<double>(f, start, gopts);
    // Strict improvement keeps the earliest start on ties.
    if (!found || r.value < best.objective) {
      best.phi = r.point;
      best.objective = r.value;
      best.iterations = r.iterations;
      best.converged = r.converged();
      best.start = label;
      best.trace = std::move(r.trace);
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::DegenerateCandidate, "every envelope starting point is degenerate");
  return best;
}

void check_envelope_dims(const EnvelopeObjective& ctx, int u) {
  if (u < ctx.rank() || u > ctx.dim()) throw Error(ErrorKind::BadDims, "need d <= u <= q");
}

}  // namespace

EnvelopeFit optimize_envelope_1d(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts) {
  check_envelope_dims(ctx, u);
  const Index q = ctx.dim();
  if (u == q) return full_space_fit(ctx);
  const GrassmannOptions<double> gopts = grassmann_options(opts);

  EnvelopeFit fit;
  fit.start = "1d";
  MatrixXd acc(q, 0);
  for (int k = 0; k < u; ++k) {
    const MatrixXd basis = k == 0 ? MatrixXd(MatrixXd::Identity(q, q)) : orthonormal_complement(acc);
    const Index m = basis.cols();
    DirectionAdapter f{ctx, acc, basis};
    MatrixXd w;
    double value = 0.0;
    if (m == 1) {
      w = MatrixXd::Ones(1, 1);
      value = f.value(w);
    } else {
      // Seeds: every eigenvector of the compressed moment matrices; the two
      // best are optimized.
      std::vector<std::pair<double, VectorXd>> seeds;
      for (const MatrixXd* mm : {&ctx.gamma0(), &ctx.resid_cov(), &ctx.fitted_cov()}) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(
            SymMatd(MatrixXd(basis.transpose() * *mm * basis)).matrix());
        for (Index j = m - 1; j >= 0; --j) {
          const VectorXd cand = es.eigenvectors().col(j);
          double v;
          try {
            v = f.value(cand);
          } catch (const Error&) {
            continue;
          }
          seeds.emplace_back(v, cand);
        }
      }
      if (seeds.empty()) throw Error(ErrorKind::DegenerateCandidate, "no usable 1D seed");
      std::stable_sort(seeds.begin(), seeds.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      bool have = false;
      for (std::size_t s = 0; s < std::min<std::size_t>(2, seeds.size()); ++s) {
        GrassmannResult<double> r = grassmann_minimize<double>(f, MatrixXd(seeds[s].second), gopts);
        fit.iterations += r.iterations;
        if (!have || r.value < value) {
          w = r.point;
          value = r.value;
          fit.converged = fit.converged && r.converged();
          have = true;
        }
      }
    }
    MatrixXd next(q, k + 1);
    next << acc, basis * w;
    acc = orthonormalize(next);
    fit.trace.push_back(value);
  }
  fit.phi = acc;
  fit.objective = ctx.value(acc);
  return fit;
}

EnvelopeFit optimize_envelope_fg(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts) {
  check_envelope_dims(ctx, u);
  const Index q = ctx.dim();
  if (u == q) return full_space_fit(ctx);

  std::vector<std::pair<std::string, MatrixXd>> starts;
  for (std::size_t i = 0; i < opts.warm_starts.size(); ++i) {
    if (opts.warm_starts[i].rows() != q || opts.warm_starts[i].cols() != u) {
      throw Error(ErrorKind::DimensionMismatch, "warm start must be q x u");
    }
    starts.emplace_back("warm" + std::to_string(i), opts.warm_starts[i]);
  }
  const int n = std::max(opts.restarts, 1);
  if (n > 0) starts.emplace_back("eig_gamma0", top_eigenvectors(ctx.gamma0(), u));
  if (n > 1) starts.emplace_back("eig_resid", top_eigenvectors(ctx.resid_cov(), u));
  if (n > 2) starts.emplace_back("eig_fitted", top_eigenvectors(ctx.fitted_cov(), u));
  if (n > 3) starts.emplace_back("1d", optimize_envelope_1d(ctx, u, opts).phi);
  for (int r = 4; r < n; ++r) {
    starts.emplace_back("random" + std::to_string(r - 4),
                        random_basis(q, u, derive_seed(opts.seed, 0x67726173ULL, u, r)));
  }
  return best_of_starts(ctx, starts, opts);
}

EnvelopeFit optimize_envelope(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts) {
  check_envelope_dims(ctx, u);
  if (u == ctx.dim()) return full_space_fit(ctx);
  switch (opts.algorithm) {
    case EnvelopeAlgorithm::FG:
      return optimize_envelope_fg(ctx, u, opts);
    case EnvelopeAlgorithm::OneD:
      return optimize_envelope_1d(ctx, u, opts);
    case EnvelopeAlgorithm::Auto:
      break;
  }
  if (ctx.dim() <= opts.fg_max_q) return optimize_envelope_fg(ctx, u, opts);
  EnvelopeFit one = optimize_envelope_1d(ctx, u, opts);
  if (!opts.polish && opts.warm_starts.empty()) return one;
  std::vector<std::pair<std::string, MatrixXd>> starts;
  starts.emplace_back("1d", one.phi);
  for (std::size_t i = 0; i < opts.warm_starts.size(); ++i) {
    starts.emplace_back("warm" + std::to_string(i), opts.warm_starts[i]);
  }
  EnvelopeFit polished = best_of_starts(ctx, starts, opts);
  polished.iterations += one.iterations;
  return polished.objective <= one.objective ? polished : one;
}

VarEstimate fit_olsvar(const AutocovarianceSet& acov) {
  const CanonicalDecomposition cc = canonical_correlations(acov);
  const MatrixXd g0_sqrt = sym_power(SymMatd(acov.gamma0), SymPower::Sqrt);
  const MatrixXd gp_isqrt = sym_power(SymMatd(acov.gamma_p), SymPower::InvSqrt);
  const Index q = acov.dim();
  VarEstimate est;
  est.model = ModelKind::OLSVAR;
  est.dims = dims_of(acov, static_cast<int>(q), static_cast<int>(q));
  est.beta = g0_sqrt * cc.correlation * gp_isqrt;
  const MatrixXd inner = MatrixXd::Identity(q, q) - cc.correlation * cc.correlation.transpose();
  est.sigma = SymMatd(MatrixXd(g0_sqrt * inner * g0_sqrt)).matrix();
  finish(est, acov);
  return est;
}

VarEstimate fit_rrvar(const AutocovarianceSet& acov, int d) {
  const Index q = acov.dim();
  if (d < 1 || d > q) throw Error(ErrorKind::BadRank, "RRVAR rank must satisfy 1 <= d <= q");
  const CanonicalDecomposition cc = canonical_correlations(acov, d);
  const MatrixXd g0_sqrt = sym_power(SymMatd(acov.gamma0), SymPower::Sqrt);
  const MatrixXd gp_isqrt = sym_power(SymMatd(acov.gamma_p), SymPower::InvSqrt);
  VarEstimate est;
  est.model = ModelKind::RRVAR;
  est.dims = dims_of(acov, d, static_cast<int>(q));
  est.beta = g0_sqrt * cc.truncated * gp_isqrt;
  est.sigma = SymMatd(MatrixXd(acov.gamma0 - est.beta * acov.gamma_star)).matrix();
  est.a = g0_sqrt * cc.left.leftCols(d) * cc.singular_values.head(d).asDiagonal();
  est.b = cc.right.leftCols(d).transpose() * gp_isqrt;
  finish(est, acov);
  return est;
}

VarEstimate fit_known_phi(const AutocovarianceSet& acov, const MatrixXd& phi, int d) {
  const Index q = acov.dim();
  const Index u = phi.cols();
  if (phi.rows() != q) throw Error(ErrorKind::DimensionMismatch, "Phi must have q rows");
  if (u < 1 || ((phi.transpose() * phi) - MatrixXd::Identity(u, u)).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::NotSemiorthogonal, "Phi'Phi differs from the identity");
  }
  if (d < 1 || d > u) throw Error(ErrorKind::BadRank, "need 1 <= d <= u");

  const MatrixXd gp_isqrt = sym_power(SymMatd(acov.gamma_p), SymPower::InvSqrt);
  const SymMatd g_phi(MatrixXd(phi.transpose() * acov.gamma0 * phi));
  const MatrixXd g_sqrt = sym_power(g_phi, SymPower::Sqrt);
  const MatrixXd g_isqrt = sym_power(g_phi, SymPower::InvSqrt);
  const MatrixXd c_phi = g_isqrt * phi.transpose() * acov.gamma_star.transpose() * gp_isqrt;
  Eigen::JacobiSVD<MatrixXd> svd(c_phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const MatrixXd ud = svd.matrixU().leftCols(d);
  const VectorXd sd = svd.singularValues().head(d);
  const MatrixXd vd = svd.matrixV().leftCols(d);
  const MatrixXd cd = ud * sd.asDiagonal() * vd.transpose();

  VarEstimate est;
  est.model = ModelKind::REVAR;
  est.dims = dims_of(acov, d, static_cast<int>(u));
  est.phi = phi;
  est.phi0 = orthonormal_complement(phi);
  est.xi = g_sqrt * cd * gp_isqrt;
  est.beta = phi * est.xi;
  est.nu = g_sqrt * ud * sd.asDiagonal();
  est.b = vd.transpose() * gp_isqrt;
  est.a = phi * est.nu;
  est.omega = SymMatd(MatrixXd(g_sqrt * (MatrixXd::Identity(u, u) - cd * cd.transpose()) * g_sqrt)).matrix();
  est.omega0 = SymMatd(MatrixXd(est.phi0.transpose() * acov.gamma0 * est.phi0)).matrix();
  est.sigma = SymMatd(MatrixXd(phi * est.omega * phi.transpose() +
                               est.phi0 * est.omega0 * est.phi0.transpose())).matrix();
  finish(est, acov);
  return est;
}

VarEstimate fit_revar(const AutocovarianceSet& acov, int d, int u, const EnvelopeOptions& opts) {
  const Index q = acov.dim();
  if (d < 1 || d > u || u > q) throw Error(ErrorKind::BadDims, "REVAR needs 1 <= d <= u <= q");
  const EnvelopeObjective ctx(acov, d);
  EnvelopeFit env = optimize_envelope(ctx, u, opts);
  VarEstimate est = fit_known_phi(acov, env.phi, d);
  est.envelope = std::move(env);
  return est;
}

VarEstimate fit_evar(const AutocovarianceSet& acov, int u, const EnvelopeOptions& opts) {
  VarEstimate est = fit_revar(acov, u, u, opts);
  est.model = ModelKind::EVAR;
  est.nop = nop_count(est.model, est.dims);
  return est;
}

VarEstimate fit_zero_model(const AutocovarianceSet& acov) {
  const Index q = acov.dim();
  VarEstimate est;
  est.model = ModelKind::REVAR;
  est.dims = dims_of(acov, 0, 0);
  est.beta = MatrixXd::Zero(q, acov.gamma_p.rows());
  est.sigma = acov.gamma0;
  finish(est, acov);
  return est;
}

VarEstimate fit_model(ModelKind model, const AutocovarianceSet& acov, const Dims& dims,
                      const EnvelopeOptions& opts) {
  switch (model) {
    case ModelKind::OLSVAR: return fit_olsvar(acov);
    case ModelKind::RRVAR: return fit_rrvar(acov, dims.d);
    case ModelKind::EVAR: return fit_evar(acov, dims.u, opts);
    case ModelKind::REVAR: return fit_revar(acov, dims.d, dims.u, opts);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model");
}

double conditional_loglik(const VarEstimate& est, const AutocovarianceSet& acov) {
  const double n = static_cast<double>(acov.sample_size);
  const Index q = acov.dim();
  // Residual second moment about the fitted intercept: with alpha = ybar - beta xbar
  // the residual mean is zero and only centered moments remain.
  const VectorXd mean_resid = acov.target_mean - est.alpha - est.beta * acov.lagged_mean;
  const MatrixXd bg = est.beta * acov.gamma_star;
  MatrixXd s = acov.gamma0 - bg - bg.transpose() + est.beta * acov.gamma_p * est.beta.transpose() +
               mean_resid * mean_resid.transpose();
  Eigen::LLT<MatrixXd> llt(est.sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Singular, "Sigma is not positive definite");
  const double logdet = logdet_spd(est.sigma);
  const double trace = llt.solve(s).trace();
  return -0.5 * n * (logdet + trace) - 0.5 * n * static_cast<double>(q) * std::log(2.0 * std::numbers::pi);
}

MatrixXd residuals(const VarEstimate& est, const LagDesign& design) {
  MatrixXd x = design.lagged.rowwise() + design.lagged_mean.transpose();
  MatrixXd e = design.targets - x * est.beta.transpose();
  e.rowwise() -= est.alpha.transpose();
  return e;
}

double conditional_loglik(const VarEstimate& est, const LagDesign& design) {
  const MatrixXd e = residuals(est, design);
  const double n = static_cast<double>(design.size());
  const Index q = design.dim();
  Eigen::LLT<MatrixXd> llt(est.sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Singular, "Sigma is not positive definite");
  const double quad = llt.solve(MatrixXd(e.transpose())).cwiseProduct(e.transpose()).sum();
  return -0.5 * n * logdet_spd(est.sigma) - 0.5 * quad -
         0.5 * n * static_cast<double>(q) * std::log(2.0 * std::numbers::pi);
}

}  // namespace revar

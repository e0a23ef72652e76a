#include "revar/selection.hpp"

#include <cmath>

#include "revar/stats.hpp"

namespace revar {

std::string to_string(Criterion c) { return c == Criterion::AIC ? "aic" : "bic"; }

Criterion parse_criterion(const std::string& s) {
  if (s == "aic" || s == "AIC") return Criterion::AIC;
  if (s == "bic" || s == "BIC") return Criterion::BIC;
  throw Error(ErrorKind::InvalidArgument, "unknown criterion '" + s + "'");
}

std::string to_string(DimsMode m) { return m == DimsMode::Grid ? "grid" : "sequential"; }

DimsMode parse_dims_mode(const std::string& s) {
  if (s == "grid") return DimsMode::Grid;
  if (s == "sequential") return DimsMode::Sequential;
  throw Error(ErrorKind::InvalidArgument, "unknown selection mode '" + s + "'");
}

double information_criterion(Criterion criterion, double loglik, long nop, Index T) {
  const double c = criterion == Criterion::AIC ? 2.0 : std::log(static_cast<double>(T));
  return c * static_cast<double>(nop) - 2.0 * loglik;
}

SelectionReport select_lag(const TimeSeriesData& data, int p_max, Criterion criterion) {
  if (p_max < 1) throw Error(ErrorKind::InvalidArgument, "p_max must be >= 1");
  const Index q = data.dim();
  const Index n = data.length() - p_max;
  if (n <= q * p_max + 1) throw Error(ErrorKind::TooShort, "series too short for p_max");
  const double tn = static_cast<double>(n);
  const double c = criterion == Criterion::AIC ? 2.0 / tn : std::log(tn) / tn;

  SelectionReport rep;
  rep.criterion = criterion;
  rep.sample_size = n;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= p_max; ++p) {
    MatrixXd sigma;
    if (p == 0) {
      const MatrixXd y = data.values.bottomRows(n);
      const MatrixXd yc = y.rowwise() - y.colwise().mean();
      sigma = yc.transpose() * yc / tn;
    } else {
      sigma = sample_autocovariances(build_lag_design_aligned(data.values, p, p_max)).resid_cov;
    }
    LagCandidate cand;
    cand.p = p;
    cand.logdet = logdet_spd(SymMatd(sigma).matrix());
    cand.nop = q * q * p + q * (q + 1) / 2;
    cand.value = cand.logdet + c * static_cast<double>(cand.nop);
    if (cand.value < best) {
      best = cand.value;
      rep.p_hat = p;
    }
    rep.lags.push_back(cand);
  }
  return rep;
}

RankTestResult rank_test(const AutocovarianceSet& acov, int d0, Index T) {
  const Index q = acov.dim();
  const Index qp = acov.gamma_p.rows();
  if (d0 < 0 || d0 >= q) throw Error(ErrorKind::BadRank, "rank test needs 0 <= d0 <= q-1");
  if (T <= qp + 1) throw Error(ErrorKind::TooShort, "rank test needs T > qp + 1");
  const MatrixXd beta = acov.gamma_star.transpose() * acov.gamma_p.llt().solve(MatrixXd::Identity(qp, qp));
  const double scale = std::sqrt(static_cast<double>(T - qp - 1) / static_cast<double>(T));
  const MatrixXd std_beta = scale * sym_power(SymMatd(acov.gamma_p), SymPower::Sqrt) * beta.transpose() *
                            sym_power(SymMatd(acov.resid_cov), SymPower::InvSqrt);
  Eigen::JacobiSVD<MatrixXd> svd(std_beta);
  const VectorXd& s = svd.singularValues();
  RankTestResult r;
  r.d0 = d0;
  double sum = 0.0;
  for (Index j = d0; j < s.size(); ++j) sum += s(j) * s(j);
  r.statistic = static_cast<double>(T) * sum;
  r.df = (qp - d0) * (q - d0);
  r.p_value = chi_squared_upper_tail(r.statistic, static_cast<double>(r.df));
  return r;
}

SelectionReport select_rank(const AutocovarianceSet& acov, Index T, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be in (0,1)");
  const int q = static_cast<int>(acov.dim());
  SelectionReport rep;
  rep.mode = DimsMode::Sequential;
  rep.alpha = alpha;
  rep.sample_size = T;
  rep.d_hat = q;
  for (int d0 = 0; d0 < q; ++d0) {
    rep.rank_tests.push_back(rank_test(acov, d0, T));
    if (rep.rank_tests.back().p_value > alpha) {
      rep.d_hat = d0;
      break;
    }
  }
  return rep;
}

namespace {

// REVAR(d, u) for u = d..q, each warm-started from the previous basis
// extended by the leading eigenvector of its Omega0.
std::vector<DimsCandidate> fit_u_chain(const AutocovarianceSet& acov, int d, const EnvelopeOptions& opts) {
  const int q = static_cast<int>(acov.dim());
  std::vector<DimsCandidate> out;
  MatrixXd prev_phi, prev_phi0, prev_omega0;
  for (int u = d; u <= q; ++u) {
    DimsCandidate cand;
    cand.d = d;
    cand.u = u;
    try {
      EnvelopeOptions o = opts;
      if (prev_phi.size() > 0 && u < q) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(prev_omega0);
        MatrixXd start(q, u);
        start << prev_phi, prev_phi0 * es.eigenvectors().rightCols(1);
        o.warm_starts.push_back(start);
      }
      VarEstimate est = fit_revar(acov, d, u, o);
      cand.loglik = est.loglik;
      cand.nop = est.nop;
      cand.converged = est.envelope.converged;
      prev_phi = est.phi;
      prev_phi0 = est.phi0;
      prev_omega0 = est.omega0;
    } catch (const Error& e) {
      cand.failed = true;
      cand.error = e.what();
      prev_phi.resize(0, 0);
    }
    out.push_back(cand);
  }
  return out;
}

void pick_min(SelectionReport& rep) {
  double best = std::numeric_limits<double>::infinity();
  for (const DimsCandidate& c : rep.grid) {
    if (c.failed || !std::isfinite(c.value)) continue;
    if (c.value < best) {
      best = c.value;
      rep.d_hat = c.d;
      rep.u_hat = c.u;
    }
  }
}

}  // namespace

SelectionReport select_envelope_dim(const AutocovarianceSet& acov, Index T, int d, Criterion criterion,
                                    const EnvelopeOptions& opts) {
  SelectionReport rep;
  rep.criterion = criterion;
  rep.mode = DimsMode::Grid;
  rep.sample_size = T;
  rep.grid = fit_u_chain(acov, d, opts);
  for (DimsCandidate& c : rep.grid) {
    if (!c.failed) c.value = information_criterion(criterion, c.loglik, c.nop, T);
  }
  pick_min(rep);
  return rep;
}

SelectionReport select_dims(const AutocovarianceSet& acov, Index T, DimsMode mode, Criterion criterion,
                            double alpha, const EnvelopeOptions& opts) {
  const int q = static_cast<int>(acov.dim());
  SelectionReport rep;
  rep.criterion = criterion;
  rep.mode = mode;
  rep.alpha = alpha;
  rep.sample_size = T;

  if (mode == DimsMode::Grid) {
    DimsCandidate zero;
    const VarEstimate z = fit_zero_model(acov);
    zero.loglik = z.loglik;
    zero.nop = z.nop;
    zero.value = information_criterion(criterion, zero.loglik, zero.nop, T);
    rep.grid.push_back(zero);
    for (int d = 1; d <= q; ++d) {
      for (DimsCandidate& c : fit_u_chain(acov, d, opts)) {
        if (!c.failed) c.value = information_criterion(criterion, c.loglik, c.nop, T);
        rep.grid.push_back(c);
      }
    }
    pick_min(rep);
    return rep;
  }

  const SelectionReport rank = select_rank(acov, T, alpha);
  rep.rank_tests = rank.rank_tests;
  rep.d_hat = rank.d_hat;
  if (rep.d_hat == 0) {
    rep.u_hat = 0;
    return rep;
  }
  const int d = rep.d_hat;
  rep.grid = fit_u_chain(acov, d, opts);
  const DimsCandidate& full = rep.grid.back();
  rep.u_hat = q;
  for (const DimsCandidate& c : rep.grid) {
    if (c.u == q) break;
    DimsTestResult t;
    t.u0 = c.u;
    t.df = static_cast<long>(q - c.u) * d;
    if (c.failed || full.failed) {
      t.statistic = std::numeric_limits<double>::quiet_NaN();
      t.p_value = 0.0;
    } else {
      t.statistic = std::max(0.0, 2.0 * (full.loglik - c.loglik));
      t.p_value = chi_squared_upper_tail(t.statistic, static_cast<double>(t.df));
    }
    rep.dims_tests.push_back(t);
    if (t.p_value > alpha) {
      rep.u_hat = c.u;
      break;
    }
  }
  return rep;
}

}  // namespace revar

#include "revar/dgp_sim.hpp"

#include <cmath>
#include <random>

#include "revar/stats.hpp"

namespace revar {

std::string to_string(ErrorFamily f) {
  switch (f) {
    case ErrorFamily::Normal: return "normal";
    case ErrorFamily::Uniform: return "uniform";
    case ErrorFamily::T6: return "t6";
    case ErrorFamily::Chi2_6: return "chi2_6";
    case ErrorFamily::Mds: return "mds";
    case ErrorFamily::SvMds: return "sv-mds";
  }
  return "?";
}

ErrorFamily parse_family(const std::string& s) {
  if (s == "normal") return ErrorFamily::Normal;
  if (s == "uniform") return ErrorFamily::Uniform;
  if (s == "t6") return ErrorFamily::T6;
  if (s == "chi2_6" || s == "chi2-6" || s == "chi2") return ErrorFamily::Chi2_6;
  if (s == "mds") return ErrorFamily::Mds;
  if (s == "sv-mds" || s == "sv_mds" || s == "svmds") return ErrorFamily::SvMds;
  throw Error(ErrorKind::BadFamily, "unknown error family '" + s + "'");
}

MatrixXd toeplitz_power(Index n, double rho, double scale) {
  MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = scale * std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  return m;
}

MatrixXd companion_matrix(const MatrixXd& beta) {
  const Index q = beta.rows();
  const Index qp = beta.cols();
  MatrixXd f = MatrixXd::Zero(qp, qp);
  f.topRows(q) = beta;
  if (qp > q) f.bottomLeftCorner(qp - q, qp - q).setIdentity();
  return f;
}

double spectral_radius(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixXd stationary_covariance(const MatrixXd& beta, const MatrixXd& sigma) {
  const Index q = beta.rows();
  const Index qp = beta.cols();
  MatrixXd a = companion_matrix(beta);
  MatrixXd x = MatrixXd::Zero(qp, qp);
  x.topLeftCorner(q, q) = sigma;
  for (int k = 0; k < 100; ++k) {
    const MatrixXd step = a * x * a.transpose();
    x += step;
    a = a * a;
    if (step.norm() <= 1e-15 * x.norm()) break;
  }
  return SymMatd(x).matrix();
}

TrueParameters generate_true_parameters(const Dims& dims, std::uint64_t seed) {
  const int d = dims.d, u = dims.u, p = dims.p, q = dims.q;
  if (d < 1 || d > u || u > q || p < 1) throw Error(ErrorKind::BadDims, "need 1 <= d <= u <= q and p >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  auto draw = [&](Index r, Index c, auto& dist) {
    MatrixXd m(r, c);
    for (Index j = 0; j < c; ++j) {
      for (Index i = 0; i < r; ++i) m(i, j) = dist(rng);
    }
    return m;
  };

  TrueParameters t;
  t.dims = dims;
  t.phi = orthonormalize(draw(q, u, unif));
  t.phi0 = orthonormal_complement(t.phi);
  t.omega = toeplitz_power(u, -0.9);
  t.omega0 = toeplitz_power(q - u, -0.5, 5.0);
  t.sigma = SymMatd(MatrixXd(t.phi * t.omega * t.phi.transpose() +
                             t.phi0 * t.omega0 * t.phi0.transpose())).matrix();
  for (int attempt = 1; attempt <= 1000; ++attempt) {
    t.b = draw(d, static_cast<Index>(q) * p, unif);
    t.nu = draw(u, d, normal);
    const double norm = (t.phi * t.nu * t.b).norm();
    if (!(norm > 0.0)) continue;
    t.nu /= norm;
    t.beta = t.phi * t.nu * t.b;
    t.spectral_radius = spectral_radius(companion_matrix(t.beta));
    t.attempts = attempt;
    if (t.spectral_radius < 0.999) return t;
  }
  throw Error(ErrorKind::CannotStabilize, "no stationary draw in 1000 attempts");
}

MatrixXd standardized_innovations(ErrorFamily family, Index T, Index q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MatrixXd ups(T, q);
  auto fill = [&](auto&& gen) {
    for (Index t = 0; t < T; ++t) {
      for (Index i = 0; i < q; ++i) ups(t, i) = gen();
    }
  };
  switch (family) {
    case ErrorFamily::Normal:
    case ErrorFamily::Mds: {
      // The MDS increments zeta_{t+1} - zeta_t are N(0, I) in standardized units.
      std::normal_distribution<double> n;
      fill([&] { return n(rng); });
      break;
    }
    case ErrorFamily::Uniform: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      fill([&] { return (u(rng) - 0.5) * std::sqrt(12.0); });
      break;
    }
    case ErrorFamily::T6: {
      std::student_t_distribution<double> st(6.0);
      fill([&] { return st(rng) / std::sqrt(1.5); });
      break;
    }
    case ErrorFamily::Chi2_6: {
      std::chi_squared_distribution<double> c(6.0);
      fill([&] { return (c(rng) - 6.0) / std::sqrt(12.0); });
      break;
    }
    case ErrorFamily::SvMds: {
      const MatrixXd l = toeplitz_power(q, 0.9).llt().matrixL();
      std::normal_distribution<double> n;
      VectorXd vol = VectorXd::Zero(q);
      for (int burn = 0; burn < 100; ++burn) {
        VectorXd z(q);
        for (Index i = 0; i < q; ++i) z(i) = n(rng);
        vol = 0.25 * vol + 0.05 * (l * z);
      }
      for (Index t = 0; t < T; ++t) {
        VectorXd z(q), e(q);
        for (Index i = 0; i < q; ++i) z(i) = n(rng);
        vol = 0.25 * vol + 0.05 * (l * z);
        for (Index i = 0; i < q; ++i) e(i) = n(rng);
        ups.row(t) = (e.array() * vol.array().exp()).matrix().transpose();
      }
      break;
    }
  }
  return ups;
}

MatrixXd generate_errors(ErrorFamily family, Index T, const MatrixXd& sigma, std::uint64_t seed) {
  const Index q = sigma.rows();
  const MatrixXd root = sym_power(SymMatd(sigma), SymPower::Sqrt);
  if (family == ErrorFamily::Mds) {
    // zeta_1 ~ N(0, Sigma), zeta_{t+1} | zeta_t ~ N(zeta_t, Sigma), e_t = zeta_{t+1} - zeta_t.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    auto draw = [&] {
      VectorXd z(q);
      for (Index i = 0; i < q; ++i) z(i) = n(rng);
      return VectorXd(root * z);
    };
    MatrixXd e(T, q);
    VectorXd zeta = draw();
    for (Index t = 0; t < T; ++t) {
      const VectorXd next = zeta + draw();
      e.row(t) = (next - zeta).transpose();
      zeta = next;
    }
    return e;
  }
  if (family == ErrorFamily::SvMds) {
    // e_t ~ N(0, Sigma) scaled elementwise by exp(sigma_t).
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    const MatrixXd l = toeplitz_power(q, 0.9).llt().matrixL();
    VectorXd vol = VectorXd::Zero(q);
    auto normals = [&] {
      VectorXd z(q);
      for (Index i = 0; i < q; ++i) z(i) = n(rng);
      return z;
    };
    for (int burn = 0; burn < 100; ++burn) vol = 0.25 * vol + 0.05 * (l * normals());
    MatrixXd e(T, q);
    for (Index t = 0; t < T; ++t) {
      vol = 0.25 * vol + 0.05 * (l * normals());
      const VectorXd et = root * normals();
      e.row(t) = (et.array() * vol.array().exp()).matrix().transpose();
    }
    return e;
  }
  return standardized_innovations(family, T, q, seed) * root;
}

SimulatedSeries simulate_var(const MatrixXd& beta, const MatrixXd& errors, std::uint64_t presample_seed) {
  const Index q = beta.rows();
  const Index p = beta.cols() / q;
  const Index T = errors.rows();
  std::mt19937_64 rng(presample_seed);
  std::normal_distribution<double> n;
  MatrixXd full(p + T, q);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) full(i, j) = n(rng);
  }
  VectorXd x(q * p);
  for (Index t = 0; t < T; ++t) {
    const Index row = p + t;
    for (Index k = 1; k <= p; ++k) x.segment((k - 1) * q, q) = full.row(row - k).transpose();
    full.row(row) = (beta * x).transpose() + errors.row(t);
  }
  SimulatedSeries s;
  s.presample = full.topRows(p);
  s.data.values = full.bottomRows(T);
  return s;
}

namespace {

constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kErrorStream = 1;
constexpr std::uint64_t kPresampleStream = 2;
constexpr std::uint64_t kOptimizerStream = 3;

constexpr ModelKind kModels[] = {ModelKind::OLSVAR, ModelKind::RRVAR, ModelKind::EVAR, ModelKind::REVAR};

void validate(const SimulationScenario& s) {
  const Dims& d = s.dims;
  if (d.d < 1 || d.d > d.u || d.u > d.q || d.p < 1) throw Error(ErrorKind::BadDims, "need 1 <= d <= u <= q");
  if (s.replications < 1) throw Error(ErrorKind::InvalidArgument, "replications must be >= 1");
  for (Index T : s.sample_sizes) {
    if (T <= static_cast<Index>(d.q) * d.p + 1) throw Error(ErrorKind::TooShort, "sample size must exceed qp + 1");
  }
}

struct RepOutcome {
  bool ok = false;
  std::string message;
  double error[4] = {0, 0, 0, 0};
  SeRatios ratios[4];
  bool warning = false;
};

SimulatedSeries draw_series(const SimulationScenario& sc, const TrueParameters& truth, Index T,
                            std::uint64_t ti, std::uint64_t rep) {
  const MatrixXd e = generate_errors(sc.family, T, truth.sigma, derive_seed(sc.seed, kErrorStream, ti, rep));
  return simulate_var(truth.beta, e, derive_seed(sc.seed, kPresampleStream, ti, rep));
}

RepOutcome one_replication(const SimulationScenario& sc, const TrueParameters& truth, Index T,
                           std::uint64_t ti, std::uint64_t rep) {
  RepOutcome out;
  try {
    const SimulatedSeries s = draw_series(sc, truth, T, ti, rep);
    const AutocovarianceSet acov =
        sample_autocovariances(build_lag_design(s.presample, s.data, sc.dims.p));
    EnvelopeOptions opts = sc.envelope;
    opts.seed = derive_seed(sc.seed, kOptimizerStream, ti, rep);
    const VarEstimate fits[4] = {fit_olsvar(acov), fit_rrvar(acov, sc.dims.d), fit_evar(acov, sc.dims.u, opts),
                                 fit_revar(acov, sc.dims.d, sc.dims.u, opts)};
    for (int m = 0; m < 4; ++m) out.error[m] = (fits[m].beta - truth.beta).norm();
    out.warning = !fits[2].envelope.converged || !fits[3].envelope.converged;
    if (sc.se_ratios) {
      // Every model's avar at the REVAR fit, so the ordering is comparable.
      const ParameterVectors params = parameters_from_estimate(fits[3], acov.gamma_p);
      const MatrixXd base = avar(ModelKind::REVAR, params).beta_block;
      for (int m = 0; m < 4; ++m) {
        out.ratios[m] = m == 3 ? SeRatios{1.0, 1.0, 1.0} : se_ratios(avar(kModels[m], params).beta_block, base);
      }
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.message = e.what();
  }
  return out;
}

}  // namespace

McReport run_monte_carlo(const SimulationScenario& scenario) {
  validate(scenario);
  McReport report;
  report.scenario = scenario;
  report.truth = generate_true_parameters(scenario.dims, derive_seed(scenario.seed, kTruthStream));
  const int reps = scenario.replications;
  const std::size_t nt = scenario.sample_sizes.size();
  report.errors.assign(nt, std::vector<std::vector<double>>(4, std::vector<double>(reps, std::nan(""))));

  for (std::size_t ti = 0; ti < nt; ++ti) {
    const Index T = scenario.sample_sizes[ti];
    std::vector<RepOutcome> outcomes(reps);
    parallel_for(reps, scenario.threads,
                 [&](int r) { outcomes[r] = one_replication(scenario, report.truth, T, ti, r); });
    for (int m = 0; m < 4; ++m) {
      McRow row;
      row.T = T;
      row.model = kModels[m];
      double sum = 0.0, sum_sq = 0.0, ravg = 0.0;
      row.r_min = std::numeric_limits<double>::infinity();
      row.r_max = -std::numeric_limits<double>::infinity();
      for (int r = 0; r < reps; ++r) {
        if (!outcomes[r].ok) continue;
        const double e = outcomes[r].error[m];
        report.errors[ti][m][r] = e;
        sum += e;
        sum_sq += e * e;
        ++row.n;
        row.r_min = std::min(row.r_min, outcomes[r].ratios[m].r_min);
        row.r_max = std::max(row.r_max, outcomes[r].ratios[m].r_max);
        ravg += outcomes[r].ratios[m].r_avg;
      }
      if (row.n > 0) {
        row.mean_error = sum / row.n;
        const double var = row.n > 1 ? (sum_sq - row.n * row.mean_error * row.mean_error) / (row.n - 1) : 0.0;
        row.se_mean = std::sqrt(std::max(0.0, var) / row.n);
        row.r_avg = ravg / row.n;
      } else {
        row.mean_error = row.se_mean = row.r_min = row.r_max = row.r_avg = std::nan("");
      }
      if (!scenario.se_ratios) row.r_min = row.r_max = row.r_avg = std::nan("");
      report.rows.push_back(row);
    }
    for (int r = 0; r < reps; ++r) {
      if (!outcomes[r].ok) {
        ++report.failures;
        report.failure_messages.push_back("T=" + std::to_string(T) + " rep=" + std::to_string(r) + ": " +
                                          outcomes[r].message);
      } else if (outcomes[r].warning) {
        ++report.convergence_warnings;
      }
    }
  }
  return report;
}

SelectionStudy run_selection_study(const SimulationScenario& scenario) {
  validate(scenario);
  SelectionStudy study;
  study.scenario = scenario;
  study.truth = generate_true_parameters(scenario.dims, derive_seed(scenario.seed, kTruthStream));
  const Dims& truth_dims = scenario.dims;
  const int reps = scenario.replications;
  for (std::size_t ti = 0; ti < scenario.sample_sizes.size(); ++ti) {
    const Index T = scenario.sample_sizes[ti];
    struct Pick {
      bool ok = false;
      int p = -1, d = -1, u = -1;
    };
    std::vector<Pick> picks(reps);
    parallel_for(reps, scenario.threads, [&](int r) {
      Pick pick;
      try {
        const SimulatedSeries s = draw_series(scenario, study.truth, T, ti, r);
        pick.p = select_lag(s.data, scenario.p_max, Criterion::BIC).p_hat;
        if (pick.p >= 1) {
          const AutocovarianceSet acov = sample_autocovariances(build_lag_design(s.presample, s.data, pick.p));
          pick.d = select_rank(acov, acov.sample_size, scenario.alpha).d_hat;
          if (pick.d >= 1) {
            EnvelopeOptions opts = scenario.envelope;
            opts.seed = derive_seed(scenario.seed, kOptimizerStream, ti, r);
            pick.u = select_envelope_dim(acov, acov.sample_size, pick.d, Criterion::BIC, opts).u_hat;
          } else {
            pick.u = 0;
          }
        }
        pick.ok = true;
      } catch (const std::exception&) {
        pick.ok = false;
      }
      picks[r] = pick;
    });
    SelectionStudyRow row;
    row.T = T;
    int np = 0, nd = 0, nu = 0;
    for (const Pick& pick : picks) {
      if (!pick.ok) {
        ++study.failures;
        continue;
      }
      ++row.n;
      np += pick.p == truth_dims.p;
      nd += pick.d == truth_dims.d;
      nu += pick.u == truth_dims.u;
      if (pick.u >= 0 && pick.u != truth_dims.u) (pick.u > truth_dims.u ? row.u_over : row.u_under)++;
    }
    if (row.n > 0) {
      row.p_correct = static_cast<double>(np) / row.n;
      row.d_correct = static_cast<double>(nd) / row.n;
      row.u_correct = static_cast<double>(nu) / row.n;
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace revar

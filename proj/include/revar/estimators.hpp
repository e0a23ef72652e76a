#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revar/envelope_objective.hpp"
#include "revar/grassmann.hpp"
#include "revar/ts_moments.hpp"

namespace revar {

enum class ModelKind { OLSVAR, RRVAR, EVAR, REVAR };

std::string to_string(ModelKind m);
ModelKind parse_model(const std::string& s);

enum class EnvelopeAlgorithm { FG, OneD, Auto };

std::string to_string(EnvelopeAlgorithm a);
EnvelopeAlgorithm parse_algorithm(const std::string& s);

struct Dims {
  int d = 0;
  int u = 0;
  int p = 0;
  int q = 0;
};

struct EnvelopeOptions {
  EnvelopeAlgorithm algorithm = EnvelopeAlgorithm::Auto;
  double gtol = 1e-6;
  double ftol = 1e-8;
  int max_iter = 500;
  int restarts = 5;          // eigen starts (3), 1D output, then random draws
  std::uint64_t seed = 0;
  bool polish = true;        // FG refinement of the 1D result
  int fg_max_q = 10;         // `Auto` uses FG up to this q
  std::vector<MatrixXd> warm_starts;
};

struct EnvelopeFit {
  MatrixXd phi;
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
  std::string start;               // label of the winning start
  std::vector<double> trace;       // objective per iteration of the winning run
};

/// A fitted VAR(p). Factor matrices are empty when the model has none.
struct VarEstimate {
  ModelKind model = ModelKind::OLSVAR;
  Dims dims;
  Index sample_size = 0;
  VectorXd alpha;     // intercept on the raw lagged vector
  MatrixXd beta;      // q x qp
  MatrixXd sigma;     // q x q
  MatrixXd a;         // q x d (RRVAR/REVAR: A = Phi nu)
  MatrixXd b;         // d x qp
  MatrixXd phi;       // q x u
  MatrixXd phi0;      // q x (q-u)
  MatrixXd nu;        // u x d
  MatrixXd xi;        // u x qp (EVAR coordinates, Phi xi = beta)
  MatrixXd omega;     // u x u
  MatrixXd omega0;    // (q-u) x (q-u)
  double loglik = 0.0;
  long nop = 0;
  EnvelopeFit envelope;  // populated for EVAR/REVAR

  bool has_envelope() const { return phi.size() > 0; }
};

long nop_count(ModelKind model, const Dims& dims);

VarEstimate fit_olsvar(const AutocovarianceSet& acov);
VarEstimate fit_rrvar(const AutocovarianceSet& acov, int d);
VarEstimate fit_known_phi(const AutocovarianceSet& acov, const MatrixXd& phi, int d);
VarEstimate fit_revar(const AutocovarianceSet& acov, int d, int u, const EnvelopeOptions& opts = {});
VarEstimate fit_evar(const AutocovarianceSet& acov, int u, const EnvelopeOptions& opts = {});
/// beta = 0, Sigma = Gamma0.
VarEstimate fit_zero_model(const AutocovarianceSet& acov);
VarEstimate fit_model(ModelKind model, const AutocovarianceSet& acov, const Dims& dims,
                      const EnvelopeOptions& opts = {});

EnvelopeFit optimize_envelope_fg(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts = {});
EnvelopeFit optimize_envelope_1d(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts = {});
EnvelopeFit optimize_envelope(const EnvelopeObjective& ctx, int u, const EnvelopeOptions& opts = {});

/// Conditional Gaussian log-likelihood with the -(Tq/2) log(2 pi) constant,
/// evaluated from the sample moments at the estimate's (alpha, beta, Sigma).
double conditional_loglik(const VarEstimate& est, const AutocovarianceSet& acov);
/// Same quantity from explicit residuals y_t - alpha - beta x_t.
double conditional_loglik(const VarEstimate& est, const LagDesign& design);

/// Residuals y_t - alpha - beta x_t (n x q).
MatrixXd residuals(const VarEstimate& est, const LagDesign& design);

}  // namespace revar

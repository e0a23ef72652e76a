#include "revar/asymptotics.hpp"

#include <cmath>

namespace revar {

namespace {

Index tri(Index k) { return k * (k + 1) / 2; }

MatrixXd block_diag(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out = MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

VectorXd stack(std::initializer_list<VectorXd> parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.size();
  VectorXd out(n);
  Index k = 0;
  for (const auto& p : parts) {
    out.segment(k, p.size()) = p;
    k += p.size();
  }
  return out;
}

VectorXd h_from(const MatrixXd& beta, const MatrixXd& sigma) { return stack({vec(beta), vech(sigma)}); }

// Sigma = Phi Omega Phi' + Q_Phi S0 Q_Phi, S0 from the base point's complement.
MatrixXd envelope_sigma(const MatrixXd& phi, const MatrixXd& omega, const MatrixXd& base_phi0,
                        const MatrixXd& omega0) {
  const Index q = phi.rows();
  const MatrixXd qphi =
      MatrixXd::Identity(q, q) - phi * (phi.transpose() * phi).ldlt().solve(phi.transpose());
  const MatrixXd s0 = base_phi0 * omega0 * base_phi0.transpose();
  return phi * omega * phi.transpose() + qphi * s0 * qphi;
}

// d vech(Sigma) / d vec(Phi)' at Phi'Phi = I.
MatrixXd dsigma_dphi(const ParameterVectors& p) {
  const Index q = p.phi.rows();
  const Index u = p.phi.cols();
  const VecVechKit<double> kit = vec_vech_build<double>(q);
  const MatrixXd kqu = commutation(q, u);
  const MatrixXd iq = MatrixXd::Identity(q, q);
  const MatrixXd po = p.phi * p.omega;
  const MatrixXd s0 = p.phi0 * p.omega0 * p.phi0.transpose();
  const MatrixXd dvec = kron(po, iq) + kron(iq, po) * kqu - kron(p.phi, s0) - kron(s0, p.phi) * kqu;
  return kit.contraction * dvec;
}

MatrixXd dsigma_domega(const MatrixXd& phi) {
  const Index q = phi.rows();
  const Index u = phi.cols();
  if (u == 0) return MatrixXd(tri(q), 0);
  return vec_vech_build<double>(q).contraction * kron(phi, phi) * vec_vech_build<double>(u).expansion;
}

MatrixXd sandwich_core(const MatrixXd& jac, const MatrixXd& j) {
  const MatrixXd inner = pinv_psd(SymMatd(MatrixXd(jac.transpose() * j * jac)));
  return jac * inner * jac.transpose();
}

void require_envelope(const ParameterVectors& p) {
  if (!p.has_envelope()) throw Error(ErrorKind::BadDims, "envelope parameters required");
}

void require_rank(const ParameterVectors& p) {
  if (p.a.size() == 0 || p.b.size() == 0) throw Error(ErrorKind::BadDims, "rank factors A, B required");
}

}  // namespace

VectorXd ParameterVectors::h() const { return h_from(beta, sigma); }
VectorXd ParameterVectors::psi() const { return stack({vec(a), vec(b), vech(sigma)}); }
VectorXd ParameterVectors::theta() const {
  return stack({vec(phi), vec(nu), vec(b), vech(omega), vech(omega0)});
}
VectorXd ParameterVectors::delta() const { return stack({vec(phi), vec(xi), vech(omega), vech(omega0)}); }

ParameterVectors make_parameters(const MatrixXd& phi, const MatrixXd& nu, const MatrixXd& b,
                                 const MatrixXd& omega, const MatrixXd& omega0, const MatrixXd& gamma_p) {
  ParameterVectors p;
  const Index q = phi.rows();
  p.dims.q = static_cast<int>(q);
  p.dims.u = static_cast<int>(phi.cols());
  p.dims.d = static_cast<int>(nu.cols());
  p.dims.p = static_cast<int>(b.cols() / q);
  p.gamma_p = gamma_p;
  p.phi = phi;
  p.phi0 = orthonormal_complement(phi);
  p.nu = nu;
  p.b = b;
  p.a = phi * nu;
  p.xi = nu * b;
  p.beta = phi * p.xi;
  p.omega = omega;
  p.omega0 = omega0;
  p.sigma = phi * omega * phi.transpose() + p.phi0 * omega0 * p.phi0.transpose();
  return p;
}

ParameterVectors make_rr_parameters(const MatrixXd& a, const MatrixXd& b, const MatrixXd& sigma,
                                    const MatrixXd& gamma_p) {
  ParameterVectors p;
  const Index q = a.rows();
  p.dims.q = static_cast<int>(q);
  p.dims.u = static_cast<int>(q);
  p.dims.d = static_cast<int>(a.cols());
  p.dims.p = static_cast<int>(b.cols() / q);
  p.gamma_p = gamma_p;
  p.a = a;
  p.b = b;
  p.beta = a * b;
  p.sigma = sigma;
  return p;
}

ParameterVectors parameters_from_estimate(const VarEstimate& est, const MatrixXd& gamma_p) {
  if (est.has_envelope() && est.nu.size() > 0) {
    ParameterVectors p = make_parameters(est.phi, est.nu, est.b, est.omega, est.omega0, gamma_p);
    p.phi0 = est.phi0;
    p.sigma = est.sigma;
    p.beta = est.beta;
    return p;
  }
  if (est.a.size() > 0) return make_rr_parameters(est.a, est.b, est.sigma, gamma_p);
  ParameterVectors p;
  p.dims = est.dims;
  p.gamma_p = gamma_p;
  p.beta = est.beta;
  p.sigma = est.sigma;
  return p;
}

FisherInformation fisher_information(const MatrixXd& gamma_p, const MatrixXd& sigma) {
  const Index q = sigma.rows();
  const VecVechKit<double> kit = vec_vech_build<double>(q);
  const MatrixXd sigma_inv = sym_power(SymMatd(sigma), SymPower::Inverse);
  const MatrixXd gp_inv = sym_power(SymMatd(gamma_p), SymPower::Inverse);
  FisherInformation f;
  f.j = block_diag(kron(gamma_p, sigma_inv),
                   0.5 * kit.expansion.transpose() * kron(sigma_inv, sigma_inv) * kit.expansion);
  f.j_inv = block_diag(kron(gp_inv, sigma),
                       2.0 * kit.expansion_pinv * kron(sigma, sigma) * kit.expansion_pinv.transpose());
  return f;
}

MatrixXd jacobian_psi(const ParameterVectors& p) {
  require_rank(p);
  const Index q = p.beta.rows();
  const Index qp = p.beta.cols();
  const Index d = p.a.cols();
  const Index m = tri(q);
  MatrixXd h = MatrixXd::Zero(q * qp + m, q * d + d * qp + m);
  h.block(0, 0, q * qp, q * d) = kron(MatrixXd(p.b.transpose()), MatrixXd::Identity(q, q));
  h.block(0, q * d, q * qp, d * qp) = kron(MatrixXd::Identity(qp, qp), p.a);
  h.bottomRightCorner(m, m).setIdentity();
  return h;
}

MatrixXd jacobian_theta(const ParameterVectors& p) {
  require_envelope(p);
  const Index q = p.beta.rows();
  const Index qp = p.beta.cols();
  const Index u = p.phi.cols();
  const Index d = p.nu.cols();
  const Index m = tri(q);
  const Index cols = q * u + u * d + d * qp + tri(u) + tri(q - u);
  MatrixXd r = MatrixXd::Zero(q * qp + m, cols);
  Index c = 0;
  r.block(0, c, q * qp, q * u) = kron(MatrixXd(p.xi.transpose()), MatrixXd::Identity(q, q));
  r.block(q * qp, c, m, q * u) = dsigma_dphi(p);
  c += q * u;
  r.block(0, c, q * qp, u * d) = kron(MatrixXd(p.b.transpose()), p.phi);
  c += u * d;
  r.block(0, c, q * qp, d * qp) = kron(MatrixXd::Identity(qp, qp), p.a);
  c += d * qp;
  r.block(q * qp, c, m, tri(u)) = dsigma_domega(p.phi);
  c += tri(u);
  r.block(q * qp, c, m, tri(q - u)) = dsigma_domega(p.phi0);
  return r;
}

MatrixXd jacobian_delta(const ParameterVectors& p) {
  require_envelope(p);
  const Index q = p.beta.rows();
  const Index qp = p.beta.cols();
  const Index u = p.phi.cols();
  const Index m = tri(q);
  const Index cols = q * u + u * qp + tri(u) + tri(q - u);
  MatrixXd r = MatrixXd::Zero(q * qp + m, cols);
  Index c = 0;
  r.block(0, c, q * qp, q * u) = kron(MatrixXd(p.xi.transpose()), MatrixXd::Identity(q, q));
  r.block(q * qp, c, m, q * u) = dsigma_dphi(p);
  c += q * u;
  r.block(0, c, q * qp, u * qp) = kron(MatrixXd::Identity(qp, qp), p.phi);
  c += u * qp;
  r.block(q * qp, c, m, tri(u)) = dsigma_domega(p.phi);
  c += tri(u);
  r.block(q * qp, c, m, tri(q - u)) = dsigma_domega(p.phi0);
  return r;
}

VectorXd h_of_psi(const ParameterVectors& base, const VectorXd& psi) {
  const Index q = base.beta.rows();
  const Index qp = base.beta.cols();
  const Index d = base.a.cols();
  Index k = 0;
  const MatrixXd a = unvec(psi.segment(k, q * d), q, d);
  k += q * d;
  const MatrixXd b = unvec(psi.segment(k, d * qp), d, qp);
  k += d * qp;
  const MatrixXd sigma = unvech(psi.segment(k, tri(q)), q);
  return h_from(a * b, sigma);
}

VectorXd h_of_theta(const ParameterVectors& base, const VectorXd& theta) {
  const Index q = base.beta.rows();
  const Index qp = base.beta.cols();
  const Index u = base.phi.cols();
  const Index d = base.nu.cols();
  Index k = 0;
  const MatrixXd phi = unvec(theta.segment(k, q * u), q, u);
  k += q * u;
  const MatrixXd nu = unvec(theta.segment(k, u * d), u, d);
  k += u * d;
  const MatrixXd b = unvec(theta.segment(k, d * qp), d, qp);
  k += d * qp;
  const MatrixXd omega = unvech(theta.segment(k, tri(u)), u);
  k += tri(u);
  const MatrixXd omega0 = unvech(theta.segment(k, tri(q - u)), q - u);
  return h_from(phi * nu * b, envelope_sigma(phi, omega, base.phi0, omega0));
}

VectorXd h_of_delta(const ParameterVectors& base, const VectorXd& delta) {
  const Index q = base.beta.rows();
  const Index qp = base.beta.cols();
  const Index u = base.phi.cols();
  Index k = 0;
  const MatrixXd phi = unvec(delta.segment(k, q * u), q, u);
  k += q * u;
  const MatrixXd xi = unvec(delta.segment(k, u * qp), u, qp);
  k += u * qp;
  const MatrixXd omega = unvech(delta.segment(k, tri(u)), u);
  k += tri(u);
  const MatrixXd omega0 = unvech(delta.segment(k, tri(q - u)), q - u);
  return h_from(phi * xi, envelope_sigma(phi, omega, base.phi0, omega0));
}

MatrixXd AsymptoticCovariance::standard_errors(Index T) const {
  const Index n = beta_block.rows();
  VectorXd se(n);
  for (Index i = 0; i < n; ++i) se(i) = std::sqrt(std::max(0.0, beta_block(i, i)) / static_cast<double>(T));
  return unvec(se, q, q > 0 ? n / q : 0);
}

AsymptoticCovariance avar(ModelKind model, const ParameterVectors& params) {
  const FisherInformation fi = fisher_information(params.gamma_p, params.sigma);
  AsymptoticCovariance out;
  out.model = model;
  switch (model) {
    case ModelKind::OLSVAR:
      out.full = fi.j_inv;
      break;
    case ModelKind::RRVAR:
      out.full = sandwich_core(jacobian_psi(params), fi.j);
      break;
    case ModelKind::EVAR:
      out.full = sandwich_core(jacobian_delta(params), fi.j);
      break;
    case ModelKind::REVAR:
      out.full = sandwich_core(jacobian_theta(params), fi.j);
      break;
  }
  out.full = SymMatd(out.full).matrix();
  out.q = params.beta.rows();
  const Index nb = params.beta.size();
  out.beta_block = out.full.topLeftCorner(nb, nb);
  return out;
}

MatrixXd avar_rrvar_closed_form(const ParameterVectors& p) {
  require_rank(p);
  const MatrixXd sigma_inv = sym_power(SymMatd(p.sigma), SymPower::Inverse);
  const MatrixXd gp_inv = sym_power(SymMatd(p.gamma_p), SymPower::Inverse);
  const Projection<double> pb = projection(MatrixXd(p.b.transpose()), p.gamma_p);
  const Projection<double> pa = projection(p.a, sigma_inv);
  const Index n = p.beta.size();
  return (MatrixXd::Identity(n, n) - kron(pb.q, pa.q)) * kron(gp_inv, p.sigma);
}

MatrixXd avar_rrvar_decomposition(const ParameterVectors& p) {
  require_rank(p);
  const MatrixXd sigma_inv = sym_power(SymMatd(p.sigma), SymPower::Inverse);
  const MatrixXd gp_inv = sym_power(SymMatd(p.gamma_p), SymPower::Inverse);
  const Projection<double> pb = projection(MatrixXd(p.b.transpose()), p.gamma_p);
  const Projection<double> pa = projection(p.a, sigma_inv);
  return kron(MatrixXd(pb.q * gp_inv), MatrixXd(pa.p * p.sigma)) + kron(MatrixXd(pb.p * gp_inv), p.sigma);
}

AsymptoticCovariance avar_nonnormal(const ParameterVectors& params, const MatrixXd& v_tilde, ModelKind model) {
  const FisherInformation fi = fisher_information(params.gamma_p, params.sigma);
  if (v_tilde.rows() != fi.j.rows() || v_tilde.cols() != fi.j.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "V~ must match the length of h");
  }
  MatrixXd core;
  switch (model) {
    case ModelKind::OLSVAR: core = fi.j_inv; break;
    case ModelKind::RRVAR: core = sandwich_core(jacobian_psi(params), fi.j); break;
    case ModelKind::EVAR: core = sandwich_core(jacobian_delta(params), fi.j); break;
    case ModelKind::REVAR: core = sandwich_core(jacobian_theta(params), fi.j); break;
  }
  const MatrixXd left = core * fi.j;
  AsymptoticCovariance out;
  out.model = model;
  out.full = SymMatd(MatrixXd(left * v_tilde * left.transpose())).matrix();
  out.q = params.beta.rows();
  const Index nb = params.beta.size();
  out.beta_block = out.full.topLeftCorner(nb, nb);
  return out;
}

SeRatios se_ratios(const MatrixXd& avar_m, const MatrixXd& avar_revar) {
  if (avar_m.rows() != avar_revar.rows() || avar_m.cols() != avar_revar.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "avar blocks differ in size");
  }
  const Index n = avar_m.rows();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty avar");
  SeRatios r;
  r.r_min = std::numeric_limits<double>::infinity();
  r.r_max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double den = avar_revar(i, i);
    if (!(den > 0.0)) throw Error(ErrorKind::ZeroSE, "REVAR standard error is zero");
    const double ratio = std::sqrt(std::max(0.0, avar_m(i, i)) / den);
    r.r_min = std::min(r.r_min, ratio);
    r.r_max = std::max(r.r_max, ratio);
    sum += ratio;
  }
  r.r_avg = sum / static_cast<double>(n);
  return r;
}

MatrixXd estimate_vtilde(const MatrixXd& resid, const LagDesign& design) {
  const Index n = design.size();
  const Index q = design.dim();
  const Index qp = design.lagged.cols();
  if (resid.rows() != n || resid.cols() != q) throw Error(ErrorKind::DimensionMismatch, "residuals shape");
  if (n <= qp + 1) throw Error(ErrorKind::TooShort, "too few rows for V~");
  const double tn = static_cast<double>(n);
  const MatrixXd gp = design.lagged.transpose() * design.lagged / tn;
  const MatrixXd gp_inv = sym_power(SymMatd(gp), SymPower::Inverse);
  const MatrixXd sigma = resid.transpose() * resid / tn;
  const Index m = tri(q);
  MatrixXd z(n, q * qp + m);
  const MatrixXd gx = design.lagged * gp_inv;  // rows (Gamma_p^{-1} x_t)'
  for (Index t = 0; t < n; ++t) {
    const VectorXd e = resid.row(t).transpose();
    for (Index j = 0; j < qp; ++j) z.block(t, j * q, 1, q) = gx(t, j) * e.transpose();
    z.block(t, q * qp, 1, m) = vech(MatrixXd(e * e.transpose() - sigma)).transpose();
  }
  const MatrixXd zc = z.rowwise() - z.colwise().mean();
  return SymMatd(MatrixXd(zc.transpose() * zc / tn)).matrix();
}

}  // namespace revar

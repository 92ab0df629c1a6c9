#include "superres/sdp.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "superres/model.hpp"

namespace superres {

SdpProblem SdpProblem::tv(const LowPassData& y) {
  y.validate();
  SdpProblem p;
  p.kind = SdpKind::kTv;
  p.f_cut = y.f_cut;
  p.data = y.coeffs;
  return p;
}

SdpProblem SdpProblem::demix(const LowPassData& y, double eta) {
  SdpProblem p = tv(y);
  p.kind = SdpKind::kDemix;
  p.eta = eta;
  return p;
}

SdpProblem SdpProblem::gtv(const MultiLowPassData& y) {
  y.validate();
  SdpProblem p;
  p.kind = SdpKind::kGtv;
  p.f_cut = y.f_cut;
  p.data = y.coeffs;
  return p;
}

void SdpProblem::validate() const {
  if (f_cut < 1) throw std::invalid_argument("SdpProblem: f_cut must be positive");
  if (data.rows() != 2 * f_cut + 1) throw std::invalid_argument("SdpProblem: data shape mismatch");
  if (data.cols() < 1) throw std::invalid_argument("SdpProblem: no data columns");
  if (kind != SdpKind::kGtv && data.cols() != 1)
    throw std::invalid_argument("SdpProblem: TV/DEMIX take a single data column");
  if (kind == SdpKind::kDemix && !(eta > 0.0))
    throw std::invalid_argument("SdpProblem: DEMIX requires eta > 0");
}

CMat psd_project(const CMat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("psd_project: matrix must be square");
  CMat H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("psd_project: eigensolver failed");
  RVec ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// projection onto {T*(Lambda-block) = e1, lower-right block = I_m}, applied
// in place to a Hermitian iterate; the C block is left alone (DEMIX clips it
// separately)
void project_affine(CMat& X, int n, int m) {
  for (int d = 0; d < n; ++d) {
    cplx sum(0.0, 0.0);
    for (int i = 0; i + d < n; ++i) sum += X(i, i + d);
    const cplx shift = (sum - (d == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0))) / double(n - d);
    for (int i = 0; i + d < n; ++i) {
      X(i, i + d) -= shift;
      if (d > 0) X(i + d, i) = std::conj(X(i, i + d));
    }
  }
  X.block(n, n, m, m) = CMat::Identity(m, m);
}

void clip_modulus(CMat& X, int n, int m, double eta) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = std::abs(X(i, n + j));
      if (a > eta) {
        X(i, n + j) *= eta / a;
        X(n + j, i) = std::conj(X(i, n + j));
      }
    }
}

// sup of sum_k |(F* C_k)(t)|^2 over a grid with a few Newton polish steps
double poly_sup(const CMat& C, const ProblemConfig& cfg, int grid) {
  double best = 0.0, tbest = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double t = double(g) / grid;
    double v = 0.0;
    for (int k = 0; k < C.cols(); ++k) v += std::norm(adjoint_poly_eval(C.col(k), t, cfg));
    if (v > best) {
      best = v;
      tbest = t;
    }
  }
  double t = tbest;
  for (int it = 0; it < 8; ++it) {
    double d1 = 0.0, d2 = 0.0;
    for (int k = 0; k < C.cols(); ++k) {
      const cplx p = adjoint_poly_eval(C.col(k), t, cfg);
      const cplx q1 = adjoint_poly_deriv(C.col(k), t, cfg, 1);
      const cplx q2 = adjoint_poly_deriv(C.col(k), t, cfg, 2);
      d1 += 2.0 * std::real(std::conj(p) * q1);
      d2 += 2.0 * (std::norm(q1) + std::real(std::conj(p) * q2));
    }
    if (d2 >= 0.0 || std::abs(d1) < 1e-15) break;
    t -= d1 / d2;
  }
  double v = 0.0;
  for (int k = 0; k < C.cols(); ++k) v += std::norm(adjoint_poly_eval(C.col(k), t, cfg));
  return std::max(best, v);
}

}  // namespace

DualSolution solve(const SdpProblem& prob, const SolverOptions& opts, const DualSolution* warm) {
  prob.validate();
  opts.validate();
  const int n = 2 * prob.f_cut + 1;
  const int m = static_cast<int>(prob.data.cols());
  const int dim = n + m;
  const ProblemConfig cfg = prob.config();

  // objective <Y,C> = <X, W>/2; data normalized so one rho fits all scales
  const double scale = std::max(prob.data.norm(), 1e-12);
  const double eta_s = prob.eta / scale;
  CMat W = CMat::Zero(dim, dim);
  W.block(0, n, n, m) = prob.data / scale;
  W.block(n, 0, m, n) = prob.data.adjoint() / scale;

  CMat Z = CMat::Zero(dim, dim), U = CMat::Zero(dim, dim);
  if (warm && warm->lambda.rows() == n && warm->c.rows() == n && warm->c.cols() == m) {
    Z.block(0, 0, n, n) = warm->lambda;
    Z.block(0, n, n, m) = warm->c / scale;
    Z.block(n, 0, m, n) = warm->c.adjoint() / scale;
    Z.block(n, n, m, m) = CMat::Identity(m, m);
  }

  DualSolution out;
  const double wfac = 1.0 / (2.0 * opts.rho);
  CMat X(dim, dim), Zprev(dim, dim);
  bool converged = false;
  int iter = 0;
  double pres = 0.0, dres = 0.0;
  while (iter < opts.max_iters) {
    ++iter;
    X = Z - U + wfac * W;
    X = 0.5 * (X + X.adjoint());
    project_affine(X, n, m);
    if (prob.kind == SdpKind::kDemix) clip_modulus(X, n, m, eta_s);
    Zprev.swap(Z);
    CMat Xhat = opts.over_relax * X + (1.0 - opts.over_relax) * Zprev;
    Z = psd_project(Xhat + U);
    U += Xhat - Z;

    if (iter % opts.check_every == 0 || iter == opts.max_iters) {
      pres = (X - Z).norm();
      dres = opts.rho * (Z - Zprev).norm();
      const double eps_pri =
          std::sqrt(double(dim * dim)) * opts.tol_abs + opts.tol_rel * std::max(X.norm(), Z.norm());
      const double eps_dual =
          std::sqrt(double(dim * dim)) * opts.tol_abs + opts.tol_rel * opts.rho * U.norm();
      if (opts.trace) {
        const double obj = std::real((prob.data.adjoint() * Z.block(0, n, n, m)).trace()) * scale;
        out.trace.push_back({iter, pres, dres, obj});
      }
      if (pres <= eps_pri && dres <= eps_dual) {
        converged = true;
        break;
      }
    }
  }

  CMat Cz = Z.block(0, n, n, m) * scale;
  CMat Lz = 0.5 * (Z.block(0, 0, n, n) + Z.block(0, 0, n, n).adjoint());

  out.poly_sup = poly_sup(Cz, cfg, std::max(16 * n, 1024));
  double s = std::max(1.0, std::sqrt(std::max(out.poly_sup, 0.0)) * (1.0 + 1e-12));
  if (prob.kind == SdpKind::kDemix) {
    double cmax = 0.0;
    for (int i = 0; i < n; ++i) cmax = std::max(cmax, std::abs(Cz(i, 0)));
    if (cmax > prob.eta) s = std::max(s, cmax / prob.eta * (1.0 + 1e-12));
  }
  out.restore_scale = s;
  out.c = Cz / s;
  out.lambda = Lz;
  out.objective = std::real((prob.data.adjoint() * out.c).trace());
  out.converged = converged;
  out.iters = iter;
  out.primal_res = pres;
  out.dual_res = dres;

  CMat blk = CMat::Zero(dim, dim);
  blk.block(0, 0, n, n) = out.lambda;
  blk.block(0, n, n, m) = out.c;
  blk.block(n, 0, m, n) = out.c.adjoint();
  blk.block(n, n, m, m) = CMat::Identity(m, m);
  Eigen::SelfAdjointEigenSolver<CMat> es(blk);
  out.psd_min_eig = es.eigenvalues().minCoeff();
  CVec terr = toeplitz_adjoint(out.lambda);
  terr(0) -= 1.0;
  out.toeplitz_err = terr.cwiseAbs().maxCoeff();
  return out;
}

PolyVerification verify_bounded_polynomial(const CMat& C, const CMat& lambda,
                                           const ProblemConfig& cfg, int grid_size, double tol) {
  if (lambda.rows() != lambda.cols() || lambda.rows() != cfg.n() || C.rows() != cfg.n())
    throw std::invalid_argument("verify_bounded_polynomial: shape mismatch");
  PolyVerification v;
  const int n = cfg.n();
  const int m = static_cast<int>(C.cols());
  CMat blk = CMat::Zero(n + m, n + m);
  blk.block(0, 0, n, n) = lambda;
  blk.block(0, n, n, m) = C;
  blk.block(n, 0, m, n) = C.adjoint();
  blk.block(n, n, m, m) = CMat::Identity(m, m);
  Eigen::SelfAdjointEigenSolver<CMat> es(blk);
  v.psd_min_eig = es.eigenvalues().minCoeff();
  CVec terr = toeplitz_adjoint(lambda);
  terr(0) -= 1.0;
  v.toeplitz_err = terr.cwiseAbs().maxCoeff();
  const double lscale = std::max(1.0, lambda.norm());
  v.feasible = v.psd_min_eig >= -tol * lscale && v.toeplitz_err <= tol;
  double best = 0.0;
  for (int g = 0; g < grid_size; ++g) {
    const double t = double(g) / grid_size;
    double val = 0.0;
    for (int k = 0; k < m; ++k) val += std::norm(adjoint_poly_eval(C.col(k), t, cfg));
    best = std::max(best, val);
  }
  v.max_value = best;
  return v;
}

}  // namespace superres

#pragma once

#include "superres/types.hpp"

namespace superres {

enum class SdpKind { kTv, kDemix, kGtv };

/// One of the three semidefinite duals:
///   TV     max <y,c>  s.t. [L c; c* 1] psd, T*(L) = e1
///   DEMIX  adds ||c||_inf <= eta
///   GTV    max <Y,C>  s.t. [L C; C* I_m] psd, T*(L) = e1
struct SdpProblem {
  SdpKind kind = SdpKind::kTv;
  int f_cut = 0;
  CMat data;        // n x m, m = 1 except GTV
  double eta = 0.0;

  static SdpProblem tv(const LowPassData& y);
  static SdpProblem demix(const LowPassData& y, double eta);
  static SdpProblem gtv(const MultiLowPassData& y);
  ProblemConfig config() const { return ProblemConfig(f_cut); }
  void validate() const;
};

struct SolverOptions {
  double rho = 1.0;
  int max_iters = 50000;
  double tol_abs = 1e-7;
  double tol_rel = 1e-6;
  double over_relax = 1.8;
  int check_every = 25;
  bool trace = false;

  void validate() const {
    if (!(rho > 0.0) || !(tol_abs > 0.0) || !(tol_rel >= 0.0) || max_iters < 1)
      throw std::invalid_argument("SolverOptions: bad parameters");
  }
};

struct TracePoint {
  int iter;
  double primal_res, dual_res, objective;
};

struct DualSolution {
  CMat c;       // n x m, feasibility-restored
  CMat lambda;  // n x n Hermitian, psd
  double objective = 0.0;
  bool converged = false;
  int iters = 0;
  double primal_res = 0.0, dual_res = 0.0;
  double psd_min_eig = 0.0;   // of [lambda c; c* I] with the returned blocks
  double toeplitz_err = 0.0;  // ||T*(lambda) - e1||_inf
  double poly_sup = 0.0;      // sup_t sum_k |(F* c_k)(t)|^2 before restoration
  double restore_scale = 1.0;
  std::vector<TracePoint> trace;
};

/// ADMM splitting between the affine/box set and the psd cone; deterministic.
DualSolution solve(const SdpProblem& prob, const SolverOptions& opts = SolverOptions(),
                   const DualSolution* warm = nullptr);

/// Nearest (Frobenius) positive semidefinite matrix.
CMat psd_project(const CMat& M);

struct PolyVerification {
  bool feasible = false;
  double max_value = 0.0;   // max over the sample grid of sum_k |(F* C_k)|^2
  double psd_min_eig = 0.0;
  double toeplitz_err = 0.0;
};

/// Checks the LMI feasibility of (C, Lambda) and samples the squared
/// polynomial sum on a uniform grid.
PolyVerification verify_bounded_polynomial(const CMat& C, const CMat& lambda,
                                           const ProblemConfig& cfg, int grid_size = 4096,
                                           double tol = 1e-6);

}  // namespace superres

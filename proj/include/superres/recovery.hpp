#pragma once

#include "superres/sdp.hpp"
#include "superres/types.hpp"

namespace superres {

struct SupportEstimate {
  std::vector<double> locations;      // sorted, merged
  std::vector<double> locator_values; // |P| (TV/demix) or P (gTV) at each location
  double threshold = 0.0;
};

struct LocatorOptions {
  int grid_size = 0;          // 0 -> 32 n
  double threshold = 1e-4;    // keep peaks with locator >= 1 - threshold
  double merge_radius = 0.05; // lambda_c units
};

/// Peaks of |F_n^* c| refined by safeguarded Newton on 1 - |P|^2.
SupportEstimate locate_support_tv(const DualSolution& sol, const ProblemConfig& cfg,
                                  const LocatorOptions& opts = LocatorOptions());

/// Peaks of sum_k |(F_n^* C_k)|^2 (group locator).
SupportEstimate locate_support_gtv(const DualSolution& sol, const ProblemConfig& cfg,
                                   const LocatorOptions& opts = LocatorOptions());

/// Least-squares amplitudes for a known support. Throws on rank deficiency.
CVec estimate_amplitudes(const std::vector<double>& support, const LowPassData& y,
                         const ProblemConfig& cfg);

struct RecoveryOptions {
  SolverOptions solver;
  LocatorOptions locator;
};

SpikeTrain recover_tv(const LowPassData& y, const RecoveryOptions& opts = RecoveryOptions());

struct DemixResult {
  SpikeTrain spectra;
  CVec spikes;                 // length n, support S
  std::vector<int> spike_support;
  DualSolution dual;
  double residual = 0.0;       // || F x + s - y || / || y ||
};

/// delta: relative threshold for |c_l| = eta detection.
DemixResult demix(const LowPassData& y, double eta, const RecoveryOptions& opts = RecoveryOptions(),
                  double delta = 1e-3);

MultiSpikeTrain recover_gtv(const MultiLowPassData& y,
                            const RecoveryOptions& opts = RecoveryOptions());

/// Support bijection within tol_t (wrap distance) and matched amplitudes
/// within relative tol_a.
bool check_exact_recovery(const SpikeTrain& truth, const SpikeTrain& estimate, double tol_t,
                          double tol_a);
bool check_exact_recovery(const MultiSpikeTrain& truth, const MultiSpikeTrain& estimate,
                          double tol_t, double tol_a);

struct CertCheckReport {
  bool interpolation_ok = false;  // sign interpolation on the support
  bool off_support_ok = false;    // |q| < 1 away from the support
  bool coefficient_ok = false;    // demix: c-pattern on/off S; gTV: rows on the sphere
  bool counting_ok = false;       // |T| + |S| <= n
  bool pass = false;
  double max_off_support = 0.0;
  double max_interp_err = 0.0;
};

/// A-posteriori check of the demixing certificate conditions.
CertCheckReport check_demix_certificate(const SpikeTrain& x, const CVec& s,
                                        const std::vector<int>& s_support, const CVec& c,
                                        double eta, const ProblemConfig& cfg,
                                        double tol = 1e-3, int grid = 0);

/// A-posteriori check of the common-support certificate conditions.
CertCheckReport check_gtv_certificate(const MultiSpikeTrain& x, const CMat& C,
                                      const ProblemConfig& cfg, double tol = 1e-3, int grid = 0);

// ---------- discretized oracle ----------

struct GridOracleOptions {
  int grid_n = 0;          // 0 -> 16 n
  int max_iters = 200000;
  double tol_obj = 1e-8;   // objective precision
  double rho = 1.0;
};

struct GridOracleResult {
  std::vector<double> grid;   // grid positions
  CMat amplitudes;            // grid_n x m
  CVec spikes;                // demix only (length n), else empty
  double objective = 0.0;
  bool converged = false;
  int iters = 0;
  SpikeTrain to_spike_train(double rel_threshold = 1e-3) const;
};

GridOracleResult grid_oracle_tv(const LowPassData& y, const GridOracleOptions& opts = {});
GridOracleResult grid_oracle_demix(const LowPassData& y, double eta,
                                   const GridOracleOptions& opts = {});
GridOracleResult grid_oracle_gtv(const MultiLowPassData& y, const GridOracleOptions& opts = {});

}  // namespace superres

#pragma once

#include "superres/types.hpp"

namespace superres {

/// Interpolation kernel K_gamma(t) = prod_j K(gamma_j f_c, t): weights,
/// factor count, reference minimum cut-off.  Sum of weights must be 1 so the
/// product has cut-off frequency f_cut.
struct KernelSpec {
  std::vector<double> gamma;
  double f_min = 1e3;
  double f_cut = 1e3;

  static KernelSpec defaults(double fc = 1e3) {
    KernelSpec s;
    s.gamma = {0.247, 0.339, 0.414};
    s.f_min = 1e3;
    s.f_cut = fc;
    return s;
  }

  int p() const { return static_cast<int>(gamma.size()); }
  void validate() const;
};

/// K_gamma or its derivative of order 0..3 at absolute position t (wrapped to
/// (-1/2, 1/2]).  Derivatives carry their natural f_cut^order scale.
double kgamma_eval(const KernelSpec& spec, double t, int order);

/// Same, scaled by f_cut^{-order}; function of tau = f_cut * t only.
double kgamma_eval_scaled(const KernelSpec& spec, double tau, int order);

}  // namespace superres

#pragma once

#include <memory>

#include "superres/bounds.hpp"

namespace superres {

/// Precomputed table of the minimum-separation kernel-sum bounds
/// H_l(tau) = sum_{j=1..20} max{ max over the eps-grid of
/// [j tau_min - tau, (j+4) tau_min] of B^inf, b((j+4) tau_min) } + C~_l
/// for all lattice arguments tau = +-m eps, m = 0..m_max, all orders.
/// Values are normalized by f_cut^order (they do not depend on f_cut).
class KernelSumTable {
 public:
  KernelSumTable(const KernelBounds& kb, double tau_min, double eps, int m_max,
                 int threads = 0);

  double tau_min() const { return tau_min_; }
  double eps() const { return eps_; }
  int m_max() const { return m_max_; }

  /// H_l(+m eps), H_l(-m eps) at exact lattice arguments.
  double h_plus(int order, int m) const;
  double h_minus(int order, int m) const;

  /// H_l(tau) for arbitrary signed tau, rounded to the sound lattice side.
  double h(int order, double tau) const;

 private:
  void build(const KernelBounds& kb, int threads);

  double tau_min_;
  double eps_;
  int m_max_;
  std::array<std::vector<double>, 4> hplus_, hminus_;
};

/// Shared cache: tables are expensive; certification and the public
/// operation reuse them. f_cut does not enter the key.
std::shared_ptr<const KernelSumTable> kernel_sum_table(const KernelSpec& spec, double tau_min,
                                                       double eps, double tau_hi,
                                                       int threads = 0);

/// Spec-level operation: H_order(tau) with the explicit f_cut^order factor.
/// Requires |tau| <= tau_min/2 + eps.
double kernel_sum_bound(const KernelSpec& spec, double tau, double eps, int order,
                        double tau_min = 1.26);

/// max over the eps-grid (endpoint-inclusive, last point clamped) covering
/// [lo, hi] of B^inf_order(u, eps), normalized by f_cut^order.
double grid_max_bound_inf(const KernelBounds& kb, double lo, double hi, double eps, int order,
                          int threads = 0);

}  // namespace superres

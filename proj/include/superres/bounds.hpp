#pragma once

#include <array>

#include "superres/kernel.hpp"
#include "superres/types.hpp"

namespace superres {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Near/far switch points of the per-factor bounds. Published values exist
/// for the stock weights only; other weights need caller-supplied tables.
struct BoundBreakpoints {
  double tau0 = 0.0;  // order-0 near/far switch
  double tau3 = 0.0;  // order-3 h-function switch

  /// Table lookup for the published weights; throws for unknown ones.
  static BoundBreakpoints published(double gamma);
};

/// Evaluates the closed-form bound families on K_gamma and its derivatives.
/// All values returned by the *_scaled members are normalized by f_cut^order
/// (they depend on tau = f_cut * t and f_min only); the public operations
/// carry the explicit f_cut^order factor of the printed formulas.
class KernelBounds {
 public:
  KernelBounds(const KernelSpec& spec, std::vector<BoundBreakpoints> breakpoints);
  explicit KernelBounds(const KernelSpec& spec);  // published breakpoints

  const KernelSpec& spec() const { return spec_; }

  /// Sandwich bounds on K_gamma^{(order)}(tau / f_cut) / f_cut^order.
  /// Valid for |tau| <= 450; signed tau handled by parity.
  Interval near_scaled(double tau, int order) const;

  /// Uniform bound max{|L|,|U|} + (2 pi)^{order+1} eps, valid for every t
  /// with |f_cut t - tau| <= eps, normalized by f_cut^order.
  double inf_scaled(double tau, double eps, int order) const;

  /// All four orders at once; the hot path of the kernel-sum grids.
  void inf_scaled_all(double tau, double eps, double out[4]) const;

  /// Sandwich bounds for all four orders at once.
  void near_scaled_all(double tau, Interval out[4]) const;

  /// Decreasing tail bound b_{gamma,order}(tau) / f_cut^order, 0 < tau <= 450.
  double tail_scaled(double tau, int order) const;

  /// Coarse cubic-decay tail bound, normalized; valid for tau >= 80.
  double tail_coarse_scaled(double tau, int order) const;

  /// Hybrid used by the kernel-sum machinery: sharp tail bound inside its
  /// validity range, coarse bound beyond it.
  double tail_any_scaled(double tau, int order) const;

  /// Zeta-function residual constant C_order (normalized), Eq.-(Cl) shape.
  double tail_constant_scaled(int order, double tau_min) const;

  /// C~_order = sum_{j=21}^{400} b(( j-1/2) tau_min) + C_order, normalized.
  double tail_residual_scaled(int order, double tau_min) const;

  /// Lemma-(K20) upper bound on K_gamma''(0) / f_cut^2: -4 pi^2 sum gamma_j^2 / 3.
  double second_deriv_origin_scaled() const;

 private:
  static constexpr int kMaxFactors = 4;
  struct FactorBounds {
    std::array<Interval, 4> b;  // orders 0..3 at |tau|
  };
  FactorBounds factor_bounds(int i, double tau) const;
  void combine_all(const std::array<FactorBounds, kMaxFactors>& f, Interval out[4]) const;

  KernelSpec spec_;
  std::vector<BoundBreakpoints> bp_;
};

// ---- spec-level operations (absolute f_cut^order scaling) ----

/// B-bound sandwich with the printed f_cut^order factors.
Interval bounds_near(const KernelSpec& spec, double tau, int order);

/// max{|B^L|,|B^U|} + (2 pi)^{order+1} f_cut^order eps.
double bound_inf(const KernelSpec& spec, double tau, double eps, int order);

/// b_{gamma,order}(tau), absolute scale. Requires 0 < tau <= 450.
double tail_bound(const KernelSpec& spec, double tau, int order);

/// Coarse far-tail bound at absolute position t, 80/f_cut <= |t| <= 1/2.
double tail_bound_coarse(const KernelSpec& spec, double t, int order);

/// C_order, absolute scale ((2 pi f_cut)^order prefactor).
double tail_constant(const KernelSpec& spec, int order, double tau_min = 1.26);

double riemann_zeta(int p);

}  // namespace superres

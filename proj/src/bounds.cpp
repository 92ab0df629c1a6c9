#include "superres/bounds.hpp"

#include <cmath>

namespace superres {

namespace {

constexpr double kP2 = kPi * kPi;
constexpr double kP4 = kP2 * kP2;
constexpr double kP6 = kP4 * kP2;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// cos(x) - sin(x)/x, series below 0.4 where the direct difference cancels
double cos_minus_sinc(double x) {
  double x2 = x * x;
  if (std::abs(x) < 0.4) {
    return x2 * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 +
                 x2 * (1.0 / 45360.0 - x2 / 3991680.0))));
  }
  return std::cos(x) - std::sin(x) / x;
}

struct Order0 {
  double lo, hi;                  // branch-selected B_0^{L,U}
  double cos_minus_lo;            // cos(theta) - B_0^L, cancellation-free
  double hi_minus_cos;            // B_0^U - cos(theta)
  double sinc_minus_lo;           // sinc(theta) - B_0^L
  double hi_minus_sinc;           // B_0^U - sinc(theta)
};

}  // namespace

BoundBreakpoints BoundBreakpoints::published(double gamma) {
  struct Row { double g, t0, t3; };
  static constexpr Row table[] = {
      {0.247, 0.9112, 0.4614},
      {0.339, 0.6615, 0.2346},
      {0.414, 0.5401, 0.3051},
  };
  for (const Row& r : table)
    if (std::abs(gamma - r.g) < 1e-12) return {r.t0, r.t3};
  throw std::invalid_argument(
      "no published bound breakpoints for this kernel weight; supply them explicitly");
}

KernelBounds::KernelBounds(const KernelSpec& spec, std::vector<BoundBreakpoints> breakpoints)
    : spec_(spec), bp_(std::move(breakpoints)) {
  spec_.validate();
  if (spec_.p() > kMaxFactors) throw std::invalid_argument("KernelBounds: too many factors");
  if (bp_.size() != spec_.gamma.size())
    throw std::invalid_argument("KernelBounds: one breakpoint row per weight required");
}

KernelBounds::KernelBounds(const KernelSpec& spec) : spec_(spec) {
  spec_.validate();
  if (spec_.p() > kMaxFactors) throw std::invalid_argument("KernelBounds: too many factors");
  for (double g : spec_.gamma) bp_.push_back(BoundBreakpoints::published(g));
}

KernelBounds::FactorBounds KernelBounds::factor_bounds(int i, double tau) const {
  const double g0 = spec_.gamma[i];
  const double fm = spec_.f_min;
  const double th = kTwoPi * g0 * tau;
  const double s = 1.0 / (2.0 * g0 * fm);
  const double F2 = kP2 * tau * tau / (2.0 * fm * fm);
  const double F6 = kP2 * tau * tau / (6.0 * fm * fm);
  const double sn = std::sin(th);
  const double cs = std::cos(th);
  const double sc = sinc(th);
  const double fourpg2 = 4.0 * kP2 * g0 * g0;

  FactorBounds out;

  if (tau < 1e-12) {
    out.b[0] = {1.0, 1.0};
    out.b[1] = {0.0, 0.0};
    out.b[2] = {-(fourpg2 / 3.0) * (1.0 + s) * (1.0 + s),
                -fourpg2 / 3.0 + kP2 / (3.0 * fm * fm)};
    out.b[3] = {0.0, 0.0};
    return out;
  }

  Order0 B0;
  if (tau <= bp_[i].tau0) {
    // near-origin rational bounds; differences kept in exactly cancelled form
    const double x = th * th;
    const double e2 = s * (2.0 + s);
    const double p1s2 = (1.0 + s) * (1.0 + s);
    const double p1s4 = p1s2 * p1s2;
    const double p1s6 = p1s4 * p1s2;
    const double p1s8 = p1s4 * p1s4;
    const double dhat = 1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0;
    const double DL = dhat + x * x * x * x / 362880.0;
    const double DU = dhat * (1.0 - F6);
    const double dl_minus_nl =
        (x / 6.0) * e2 + (x * x * x / 5040.0) * (p1s6 - 1.0) + x * x * x * x / 362880.0;
    const double nu_minus_du =
        (x * x / 120.0) * (p1s4 - 1.0) + (x * x * x * x / 362880.0) * p1s8 + dhat * F6;
    const double gd = cos_minus_sinc(th);
    B0.sinc_minus_lo = sc * dl_minus_nl / DL;
    B0.hi_minus_sinc = sc * nu_minus_du / DU;
    B0.cos_minus_lo = gd + B0.sinc_minus_lo;
    B0.hi_minus_cos = -gd + B0.hi_minus_sinc;
    B0.lo = sc - B0.sinc_minus_lo;
    B0.hi = sc + B0.hi_minus_sinc;
  } else {
    const double lo = sc * (1.0 - (sn >= 0.0 ? F2 : 0.0)) / (1.0 + (sn >= 0.0 ? s : 0.0)) +
                      (cs < 0.0 ? cs / (1.0 + 2.0 * g0 * fm) : 0.0);
    const double hi = sc * (1.0 - (sn < 0.0 ? F2 : 0.0)) / (1.0 + (sn < 0.0 ? s : 0.0)) +
                      (cs >= 0.0 ? cs / (1.0 + 2.0 * g0 * fm) : 0.0);
    B0.lo = lo;
    B0.hi = hi;
    B0.cos_minus_lo = cs - lo;
    B0.hi_minus_cos = hi - cs;
    B0.sinc_minus_lo = sc - lo;
    B0.hi_minus_sinc = hi - sc;
  }
  out.b[0] = {B0.lo, B0.hi};

  // first derivative
  const double b1hi = (B0.cos_minus_lo / tau) * (1.0 - (cs <= B0.lo ? F2 : 0.0)) -
                      (sn < 0.0 ? kPi * sn / fm : 0.0);
  const double b1lo = (-B0.hi_minus_cos / tau) * (1.0 - (cs >= B0.hi ? F2 : 0.0)) -
                      (sn >= 0.0 ? kPi * sn / fm : 0.0);
  out.b[1] = {b1lo, b1hi};

  // second derivative
  const double pre_h = 4.0 * kP2 * g0 / fm;
  const double h2hi = pre_h * (B0.sinc_minus_lo - (sn < 0.0 ? F2 * sc : 0.0));
  const double h2lo = pre_h * (-B0.hi_minus_sinc - (sn >= 0.0 ? F2 * sc : 0.0));
  const double d2u = (cs >= B0.hi) ? (1.0 - F2) : 1.0;
  const double d2l = (cs < B0.lo) ? (1.0 - F2) : 1.0;
  const double b2hi = (2.0 * B0.hi_minus_cos / (tau * tau)) * d2u * d2u - fourpg2 * B0.lo +
                      (h2hi >= 0.0 ? h2hi : 0.0);
  const double b2lo = (-2.0 * B0.cos_minus_lo / (tau * tau)) * d2l * d2l - fourpg2 * B0.hi +
                      (h2lo < 0.0 ? h2lo : 0.0);
  out.b[2] = {b2lo, b2hi};

  // third derivative
  double h3hi, h3lo;
  if (tau <= bp_[i].tau3) {
    const double h3ahi = pre_h * (B0.hi_minus_sinc + (sn > 0.0 ? F2 * sc : 0.0));
    const double h3alo = pre_h * (-B0.sinc_minus_lo + (sn < 0.0 ? F2 * sc : 0.0));
    const double g2 = g0 * g0;
    const double h3bhi = (31.3 * kP4 * g2 * g2 * tau * tau -
                          16.0 * kP6 * g2 * g2 * g2 * tau * tau * tau * tau *
                              (1.0 + 2.0 / (g0 * fm))) *
                         (1.0 - F2) * (1.0 - F2) / (15.0 * (2.0 + 1.0 / (g0 * fm)));
    const double h3blo = 2.0 * kP4 * g2 * g2 * tau * tau * (8.17 + 20.0 / (g0 * fm)) /
                         (15.0 * (1.0 - F6) * (1.0 - F6));
    h3hi = (h3ahi >= 0.0 ? h3ahi : 0.0) - h3bhi;
    h3lo = (h3alo < 0.0 ? h3alo : 0.0) - h3blo;
  } else {
    h3hi = (b1hi / tau) * (1.0 - (b1hi < 0.0 ? F2 : 0.0)) - b2lo;
    h3lo = (b1lo / tau) * (1.0 - (b1lo > 0.0 ? F2 : 0.0)) - b2hi;
  }
  const double fcorr = 1.0 / (g0 * fm) - 1.0 / (2.0 * g0 * g0 * fm * fm);
  const double b3hi = -fourpg2 * b1lo * (1.0 + (b1lo < 0.0 ? fcorr : 0.0)) +
                      (2.0 * h3hi / tau) * (1.0 - (h3hi < 0.0 ? F2 : 0.0));
  const double b3lo = -fourpg2 * b1hi * (1.0 + (b1hi >= 0.0 ? fcorr : 0.0)) +
                      (2.0 * h3lo / tau) * (1.0 - (h3lo > 0.0 ? F2 : 0.0));
  out.b[3] = {b3lo, b3hi};
  return out;
}

void KernelBounds::combine_all(const std::array<FactorBounds, kMaxFactors>& f,
                               Interval out[4]) const {
  const int p = spec_.p();
  const int nstr = 1 << p;
  int ord[kMaxFactors] = {0, 0, 0, 0};
  // max/min over {L,U}^p strings of a product with per-factor derivative
  // orders given by ord[]
  auto extreme = [&]() {
    double mx = -1e300, mn = 1e300;
    for (int mask = 0; mask < nstr; ++mask) {
      double prod = 1.0;
      for (int i = 0; i < p; ++i) {
        const Interval& iv = f[i].b[ord[i]];
        prod *= (mask >> i & 1) ? iv.hi : iv.lo;
      }
      mx = std::max(mx, prod);
      mn = std::min(mn, prod);
    }
    return Interval{mn, mx};
  };
  auto reset = [&]() { for (int i = 0; i < p; ++i) ord[i] = 0; };

  out[0] = extreme();
  for (int l = 1; l < 4; ++l) out[l] = {0.0, 0.0};
  auto add = [&](Interval& acc, const Interval& iv, double w = 1.0) {
    acc.lo += w * iv.lo;
    acc.hi += w * iv.hi;
  };
  for (int i = 0; i < p; ++i) {
    reset();
    ord[i] = 1;
    add(out[1], extreme());
    ord[i] = 2;
    add(out[2], extreme());
    ord[i] = 3;
    add(out[3], extreme());
  }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      reset();
      if (j > i) {  // (i,j) and (j,i) share the same order assignment
        ord[i] = ord[j] = 1;
        add(out[2], extreme(), 2.0);
      }
      ord[i] = 2;
      ord[j] = 1;
      add(out[3], extreme(), 3.0);
    }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      for (int k = j + 1; k < p; ++k) {
        reset();
        ord[i] = ord[j] = ord[k] = 1;
        add(out[3], extreme(), 6.0);
      }
}

void KernelBounds::near_scaled_all(double tau, Interval out[4]) const {
  const double a = std::abs(tau);
  if (a > 450.0) throw std::invalid_argument("bounds: |tau| must be <= 450");
  std::array<FactorBounds, kMaxFactors> f;
  for (int i = 0; i < spec_.p(); ++i) f[i] = factor_bounds(i, a);
  combine_all(f, out);
  if (tau < 0.0)
    for (int l = 1; l < 4; l += 2) out[l] = {-out[l].hi, -out[l].lo};
}

Interval KernelBounds::near_scaled(double tau, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("bounds: order must be 0..3");
  Interval all[4];
  near_scaled_all(tau, all);
  return all[order];
}

void KernelBounds::inf_scaled_all(double tau, double eps, double out[4]) const {
  Interval all[4];
  near_scaled_all(std::abs(tau), all);
  double dev = kTwoPi * eps;  // (2 pi)^{l+1} eps
  for (int l = 0; l < 4; ++l) {
    out[l] = std::max(std::abs(all[l].lo), std::abs(all[l].hi)) + dev;
    dev *= kTwoPi;
  }
}

double KernelBounds::inf_scaled(double tau, double eps, int order) const {
  if (eps < 0.0) throw std::invalid_argument("bounds: eps must be >= 0");
  Interval iv = near_scaled(std::abs(tau), order);
  return std::max(std::abs(iv.lo), std::abs(iv.hi)) + std::pow(kTwoPi, order + 1) * eps;
}

double KernelBounds::tail_scaled(double tau, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("tail bound: order must be 0..3");
  if (!(tau > 0.0 && tau <= 450.0))
    throw std::invalid_argument("tail bound: tau must be in (0, 450]");
  const int p = spec_.p();
  const double fm = spec_.f_min;
  std::vector<std::array<double, 4>> b(p);
  for (int i = 0; i < p; ++i) {
    const double g0 = spec_.gamma[i];
    const double den = 1.0 - kP2 * tau * tau / (6.0 * fm * fm);
    b[i][0] = 1.0 / (kTwoPi * g0 * tau * den);
    b[i][1] = (1.0 + b[i][0]) / (tau * den);
    b[i][2] = 4.0 * kP2 * g0 * g0 * b[i][0] * (1.0 + 1.0 / (g0 * fm)) + 2.0 * b[i][1] / tau;
    b[i][3] = 4.0 * kP2 * g0 * g0 * b[i][1] * (1.0 + 1.0 / (g0 * fm)) +
              (2.0 / tau) * (b[i][2] + b[i][1] / tau);
  }
  auto prod0_except = [&](int x, int y, int z) {
    double prod = 1.0;
    for (int i = 0; i < p; ++i)
      if (i != x && i != y && i != z) prod *= b[i][0];
    return prod;
  };
  if (order == 0) return prod0_except(-1, -1, -1);
  double acc = 0.0;
  if (order == 1) {
    for (int i = 0; i < p; ++i) acc += b[i][1] * prod0_except(i, -1, -1);
    return acc;
  }
  if (order == 2) {
    for (int i = 0; i < p; ++i) acc += b[i][2] * prod0_except(i, -1, -1);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (j != i) acc += b[i][1] * b[j][1] * prod0_except(i, j, -1);
    return acc;
  }
  for (int i = 0; i < p; ++i) acc += b[i][3] * prod0_except(i, -1, -1);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (j != i) acc += 3.0 * b[i][2] * b[j][1] * prod0_except(i, j, -1);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        if (j != i && k != i && k != j)
          acc += b[i][1] * b[j][1] * b[k][1] * prod0_except(i, j, k);
  return acc;
}

double KernelBounds::tail_coarse_scaled(double tau, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("coarse tail: order must be 0..3");
  if (tau < 80.0) throw std::invalid_argument("coarse tail: tau must be >= 80");
  double pg = 1.0;
  for (double g : spec_.gamma) pg *= g;
  return std::pow(kTwoPi, order) / pg * std::pow(1.1 / (4.0 * tau), spec_.p());
}

double KernelBounds::tail_any_scaled(double tau, int order) const {
  if (tau <= 450.0) return tail_scaled(tau, order);
  return tail_coarse_scaled(tau, order);
}

double KernelBounds::tail_constant_scaled(int order, double tau_min) const {
  double pg = 1.0;
  for (double g : spec_.gamma) pg *= g;
  const int p = spec_.p();
  double partial = 0.0;
  for (int k = 400; k >= 1; --k) partial += std::pow(static_cast<double>(k), -p);
  const double tail = riemann_zeta(p) - partial;
  return std::pow(kTwoPi, order) / pg * std::pow(1.1 / (4.0 * tau_min), p) * tail;
}

double KernelBounds::tail_residual_scaled(int order, double tau_min) const {
  double acc = 0.0;
  for (int j = 21; j <= 400; ++j) acc += tail_any_scaled((j - 0.5) * tau_min, order);
  return acc + tail_constant_scaled(order, tau_min);
}

double KernelBounds::second_deriv_origin_scaled() const {
  double acc = 0.0;
  for (double g : spec_.gamma) acc += g * g;
  return -4.0 * kP2 * acc / 3.0;
}

double riemann_zeta(int p) {
  if (p < 2) throw std::invalid_argument("riemann_zeta: p must be >= 2");
  const long double N = 1e6;
  long double s = 0.0L;
  for (long double k = N - 1; k >= 1; --k) s += powl(k, -p);
  // Euler-Maclaurin tail from N
  s += powl(N, 1.0L - p) / (p - 1) + powl(N, (long double)-p) / 2.0L +
       p * powl(N, -(long double)p - 1) / 12.0L;
  return static_cast<double>(s);
}

Interval bounds_near(const KernelSpec& spec, double tau, int order) {
  KernelBounds kb(spec);
  Interval iv = kb.near_scaled(tau, order);
  const double sc = std::pow(spec.f_cut, order);
  return {iv.lo * sc, iv.hi * sc};
}

double bound_inf(const KernelSpec& spec, double tau, double eps, int order) {
  KernelBounds kb(spec);
  return kb.inf_scaled(tau, eps, order) * std::pow(spec.f_cut, order);
}

double tail_bound(const KernelSpec& spec, double tau, int order) {
  KernelBounds kb(spec);
  return kb.tail_scaled(tau, order) * std::pow(spec.f_cut, order);
}

double tail_bound_coarse(const KernelSpec& spec, double t, int order) {
  const double a = std::abs(t);
  if (!(a >= 80.0 / spec.f_cut && a <= 0.5))
    throw std::invalid_argument("tail_bound_coarse: t outside [80/f_cut, 1/2]");
  KernelBounds kb(spec);
  return kb.tail_coarse_scaled(a * spec.f_cut, order) * std::pow(spec.f_cut, order);
}

double tail_constant(const KernelSpec& spec, int order, double tau_min) {
  KernelBounds kb(spec);
  return kb.tail_constant_scaled(order, tau_min) * std::pow(spec.f_cut, order);
}

}  // namespace superres

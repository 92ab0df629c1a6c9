#include "superres/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "superres/model.hpp"

namespace superres {

namespace {

// squared locator: |P|^2 (m=1) or sum_k |P_k|^2, with first two derivatives
struct LocatorPoly {
  const CMat* c;
  ProblemConfig cfg;

  double value(double t) const {
    double v = 0.0;
    for (int k = 0; k < c->cols(); ++k) v += std::norm(adjoint_poly_eval(c->col(k), t, cfg));
    return v;
  }
  void derivs(double t, double& d1, double& d2) const {
    d1 = d2 = 0.0;
    for (int k = 0; k < c->cols(); ++k) {
      const cplx p = adjoint_poly_eval(c->col(k), t, cfg);
      const cplx p1 = adjoint_poly_deriv(c->col(k), t, cfg, 1);
      const cplx p2 = adjoint_poly_deriv(c->col(k), t, cfg, 2);
      d1 += 2.0 * std::real(std::conj(p) * p1);
      d2 += 2.0 * (std::norm(p1) + std::real(std::conj(p) * p2));
    }
  }
};

// safeguarded Newton on the stationarity of the squared locator inside a
// bracketing cell; falls back to bisection on the derivative sign change
double refine_peak(const LocatorPoly& poly, double lo, double hi) {
  double d1lo, d1hi, d2;
  poly.derivs(lo, d1lo, d2);
  poly.derivs(hi, d1hi, d2);
  if (!(d1lo > 0.0 && d1hi < 0.0)) {  // no interior stationary point
    return poly.value(lo) >= poly.value(hi) ? lo : hi;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    double d1, dd;
    poly.derivs(t, d1, dd);
    if (d1 > 0.0)
      lo = t;
    else
      hi = t;
    double step = (dd < 0.0) ? -d1 / dd : 0.0;
    double next = t + step;
    if (step == 0.0 || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-12) return next;
    t = next;
  }
  return t;
}

SupportEstimate locate(const CMat& c, const ProblemConfig& cfg, const LocatorOptions& opts,
                       bool group) {
  LocatorPoly poly{&c, cfg};
  const int G = opts.grid_size > 0 ? opts.grid_size : 32 * cfg.n();
  std::vector<double> val(G);
  for (int g = 0; g < G; ++g) val[g] = poly.value(double(g) / G);

  // pathological locator: flags a polynomial that hugs the constraint surface
  const double keep = group ? (1.0 - opts.threshold) : (1.0 - opts.threshold) * (1.0 - opts.threshold);
  int high = 0;
  for (double v : val)
    if (v >= keep) ++high;
  if (high > G / 20)
    throw std::runtime_error("locate_support: locator at threshold on > 5% of the grid");

  std::vector<std::pair<double, double>> peaks;  // (t, locator)
  for (int g = 0; g < G; ++g) {
    const double prev = val[(g + G - 1) % G], next = val[(g + 1) % G];
    if (val[g] > prev && val[g] >= next) {
      const double t = refine_peak(poly, (g - 1.0) / G, (g + 1.0) / G);
      const double v2 = poly.value(t);
      const double locator = group ? v2 : std::sqrt(v2);
      if (locator >= 1.0 - opts.threshold) peaks.emplace_back(wrap_pos(t), locator);
    }
  }
  std::sort(peaks.begin(), peaks.end());

  // merge clusters within the merge radius (wrap-around), keep the best peak
  SupportEstimate est;
  est.threshold = 1.0 - opts.threshold;
  const double radius = opts.merge_radius * cfg.lambda_c();
  std::vector<bool> used(peaks.size(), false);
  for (size_t i = 0; i < peaks.size(); ++i) {
    if (used[i]) continue;
    double best_t = peaks[i].first, best_v = peaks[i].second;
    for (size_t j = 0; j < peaks.size(); ++j) {
      if (j == i || used[j]) continue;
      if (wrap_dist(peaks[i].first, peaks[j].first) <= radius) {
        used[j] = true;
        if (peaks[j].second > best_v) {
          best_v = peaks[j].second;
          best_t = peaks[j].first;
        }
      }
    }
    used[i] = true;
    est.locations.push_back(best_t);
    est.locator_values.push_back(best_v);
  }
  std::vector<size_t> order(est.locations.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return est.locations[a] < est.locations[b]; });
  SupportEstimate sorted;
  sorted.threshold = est.threshold;
  for (size_t i : order) {
    sorted.locations.push_back(est.locations[i]);
    sorted.locator_values.push_back(est.locator_values[i]);
  }
  return sorted;
}

CVec ls_solve(const CMat& A, const CVec& b, const char* what) {
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 1e-10 * smax)) {
    throw std::runtime_error(std::string(what) +
                             ": rank-deficient system, condition estimate " +
                             std::to_string(smax / std::max(smin, 1e-300)));
  }
  return svd.solve(b);
}

}  // namespace

SupportEstimate locate_support_tv(const DualSolution& sol, const ProblemConfig& cfg,
                                  const LocatorOptions& opts) {
  return locate(sol.c, cfg, opts, false);
}

SupportEstimate locate_support_gtv(const DualSolution& sol, const ProblemConfig& cfg,
                                   const LocatorOptions& opts) {
  return locate(sol.c, cfg, opts, true);
}

CVec estimate_amplitudes(const std::vector<double>& support, const LowPassData& y,
                         const ProblemConfig& cfg) {
  y.validate();
  if (support.size() > static_cast<size_t>(cfg.n()))
    throw std::invalid_argument("estimate_amplitudes: more support points than measurements");
  if (support.empty()) return CVec(0);
  return ls_solve(fourier_matrix(support, cfg), y.coeffs, "estimate_amplitudes");
}

SpikeTrain recover_tv(const LowPassData& y, const RecoveryOptions& opts) {
  y.validate();
  const ProblemConfig cfg(y.f_cut);
  SpikeTrain est;
  if (y.coeffs.norm() == 0.0) return est;
  DualSolution sol = solve(SdpProblem::tv(y), opts.solver);
  SupportEstimate sup = locate_support_tv(sol, cfg, opts.locator);
  est.support = sup.locations;
  CVec a = estimate_amplitudes(est.support, y, cfg);
  est.amplitudes.assign(a.data(), a.data() + a.size());
  return est;
}

DemixResult demix(const LowPassData& y, double eta, const RecoveryOptions& opts, double delta) {
  y.validate();
  if (!(eta > 0.0)) throw std::invalid_argument("demix: eta must be positive");
  const ProblemConfig cfg(y.f_cut);
  DemixResult res;
  res.spikes = CVec::Zero(cfg.n());
  if (y.coeffs.norm() == 0.0) return res;
  res.dual = solve(SdpProblem::demix(y, eta), opts.solver);

  for (int l = 0; l < cfg.n(); ++l)
    if (std::abs(res.dual.c(l, 0)) >= (1.0 - delta) * eta) res.spike_support.push_back(l);
  SupportEstimate sup = locate_support_tv(res.dual, cfg, opts.locator);
  res.spectra.support = sup.locations;

  const int nT = static_cast<int>(sup.locations.size());
  const int nS = static_cast<int>(res.spike_support.size());
  if (nT + nS > cfg.n())
    throw std::runtime_error("demix: |T| + |S| exceeds the number of measurements");

  CMat A(cfg.n(), nT + nS);
  if (nT > 0) A.leftCols(nT) = fourier_matrix(sup.locations, cfg);
  for (int j = 0; j < nS; ++j) {
    A.col(nT + j).setZero();
    A(res.spike_support[j], nT + j) = 1.0;
  }
  CVec sol = (nT + nS > 0) ? ls_solve(A, y.coeffs, "demix") : CVec(0);
  res.spectra.amplitudes.assign(sol.data(), sol.data() + nT);
  for (int j = 0; j < nS; ++j) res.spikes(res.spike_support[j]) = sol(nT + j);

  LowPassData yhat = forward_measure(res.spectra, cfg);
  res.residual = (yhat.coeffs + res.spikes - y.coeffs).norm() / y.coeffs.norm();
  return res;
}

MultiSpikeTrain recover_gtv(const MultiLowPassData& y, const RecoveryOptions& opts) {
  y.validate();
  const ProblemConfig cfg(y.f_cut);
  MultiSpikeTrain est;
  est.amplitudes.resize(0, y.m());
  if (y.coeffs.norm() == 0.0) return est;
  DualSolution sol = solve(SdpProblem::gtv(y), opts.solver);
  SupportEstimate sup = locate_support_gtv(sol, cfg, opts.locator);
  est.support = sup.locations;
  if (sup.locations.empty()) return est;
  CMat F = fourier_matrix(sup.locations, cfg);
  est.amplitudes.resize(static_cast<Eigen::Index>(sup.locations.size()), y.m());
  for (int k = 0; k < y.m(); ++k)
    est.amplitudes.col(k) = ls_solve(F, y.coeffs.col(k), "recover_gtv");
  return est;
}

namespace {

// order-preserving circular matching; returns max wrap distance over the
// best cyclic offset, or nullopt when sizes differ
std::optional<std::vector<int>> match_supports(const std::vector<double>& truth,
                                               const std::vector<double>& est, double tol_t) {
  if (truth.size() != est.size()) return std::nullopt;
  const int k = static_cast<int>(truth.size());
  if (k == 0) return std::vector<int>{};
  std::vector<int> ti(k), ei(k);
  for (int i = 0; i < k; ++i) ti[i] = ei[i] = i;
  std::sort(ti.begin(), ti.end(), [&](int a, int b) { return truth[a] < truth[b]; });
  std::sort(ei.begin(), ei.end(), [&](int a, int b) { return est[a] < est[b]; });
  for (int off = 0; off < k; ++off) {
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst, wrap_dist(truth[ti[i]], est[ei[(i + off) % k]]));
    if (worst <= tol_t) {
      std::vector<int> map(k);
      for (int i = 0; i < k; ++i) map[ti[i]] = ei[(i + off) % k];
      return map;
    }
  }
  return std::nullopt;
}

}  // namespace

bool check_exact_recovery(const SpikeTrain& truth, const SpikeTrain& estimate, double tol_t,
                          double tol_a) {
  auto map = match_supports(truth.support, estimate.support, tol_t);
  if (!map) return false;
  for (size_t j = 0; j < truth.support.size(); ++j) {
    const cplx a = truth.amplitudes[j];
    const cplx b = estimate.amplitudes[(*map)[j]];
    const double ref = std::abs(a);
    if (std::abs(b - a) > tol_a * (ref > 0.0 ? ref : 1.0)) return false;
  }
  return true;
}

bool check_exact_recovery(const MultiSpikeTrain& truth, const MultiSpikeTrain& estimate,
                          double tol_t, double tol_a) {
  auto map = match_supports(truth.support, estimate.support, tol_t);
  if (!map) return false;
  for (size_t j = 0; j < truth.support.size(); ++j) {
    const double ref = truth.amplitudes.row(j).norm();
    if ((estimate.amplitudes.row((*map)[j]) - truth.amplitudes.row(j)).norm() >
        tol_a * (ref > 0.0 ? ref : 1.0))
      return false;
  }
  return true;
}

namespace {

double max_off_support(const CMat& c, const std::vector<double>& support,
                       const ProblemConfig& cfg, int grid, bool group) {
  const double excl = 0.1 * cfg.lambda_c();
  double best = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double t = double(g) / grid;
    bool off = true;
    for (double tj : support)
      if (wrap_dist(t, tj) < excl) {
        off = false;
        break;
      }
    if (!off) continue;
    double v = 0.0;
    for (int k = 0; k < c.cols(); ++k) v += std::norm(adjoint_poly_eval(c.col(k), t, cfg));
    best = std::max(best, group ? v : std::sqrt(v));
  }
  return best;
}

}  // namespace

CertCheckReport check_demix_certificate(const SpikeTrain& x, const CVec& s,
                                        const std::vector<int>& s_support, const CVec& c,
                                        double eta, const ProblemConfig& cfg, double tol,
                                        int grid) {
  CertCheckReport rep;
  if (grid <= 0) grid = 64 * cfg.n();
  rep.max_interp_err = 0.0;
  for (size_t j = 0; j < x.support.size(); ++j) {
    const cplx q = adjoint_poly_eval(c, x.support[j], cfg);
    const cplx sign = x.amplitudes[j] / std::abs(x.amplitudes[j]);
    rep.max_interp_err = std::max(rep.max_interp_err, std::abs(q - sign));
  }
  rep.interpolation_ok = rep.max_interp_err <= tol;
  CMat cm = c;
  rep.max_off_support = max_off_support(cm, x.support, cfg, grid, false);
  rep.off_support_ok = rep.max_off_support < 1.0;
  rep.coefficient_ok = true;
  std::vector<bool> on(cfg.n(), false);
  for (int l : s_support) on[l] = true;
  for (int l = 0; l < cfg.n(); ++l) {
    if (on[l]) {
      const cplx sign = s(l) / std::abs(s(l));
      if (std::abs(c(l) - eta * sign) > tol * eta) rep.coefficient_ok = false;
    } else if (std::abs(c(l)) >= eta) {
      rep.coefficient_ok = false;
    }
  }
  rep.counting_ok = x.support.size() + s_support.size() <= static_cast<size_t>(cfg.n());
  rep.pass = rep.interpolation_ok && rep.off_support_ok && rep.coefficient_ok && rep.counting_ok;
  return rep;
}

CertCheckReport check_gtv_certificate(const MultiSpikeTrain& x, const CMat& C,
                                      const ProblemConfig& cfg, double tol, int grid) {
  CertCheckReport rep;
  if (grid <= 0) grid = 64 * cfg.n();
  rep.max_interp_err = 0.0;
  for (size_t j = 0; j < x.support.size(); ++j) {
    const double rn = x.amplitudes.row(j).norm();
    double err = 0.0;
    for (int k = 0; k < C.cols(); ++k) {
      const cplx q = adjoint_poly_eval(C.col(k), x.support[j], cfg);
      err += std::norm(q - x.amplitudes(j, k) / rn);
    }
    rep.max_interp_err = std::max(rep.max_interp_err, std::sqrt(err));
  }
  rep.interpolation_ok = rep.max_interp_err <= tol;
  rep.max_off_support = max_off_support(C, x.support, cfg, grid, true);
  rep.off_support_ok = rep.max_off_support < 1.0;
  rep.coefficient_ok = true;  // row normalization is the interpolation condition
  rep.counting_ok = x.support.size() <= static_cast<size_t>(cfg.n());
  rep.pass = rep.interpolation_ok && rep.off_support_ok && rep.counting_ok;
  return rep;
}

}  // namespace superres

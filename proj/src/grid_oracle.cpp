#include <cmath>

#include "superres/model.hpp"
#include "superres/recovery.hpp"

namespace superres {

namespace {

cplx shrink(cplx v, double kappa) {
  const double a = std::abs(v);
  if (a <= kappa) return cplx(0.0, 0.0);
  return v * (1.0 - kappa / a);
}

// ADMM basis pursuit on the uniform grid. The grid operator F has
// F F^* = G I, so the affine projection is a single matrix apply.
GridOracleResult run_oracle(SdpKind kind, const CMat& Y, int f_cut, double eta,
                            const GridOracleOptions& opts) {
  const ProblemConfig cfg(f_cut);
  const int n = cfg.n();
  const int m = static_cast<int>(Y.cols());
  const int G = opts.grid_n > 0 ? opts.grid_n : 16 * n;
  if (G < 4 * n) throw std::invalid_argument("grid_oracle: grid_n must be >= 4 n");
  const bool with_spikes = kind == SdpKind::kDemix;
  const int rows = G + (with_spikes ? n : 0);

  GridOracleResult res;
  res.grid.resize(G);
  for (int g = 0; g < G; ++g) res.grid[g] = double(g) / G;
  CMat F = fourier_matrix(res.grid, cfg);  // n x G

  const double scale = std::max(Y.norm(), 1e-300);
  if (Y.norm() == 0.0) {
    res.amplitudes = CMat::Zero(G, m);
    if (with_spikes) res.spikes = CVec::Zero(n);
    res.converged = true;
    return res;
  }
  CMat Yn = Y / scale;
  const double denom = with_spikes ? double(G) + 1.0 : double(G);

  CMat a = CMat::Zero(rows, m), z = CMat::Zero(rows, m), u = CMat::Zero(rows, m);
  auto apply_op = [&](const CMat& w) -> CMat {  // [F I] w
    CMat out = F * w.topRows(G);
    if (with_spikes) out += w.bottomRows(n);
    return out;
  };
  auto apply_adj = [&](const CMat& r) -> CMat {
    CMat out(rows, m);
    out.topRows(G) = F.adjoint() * r;
    if (with_spikes) out.bottomRows(n) = r;
    return out;
  };

  const double kappa = 1.0 / (opts.rho * denom);  // threshold scale chosen below
  (void)kappa;
  bool converged = false;
  int iter = 0;
  while (iter < opts.max_iters) {
    ++iter;
    // projection onto {[F I] a = y}
    a = z - u;
    a -= apply_adj(apply_op(a) - Yn) / denom;
    CMat zprev = z;
    CMat v = a + u;
    if (kind == SdpKind::kGtv) {
      for (int g = 0; g < G; ++g) {
        const double rn = v.row(g).norm();
        const double kap = 1.0 / opts.rho;
        z.row(g) = (rn <= kap) ? CMat::Zero(1, m) : (v.row(g) * (1.0 - kap / rn));
      }
    } else {
      for (int g = 0; g < G; ++g) z(g, 0) = shrink(v(g, 0), 1.0 / opts.rho);
      if (with_spikes)
        for (int l = 0; l < n; ++l) z(G + l, 0) = shrink(v(G + l, 0), eta / opts.rho);
    }
    u += a - z;
    if (iter % 50 == 0 || iter == opts.max_iters) {
      const double r = (a - z).norm();
      const double s = opts.rho * (z - zprev).norm();
      if (r <= opts.tol_obj * std::sqrt(double(rows)) && s <= opts.tol_obj * std::sqrt(double(rows))) {
        converged = true;
        break;
      }
    }
  }

  res.amplitudes = z.topRows(G) * scale;
  if (with_spikes) res.spikes = z.bottomRows(n).col(0) * scale;
  res.converged = converged;
  res.iters = iter;
  double obj = 0.0;
  if (kind == SdpKind::kGtv)
    for (int g = 0; g < G; ++g) obj += res.amplitudes.row(g).norm();
  else {
    for (int g = 0; g < G; ++g) obj += std::abs(res.amplitudes(g, 0));
    if (with_spikes) obj += eta * res.spikes.cwiseAbs().sum();
  }
  res.objective = obj;
  return res;
}

}  // namespace

SpikeTrain GridOracleResult::to_spike_train(double rel_threshold) const {
  SpikeTrain out;
  const int G = static_cast<int>(grid.size());
  double峰 = 0.0;
  (void)峰;
  double mx = 0.0;
  for (int g = 0; g < G; ++g) mx = std::max(mx, amplitudes.row(g).norm());
  if (mx == 0.0) return out;
  std::vector<bool> active(G);
  for (int g = 0; g < G; ++g) active[g] = amplitudes.row(g).norm() > rel_threshold * mx;
  std::vector<bool> seen(G, false);
  for (int g = 0; g < G; ++g) {
    if (!active[g] || seen[g]) continue;
    // walk the contiguous active run (with wrap)
    int start = g;
    while (active[(start + G - 1) % G] && !seen[(start + G - 1) % G] && (start + G - 1) % G != g)
      start = (start + G - 1) % G;
    double wsum = 0.0, tsum = 0.0;
    cplx asum(0.0, 0.0);
    int idx = start;
    double t0 = grid[start];
    while (active[idx] && !seen[idx]) {
      seen[idx] = true;
      const double w = amplitudes.row(idx).norm();
      double t = grid[idx];
      if (t - t0 > 0.5) t -= 1.0;  // unwrap across 0
      if (t - t0 < -0.5) t += 1.0;
      wsum += w;
      tsum += w * t;
      asum += amplitudes(idx, 0);
      idx = (idx + 1) % G;
      if (idx == start) break;
    }
    out.support.push_back(wrap_pos(tsum / wsum));
    out.amplitudes.push_back(asum);
  }
  return out;
}

GridOracleResult grid_oracle_tv(const LowPassData& y, const GridOracleOptions& opts) {
  y.validate();
  return run_oracle(SdpKind::kTv, y.coeffs, y.f_cut, 0.0, opts);
}

GridOracleResult grid_oracle_demix(const LowPassData& y, double eta,
                                   const GridOracleOptions& opts) {
  y.validate();
  if (!(eta > 0.0)) throw std::invalid_argument("grid_oracle: eta must be positive");
  return run_oracle(SdpKind::kDemix, y.coeffs, y.f_cut, eta, opts);
}

GridOracleResult grid_oracle_gtv(const MultiLowPassData& y, const GridOracleOptions& opts) {
  y.validate();
  return run_oracle(SdpKind::kGtv, y.coeffs, y.f_cut, 0.0, opts);
}

}  // namespace superres

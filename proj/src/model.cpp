#include "superres/model.hpp"

#include <algorithm>
#include <cmath>

namespace superres {

LowPassData forward_measure(const SpikeTrain& x, const ProblemConfig& cfg) {
  x.validate();
  LowPassData out;
  out.f_cut = cfg.f_cut;
  out.coeffs = CVec::Zero(cfg.n());
  for (int k = -cfg.f_cut; k <= cfg.f_cut; ++k) {
    cplx acc(0.0, 0.0);
    for (size_t j = 0; j < x.size(); ++j)
      acc += x.amplitudes[j] * std::polar(1.0, -kTwoPi * k * x.support[j]);
    out.coeffs(k + cfg.f_cut) = acc;
  }
  return out;
}

MultiLowPassData forward_measure(const MultiSpikeTrain& x, const ProblemConfig& cfg) {
  x.validate();
  MultiLowPassData out;
  out.f_cut = cfg.f_cut;
  const int m = static_cast<int>(x.amplitudes.cols());
  out.coeffs = CMat::Zero(cfg.n(), m);
  CMat ft = fourier_matrix(x.support, cfg);
  out.coeffs = ft * x.amplitudes;
  return out;
}

cplx adjoint_poly_eval(const CVec& c, double t, const ProblemConfig& cfg) {
  if (c.size() != cfg.n()) throw std::invalid_argument("adjoint_poly_eval: length mismatch");
  cplx acc(0.0, 0.0);
  for (int k = -cfg.f_cut; k <= cfg.f_cut; ++k)
    acc += c(k + cfg.f_cut) * std::polar(1.0, kTwoPi * k * t);
  return acc;
}

cplx adjoint_poly_deriv(const CVec& c, double t, const ProblemConfig& cfg, int order) {
  if (c.size() != cfg.n()) throw std::invalid_argument("adjoint_poly_deriv: length mismatch");
  if (order < 0 || order > 3) throw std::invalid_argument("adjoint_poly_deriv: order must be 0..3");
  cplx acc(0.0, 0.0);
  for (int k = -cfg.f_cut; k <= cfg.f_cut; ++k) {
    cplx term = c(k + cfg.f_cut) * std::polar(1.0, kTwoPi * k * t);
    cplx iw(0.0, kTwoPi * k);
    for (int d = 0; d < order; ++d) term *= iw;
    acc += term;
  }
  return acc;
}

Separation min_separation(const std::vector<double>& support) {
  for (double t : support)
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("min_separation: position outside [0,1)");
  if (support.size() < 2) return Separation{};
  std::vector<double> s = support;
  std::sort(s.begin(), s.end());
  double best = 1.0 - (s.back() - s.front());  // wrap gap
  for (size_t i = 0; i + 1 < s.size(); ++i) best = std::min(best, s[i + 1] - s[i]);
  return Separation{best};
}

namespace {

// Power-series evaluation of K and derivatives around t = 0. Series in
// x = t^2 obtained by dividing the sin(N pi t) series by the sin(pi t)
// series; used where the closed-form quotient loses accuracy.
void dirichlet_series(double N, double t, double out[4]) {
  constexpr int M = 6;
  double p[M + 1], q[M + 1], kcoef[M + 1];
  double pw_n = 1.0, pw_1 = 1.0;  // (N pi)^{2m}, (pi)^{2m}
  double fact = 1.0;              // (2m+1)!
  double sign = 1.0;
  for (int m = 0; m <= M; ++m) {
    p[m] = sign * pw_n / fact;
    q[m] = sign * pw_1 / fact;
    sign = -sign;
    pw_n *= (N * kPi) * (N * kPi);
    pw_1 *= kPi * kPi;
    fact *= (2.0 * m + 2.0) * (2.0 * m + 3.0);
  }
  for (int m = 0; m <= M; ++m) {
    double acc = p[m];
    for (int i = 1; i <= m; ++i) acc -= q[i] * kcoef[m - i];
    kcoef[m] = acc;
  }
  double x = t * t;
  double v0 = 0, v1 = 0, v2 = 0, v3 = 0;
  double xp = 1.0;  // t^{2m-3} scaling handled per term below
  for (int m = 0; m <= M; ++m) {
    double e = 2.0 * m;
    v0 += kcoef[m] * xp;                                      // t^{2m}
    if (m >= 1) v1 += kcoef[m] * e * xp / t;                  // t^{2m-1}
    if (m >= 1) v2 += kcoef[m] * e * (e - 1.0) * xp / x;      // t^{2m-2}
    if (m >= 2) v3 += kcoef[m] * e * (e - 1.0) * (e - 2.0) * xp / (x * t);
    xp *= x;
  }
  if (t == 0.0) {  // limits: odd orders vanish
    v1 = 0.0;
    v2 = 2.0 * kcoef[1];
    v3 = 0.0;
  }
  out[0] = v0;
  out[1] = v1;
  out[2] = v2;
  out[3] = v3;
}

}  // namespace

double dirichlet_eval(double f, double t, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("dirichlet_eval: order must be 0..3");
  if (f < 1.0) throw std::invalid_argument("dirichlet_eval: f must be >= 1");
  if (!(t > -0.5 - 1e-15 && t <= 0.5 + 1e-15))
    throw std::invalid_argument("dirichlet_eval: t outside (-1/2, 1/2]");
  const double N = 2.0 * f + 1.0;
  double vals[4];
  if (std::abs(N * kPi * t) < 0.3) {
    dirichlet_series(N, t, vals);
    return vals[order];
  }
  const double su = std::sin(kPi * t);
  const double cu = std::cos(kPi * t);
  const double cot = cu / su;
  const double K0 = std::sin(N * kPi * t) / (N * su);
  if (order == 0) return K0;
  const double K1 = kPi * (std::cos(N * kPi * t) - K0 * cu) / su;
  if (order == 1) return K1;
  const double K2 = -kPi * kPi * K0 * (N * N - 1.0) - 2.0 * kPi * K1 * cot;
  if (order == 2) return K2;
  return -kPi * kPi * K1 * (N * N - 3.0) - 2.0 * kPi * cot * (K2 - kPi * K1 * cot);
}

CVec toeplitz_adjoint(const CMat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("toeplitz_adjoint: matrix must be square");
  const Eigen::Index n = M.rows();
  CVec out(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    cplx acc(0.0, 0.0);
    for (Eigen::Index i = 0; i + d < n; ++i) acc += M(i, i + d);
    out(d) = acc;
  }
  return out;
}

CMat toeplitz_from_first_row(const CVec& u) {
  const Eigen::Index n = u.size();
  CMat T(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      T(i, j) = (j >= i) ? u(j - i) : std::conj(u(i - j));
  return T;
}

CMat fourier_matrix(const std::vector<double>& support, const ProblemConfig& cfg) {
  CMat F(cfg.n(), static_cast<Eigen::Index>(support.size()));
  for (size_t j = 0; j < support.size(); ++j)
    for (int k = -cfg.f_cut; k <= cfg.f_cut; ++k)
      F(k + cfg.f_cut, static_cast<Eigen::Index>(j)) = std::polar(1.0, -kTwoPi * k * support[j]);
  return F;
}

}  // namespace superres

#include "superres/certificate.hpp"

#include <cmath>

#include "superres/kernel.hpp"
#include "superres/model.hpp"

namespace superres {

namespace {

// J_{2,R}^near uses the printed lower kernel bound; the companion constant
// keeps the l=1 start of the accumulation sums, both matching the published
// verification run.
constexpr bool kNearBranchUsesUpperB2 = false;

double matrix_inf_norm(const RMat& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).lpNorm<1>());
  return best;
}

double pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    default: return "INCONCLUSIVE";
  }
}

InterpolationSystem build_system(const std::vector<double>& support, const KernelSpec& spec,
                                 double tau_min) {
  spec.validate();
  if (!min_separation(support).at_least(tau_min / spec.f_cut))
    throw std::invalid_argument("build_system: support violates the minimum separation");
  const int n = static_cast<int>(support.size());
  InterpolationSystem sys;
  sys.spec = spec;
  sys.support = support;
  sys.d0.resize(n, n);
  sys.d1.resize(n, n);
  sys.d2.resize(n, n);
  for (int j = 0; j < n; ++j) {
    sys.d0(j, j) = 1.0;
    sys.d1(j, j) = 0.0;
    sys.d2(j, j) = kgamma_eval(spec, 0.0, 2);
    for (int k = j + 1; k < n; ++k) {
      const double d = support[j] - support[k];
      sys.d0(j, k) = sys.d0(k, j) = kgamma_eval(spec, d, 0);
      const double d1 = kgamma_eval(spec, d, 1);
      sys.d1(j, k) = d1;
      sys.d1(k, j) = -d1;  // odd derivative
      sys.d2(j, k) = sys.d2(k, j) = kgamma_eval(spec, d, 2);
    }
  }
  return sys;
}

CertificateCoefficients solve_coefficients(const InterpolationSystem& sys, const SignPattern& v) {
  v.validate();
  const int n = static_cast<int>(sys.support.size());
  if (static_cast<int>(v.values.size()) != n)
    throw std::invalid_argument("solve_coefficients: sign pattern length mismatch");
  const double fc = sys.spec.f_cut;
  // normalized system for conditioning: D~_l = D_l / f_c^l, beta~ = f_c beta
  RMat d1n = sys.d1 / fc;
  RMat d2n = sys.d2 / (fc * fc);
  Eigen::PartialPivLU<RMat> d2lu(d2n);
  RMat d2inv_d1 = d2lu.solve(d1n);
  RMat schur = sys.d0 - d1n * d2inv_d1;
  RMat eye = RMat::Identity(n, n);
  if (matrix_inf_norm(eye - schur) >= 1.0)
    throw std::runtime_error(
        "solve_coefficients: ||I - Schur|| >= 1; separation too small for the bound machinery");
  Eigen::PartialPivLU<RMat> schur_lu(schur);
  CVec vv(n);
  for (int i = 0; i < n; ++i) vv(i) = v.values[i];
  RVec vre = vv.real(), vim = vv.imag();
  RVec are = schur_lu.solve(vre), aim = schur_lu.solve(vim);
  RVec bre = -d2inv_d1 * are, bim = -d2inv_d1 * aim;
  CertificateCoefficients out;
  out.alpha.resize(n);
  out.beta.resize(n);
  for (int i = 0; i < n; ++i) {
    out.alpha(i) = cplx(are(i), aim(i));
    out.beta(i) = cplx(bre(i), bim(i)) / fc;
  }
  return out;
}

cplx eval_certificate(const CertificateCoefficients& coeffs, const std::vector<double>& support,
                      const KernelSpec& spec, double t, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("eval_certificate: order must be 0..2");
  if (coeffs.alpha.size() != static_cast<Eigen::Index>(support.size()))
    throw std::invalid_argument("eval_certificate: coefficient/support size mismatch");
  cplx acc(0.0, 0.0);
  for (size_t j = 0; j < support.size(); ++j) {
    const double d = t - support[j];
    acc += coeffs.alpha(j) * kgamma_eval(spec, d, order) +
           coeffs.beta(j) * kgamma_eval(spec, d, order + 1);
  }
  return acc;
}

namespace {

struct RegimeInputs {
  const KernelBounds* kb;
  std::shared_ptr<const KernelSumTable> table;
  double eps;
  double a_hi, a_im, a_lo, b_hi;  // alpha^U, alpha_I^U, alpha_R^L, beta^U (lambda_c units)
};

// G_{l,j,eps}(a1,a2) = a1 B^inf(j eps, eps) + a2 (H_l(-(j+1)eps) + H_l((j+1)eps))
struct CellBounds {
  double binf[4];
  double hsum[4];  // H_l(-(j+1)eps) + H_l((j+1)eps)
  double b0_lo, b2_lo, b2_hi;
};

CellBounds cell_bounds(const RegimeInputs& in, long j) {
  CellBounds c;
  Interval iv[4];
  in.kb->near_scaled_all(j * in.eps, iv);
  double dev = kTwoPi * in.eps;
  for (int l = 0; l < 4; ++l) {
    c.binf[l] = std::max(std::abs(iv[l].lo), std::abs(iv[l].hi)) + dev;
    dev *= kTwoPi;
    c.hsum[l] = in.table->h_minus(l, j + 1) + in.table->h_plus(l, j + 1);
  }
  c.b0_lo = iv[0].lo;
  c.b2_lo = iv[2].lo;
  c.b2_hi = iv[2].hi;
  return c;
}

double g_term(const CellBounds& c, int l, double a1, double a2) {
  return a1 * c.binf[l] + a2 * c.hsum[l];
}

// bound on (|q|^2)'' / f_c^2 over cell j, following Eq. (F2j) as printed
double second_derivative_bound(const RegimeInputs& in, const CellBounds& c, long j) {
  const double dev3 = kTwoPi * kTwoPi * kTwoPi * in.eps;
  const double g1b = g_term(c, 1, in.b_hi, in.b_hi);
  const double g2b = g_term(c, 2, in.b_hi, in.b_hi);
  const double g3b = g_term(c, 3, in.b_hi, in.b_hi);
  const double j0i = g_term(c, 0, in.a_im, in.a_hi) + g1b;
  const double j1 = g_term(c, 1, in.a_hi, in.a_hi) + g2b;
  const double j2i = g_term(c, 2, in.a_im, in.a_hi) + g3b;
  if (c.b2_hi < 0.0) {
    const double j0r_lo = in.a_lo * (c.b0_lo - kTwoPi * in.eps) - in.a_hi * c.hsum[0] - g1b;
    const double b2 = kNearBranchUsesUpperB2 ? c.b2_hi : c.b2_lo;
    const double j2r_near = in.a_lo * (b2 + dev3) + in.a_hi * c.hsum[2] + g3b;
    return 2.0 * (j2r_near * j0r_lo + j2i * j0i + j1 * j1);
  }
  const double j0r = g_term(c, 0, in.a_hi, in.a_hi) + g1b;
  const double j2r = g_term(c, 2, in.a_hi, in.a_hi) + g3b;
  return 2.0 * (j2r * j0r + j2i * j0i + j1 * j1);
}

}  // namespace

CertificateReport run_certification(const CertificationConfig& cfg) {
  CertificateReport rep;
  rep.config = cfg;
  KernelBounds kb(cfg.spec);
  const double eps = cfg.eps;
  const double half = cfg.tau_min / 2.0;
  auto table = kernel_sum_table(cfg.spec, cfg.tau_min, eps, half + eps, cfg.threads);

  ConstantsReport& cst = rep.constants;
  for (int l = 0; l < 4; ++l) {
    const double h2 = table->h_plus(l, 0) + table->h_minus(l, 0);
    (l == 0 ? cst.two_h0 : l == 1 ? cst.two_h1 : l == 2 ? cst.two_h2 : cst.two_h3) = h2;
  }
  cst.b2_origin = -kb.second_deriv_origin_scaled();
  cst.invertible = cst.two_h2 < cst.b2_origin;
  if (cst.invertible) {
    cst.d2_inv_bound = 1.0 / (cst.b2_origin - cst.two_h2);
    cst.schur_bound = cst.two_h0 + cst.two_h1 * cst.two_h1 * cst.d2_inv_bound;
    cst.invertible = cst.schur_bound < 1.0;
  }
  if (!cst.invertible) {
    rep.verdict = Verdict::kFail;
    rep.near.verdict = rep.mid.verdict = rep.far.verdict = Verdict::kFail;
    return rep;
  }
  cst.alpha_hi = 1.0 / (1.0 - cst.schur_bound);
  cst.alpha_im_hi = cst.alpha_hi - 1.0;
  cst.alpha_re_lo = 2.0 - cst.alpha_hi;
  cst.beta_hi = cst.d2_inv_bound * cst.two_h1 * cst.alpha_hi;

  RegimeInputs in{&kb, table, eps, cst.alpha_hi, cst.alpha_im_hi, cst.alpha_re_lo, cst.beta_hi};

  // ---- near regime: curvature negativity + accumulated F bound ----
  NearReport& nr = rep.near;
  const long j_near = std::lround(cfg.near_end / eps);
  std::vector<double> f2(j_near + 1);
  for (long j = 0; j <= j_near; ++j) f2[j] = second_derivative_bound(in, cell_bounds(in, j), j);
  nr.f20 = f2[0];
  long cells_neg = 0;  // leading run of cells with negative curvature bound
  while (cells_neg <= j_near && f2[cells_neg] < 0.0) ++cells_neg;
  nr.neg_cover = cells_neg * eps;
  nr.neg_ok = nr.neg_cover >= cfg.neg_end - 1e-12;
  rep.quad_radius = nr.neg_cover;

  // accumulation of Lemma bound_2der, inner sums starting at l = 1
  double A = 0.0, S1 = 0.0, S0 = 0.0;
  double fmax_uncovered = -1e300;
  bool covered = f2[0] < 0.0;
  for (long k = 1; k <= j_near; ++k) {
    A += S1 + pos(f2[k - 1]);
    if (k - 1 >= 1) S1 += f2[k - 1];
    S0 += f2[k - 1];
    const double fk = 1.0 + eps * eps * (A + pos(S0 + pos(f2[k])));
    const bool neg_covered = k < cells_neg;  // cell k inside the concave run
    if (!neg_covered) {
      fmax_uncovered = std::max(fmax_uncovered, fk);
      if (fk >= 1.0) covered = false;
    }
  }
  nr.finf_max = fmax_uncovered;
  nr.finf_margin = 1.0 - fmax_uncovered;
  nr.covered = covered;
  nr.verdict = (covered && nr.neg_ok) ? Verdict::kPass : Verdict::kInconclusive;

  // ---- mid regime: triangle-inequality bound per cell ----
  MidReport& mr = rep.mid;
  {
    const long j_lo = std::lround(cfg.near_end / eps);
    const long j_hi = static_cast<long>(std::ceil(half / eps - 1e-9));
    double best = -1e300, arg = 0.0;
    for (long j = j_lo; j < j_hi; ++j) {
      CellBounds c = cell_bounds(in, j);
      const double q = g_term(c, 0, in.a_hi, in.a_hi) + g_term(c, 1, in.b_hi, in.b_hi);
      if (q > best) {
        best = q;
        arg = j * eps;
      }
    }
    mr.max_bound = best;
    mr.argmax = arg;
    mr.verdict = best < 1.0 ? Verdict::kPass : Verdict::kInconclusive;
  }

  // ---- far regime: gap wider than the minimum separation ----
  FarReport& fr = rep.far;
  {
    const double gm0 = grid_max_bound_inf(kb, half, 2.0 * cfg.tau_min, eps, 0, cfg.threads);
    const double gm1 = grid_max_bound_inf(kb, half, 2.0 * cfg.tau_min, eps, 1, cfg.threads);
    const double h0 = table->h(0, half) + table->h_plus(0, 0);
    const double h1 = table->h(1, half) + table->h_plus(1, 0);
    fr.max_bound =
        in.a_hi * (std::max(gm0, kb.tail_any_scaled(2.0 * cfg.tau_min, 0)) + h0) +
        in.b_hi * (std::max(gm1, kb.tail_any_scaled(2.0 * cfg.tau_min, 1)) + h1);
    fr.verdict = fr.max_bound < 1.0 ? Verdict::kPass : Verdict::kInconclusive;
  }

  rep.verdict = (nr.verdict == Verdict::kPass && mr.verdict == Verdict::kPass &&
                 fr.verdict == Verdict::kPass)
                    ? Verdict::kPass
                    : Verdict::kInconclusive;
  return rep;
}

}  // namespace superres

#include "superres/kernel.hpp"

#include <cmath>

#include "superres/model.hpp"

namespace superres {

void KernelSpec::validate() const {
  if (gamma.empty()) throw std::invalid_argument("KernelSpec: no weights");
  double s = 0.0;
  for (double g : gamma) {
    if (!(g > 0.0)) throw std::invalid_argument("KernelSpec: weights must be positive");
    s += g;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("KernelSpec: weights must sum to 1");
  if (!(f_min >= 1.0)) throw std::invalid_argument("KernelSpec: f_min must be >= 1");
  if (!(f_cut >= f_min)) throw std::invalid_argument("KernelSpec: f_cut must be >= f_min");
  // Appendix side conditions used by the third-derivative bounds.
  for (double g : gamma) {
    if (g < 1.0 / (32.0 * f_min) || g < 1.0 / (2.0 * f_min * f_min))
      throw std::invalid_argument("KernelSpec: weight too small for the bound machinery");
  }
}

double kgamma_eval(const KernelSpec& spec, double t, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("kgamma_eval: order must be 0..3");
  spec.validate();
  // wrap to (-1/2, 1/2]
  t -= std::round(t);
  const int p = spec.p();
  // per-factor values K^{(l)}(gamma_i f_c, t), l = 0..order
  std::vector<std::array<double, 4>> v(p);
  for (int i = 0; i < p; ++i)
    for (int l = 0; l <= order; ++l) v[i][l] = dirichlet_eval(spec.gamma[i] * spec.f_cut, t, l);

  if (order == 0) {
    double prod = 1.0;
    for (int i = 0; i < p; ++i) prod *= v[i][0];
    return prod;
  }
  auto prod0_except = [&](int a, int b, int c) {
    double prod = 1.0;
    for (int i = 0; i < p; ++i)
      if (i != a && i != b && i != c) prod *= v[i][0];
    return prod;
  };
  if (order == 1) {
    double acc = 0.0;
    for (int i = 0; i < p; ++i) acc += v[i][1] * prod0_except(i, -1, -1);
    return acc;
  }
  if (order == 2) {
    double acc = 0.0;
    for (int i = 0; i < p; ++i) acc += v[i][2] * prod0_except(i, -1, -1);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (j != i) acc += v[i][1] * v[j][1] * prod0_except(i, j, -1);
    return acc;
  }
  double acc = 0.0;
  for (int i = 0; i < p; ++i) acc += v[i][3] * prod0_except(i, -1, -1);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (j != i) acc += 3.0 * v[i][2] * v[j][1] * prod0_except(i, j, -1);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        if (j != i && k != i && k != j)
          acc += v[i][1] * v[j][1] * v[k][1] * prod0_except(i, j, k);
  return acc;
}

double kgamma_eval_scaled(const KernelSpec& spec, double tau, int order) {
  return kgamma_eval(spec, tau / spec.f_cut, order) / std::pow(spec.f_cut, order);
}

}  // namespace superres

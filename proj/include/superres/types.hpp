#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace superres {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wrap-around distance on the circle [0,1). All circular arithmetic in the
/// library goes through this helper.
inline double wrap_dist(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

/// Reduce a position to [0,1).
inline double wrap_pos(double t) {
  double r = t - std::floor(t);
  return (r == 1.0) ? 0.0 : r;
}

// Cut-off frequency and derived quantities. n = 2 f_cut + 1 Fourier
// coefficients, indexed k = -f_cut .. f_cut ascending. lambda_c = 1/f_cut is
// the resolution unit.
struct ProblemConfig {
  int f_cut = 0;

  explicit ProblemConfig(int fc) : f_cut(fc) {
    if (fc <= 0) throw std::invalid_argument("f_cut must be a positive integer");
  }
  int n() const { return 2 * f_cut + 1; }
  double lambda_c() const { return 1.0 / f_cut; }
};

// Atomic measure on the circle: sum_j a_j deltaـ{t_j}. Supports must be
// distinct points of [0,1).
struct SpikeTrain {
  std::vector<double> support;
  std::vector<cplx> amplitudes;

  size_t size() const { return support.size(); }
  void validate() const {
    if (support.size() != amplitudes.size())
      throw std::invalid_argument("support/amplitude length mismatch");
    for (double t : support)
      if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("support point outside [0,1)");
    for (size_t i = 0; i < support.size(); ++i)
      for (size_t j = i + 1; j < support.size(); ++j)
        if (support[i] == support[j]) throw std::invalid_argument("duplicate support point");
  }
};

// Vector of n low-pass Fourier coefficients, k ascending from -f_cut.
struct LowPassData {
  int f_cut = 0;
  CVec coeffs;

  void validate() const {
    if (coeffs.size() != 2 * f_cut + 1)
      throw std::invalid_argument("LowPassData: coefficient count != 2 f_cut + 1");
  }
};

// Column k holds the low-pass coefficients of signal k.
struct MultiLowPassData {
  int f_cut = 0;
  CMat coeffs;  // n x m

  int m() const { return static_cast<int>(coeffs.cols()); }
  void validate() const {
    if (coeffs.rows() != 2 * f_cut + 1)
      throw std::invalid_argument("MultiLowPassData: row count != 2 f_cut + 1");
    if (coeffs.cols() < 1) throw std::invalid_argument("MultiLowPassData: needs m >= 1");
  }
};

// Shared support, |T| x m amplitude matrix (row j = source j across signals).
struct MultiSpikeTrain {
  std::vector<double> support;
  CMat amplitudes;

  void validate() const {
    if (static_cast<Eigen::Index>(support.size()) != amplitudes.rows())
      throw std::invalid_argument("MultiSpikeTrain: support/amplitude rows mismatch");
    for (Eigen::Index j = 0; j < amplitudes.rows(); ++j)
      if (amplitudes.row(j).norm() == 0.0)
        throw std::invalid_argument("MultiSpikeTrain: all-zero amplitude row");
  }
};

// Unit-modulus sign pattern, one entry per support point.
struct SignPattern {
  std::vector<cplx> values;

  void validate(double tol = 1e-9) const {
    for (const cplx& v : values)
      if (std::abs(std::abs(v) - 1.0) > tol)
        throw std::invalid_argument("SignPattern entries must have unit modulus");
  }
};

// Minimum separation result: distance, or "infinite" when fewer than two
// points exist. Kept as an explicit tag, never an IEEE infinity.
struct Separation {
  std::optional<double> value;

  bool infinite() const { return !value.has_value(); }
  bool at_least(double d) const { return infinite() || *value >= d; }
};

}  // namespace superres

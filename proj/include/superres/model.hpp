#pragma once

#include "superres/types.hpp"

namespace superres {

/// Low-pass measurement operator: coeffs[k] = sum_j a_j exp(-i 2 pi k t_j),
/// k = -f_cut .. f_cut. Empty spike train maps to the zero vector.
LowPassData forward_measure(const SpikeTrain& x, const ProblemConfig& cfg);

/// Column-wise forward_measure for a shared-support signal matrix.
MultiLowPassData forward_measure(const MultiSpikeTrain& x, const ProblemConfig& cfg);

/// Adjoint polynomial (F_n^* c)(t) = sum_{|k|<=f_cut} c_k exp(i 2 pi k t).
cplx adjoint_poly_eval(const CVec& c, double t, const ProblemConfig& cfg);

/// Derivative of order `order` (0..3) of the adjoint polynomial at t.
cplx adjoint_poly_deriv(const CVec& c, double t, const ProblemConfig& cfg, int order);

/// Minimum pairwise wrap-around distance; infinite sentinel for < 2 points.
Separation min_separation(const std::vector<double>& support);

/// Dirichlet kernel K(f,t) = sin((2f+1) pi t) / ((2f+1) sin(pi t)) and
/// derivatives of order 0..3. Real-valued f >= 1 supported (the bound
/// machinery evaluates K(gamma_j f_c, .) at non-integer bandwidths).
double dirichlet_eval(double f, double t, int order);

/// Toeplitz adjoint: component j (1-based j in the paper; 0-based here) is
/// the sum of the j-th superdiagonal of M.
CVec toeplitz_adjoint(const CMat& M);

/// Hermitian Toeplitz matrix with first row u (u[0] must be real).
CMat toeplitz_from_first_row(const CVec& u);

/// Partial Fourier matrix F_T: (F_T)_{kj} = exp(-i 2 pi k t_j), rows
/// k = -f_cut..f_cut, one column per support point.
CMat fourier_matrix(const std::vector<double>& support, const ProblemConfig& cfg);

}  // namespace superres

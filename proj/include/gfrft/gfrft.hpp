#pragma once

#include <variant>

#include "gfrft/graph.hpp"
#include "gfrft/linalg.hpp"
#include "gfrft/types.hpp"

namespace gfrft {

// Graph Fourier basis of a symmetric shift: shift = U diag(eigenvalues) U^H
// with eigenvalues ascending; the transform matrix is U^H.
struct GftBasis {
  ShiftOperator shift;
  RVector eigenvalues;
  CMatrix vectors;  // U, orthonormal columns
  CMatrix gft_matrix() const { return vectors.adjoint(); }
};

GftBasis gft_basis(const ShiftOperator& shift);

// Spectral factors of the transform matrix, U^H = Q diag(lambda) Q^H with
// |lambda| = 1, shared by every fractional order on the same graph.
struct GfrftPlan {
  GftBasis basis;
  EigenPair spectrum;  // Q and lambda, ordered by principal argument
};

GfrftPlan gfrft_plan(GftBasis basis);

// Fractional transform of one order. forward = Q diag(lambda^alpha) Q^H is
// unitary, so the inverse is its adjoint; alpha = 0 gives the identity and
// alpha = 1 the plain transform U^H. shift_eigenvalues is carried along for
// the spectral constructions below.
struct GfrftOperator {
  double alpha = 0.0;
  CMatrix forward;
  RVector shift_eigenvalues;
  Index n() const { return forward.rows(); }
  CMatrix inverse() const { return forward.adjoint(); }
};

GfrftOperator gfrft_operator(const GfrftPlan& plan, double alpha);
GfrftOperator gfrft_operator(const GftBasis& basis, double alpha);

CVector gfrft_forward(const GfrftOperator& op, const CVector& x);
CVector gfrft_inverse(const GfrftOperator& op, const CVector& xhat);

// diag(1_S): Hermitian and idempotent exactly.
CMatrix vertex_projector(const IndexSet& s);

// F^{-alpha} diag(1_F) F^alpha: orthogonal projector onto the span of the
// fractional frequencies in `band`.
CMatrix band_projector(const GfrftOperator& op, const IndexSet& band);

// ||B D||_2. Equal to 1 exactly when some signal is perfectly localized on
// both the vertex set behind D and the band behind B.
double perfect_localization_gap(const CMatrix& vertex_proj, const CMatrix& band_proj);

// 1 - ||B (I - D)||_2. Positive margin means every band-limited signal is
// recoverable from its samples on the vertex set behind D.
double recoverability_margin(const CMatrix& vertex_proj, const CMatrix& band_proj);

// F^{-alpha} diag(delta^alpha) F^alpha: fractional power of the shift in the
// fractional domain. Requires alpha > 0 when some shift eigenvalue is zero
// (BranchPole otherwise).
CMatrix fractional_shift(const GfrftOperator& op);

// F^{-alpha} diag((delta^alpha)^power) F^alpha: integer power taken on the
// diagonal, so no repeated matrix products.
CMatrix fractional_shift_power(const GfrftOperator& op, int power);

// Gram of the k-th fractional shift power: ((L^alpha)^k)^H (L^alpha)^k =
// F^{-alpha} diag(|delta|^{2 k alpha}) F^alpha. Hermitian positive
// semidefinite for any shift; equal to (L^alpha)^{2k} whenever delta^alpha is
// real nonnegative (e.g. a Laplacian shift).
CMatrix fractional_shift_power_gram(const GfrftOperator& op, int k);

// Band-pass kernels applied to the fractional shift spectrum delta^alpha.
// Ideal keeps the listed frequency indices; PolyLowpass evaluates
// (1 - x / x_max)^degree on real x = delta^alpha.
struct IdealKernel {
  IndexSet band;
};
struct PolyLowpassKernel {
  int degree = 5;
};
using Kernel = std::variant<IdealKernel, PolyLowpassKernel>;

// T = F^{-alpha} diag(h) F^alpha, Hermitian by construction (symmetrized to
// kill rounding). With an Ideal kernel this is exactly the band projector.
struct LocalizationOperator {
  double alpha = 0.0;
  RVector kernel_values;  // h per fractional frequency
  CMatrix matrix;
  Index n() const { return matrix.rows(); }
};

LocalizationOperator localization_operator(const GfrftOperator& op, const Kernel& kernel);

// Smallest eigenvalue of the k-th shift power Gram restricted to the
// complement of S: omega = lambda_min^{1/(2k)}, together with the minimizing
// vector and its zero-padding to the full graph. S = V returns +infinity.
struct CutoffFrequency {
  double omega = 0.0;
  CVector minimizer;    // length n - |S|
  CVector zero_padded;  // length n, supported on the complement of S
};

CutoffFrequency cutoff_frequency(const GfrftOperator& op, const IndexSet& s, int k);

}  // namespace gfrft

#pragma once

#include "gfrft/types.hpp"

namespace gfrft {

// Eigendecomposition of a Hermitian matrix (||M - M^H||_F <= 1e-10 ||M||_F
// required). values are real with ascending order and exactly zero imaginary
// part; vectors are orthonormal, phase-fixed. Small problems run a cyclic
// complex Jacobi iteration (off-diagonal Frobenius mass below 1e-12 ||M||_F,
// at most 100 sweeps); larger ones delegate to Eigen's solver. Both paths end
// in the same ordering/phase convention, so repeated calls are idempotent.
// Throws NonHermitian, NoConvergence.
EigenPair hermitian_eig(const CMatrix& m);
EigenPair hermitian_eig(const RMatrix& m);  // real symmetric shortcut

// Spectral decomposition of a unitary matrix through the commuting Hermitian
// pair H1 = (M + M^H)/2, H2 = (M - M^H)/(2i): diagonalize H1, then H2
// restricted to each H1 eigenspace (eigenvalues grouped at relative gap
// 1e-8). values lie on the unit circle (|1 - |v|| <= 1e-9) and are sorted by
// ascending principal argument in (-pi, pi]. Throws NonUnitary.
EigenPair unitary_eig(const CMatrix& m);

// m = left * diag(singular) * right^H with the diagonal padded to m's shape.
// singular is descending and nonnegative; left/right are unitary.
struct Svd {
  CMatrix left;
  RVector singular;
  CMatrix right;
};
Svd svd(const CMatrix& m);

double default_svd_rtol(Index rows, Index cols);

// Moore-Penrose pseudo-inverse: singular values <= rtol * sigma_max are
// treated as zero. rtol < 0 selects the default max(rows, cols) * eps.
CMatrix pinv(const CMatrix& m, double rtol = -1.0);

// Largest singular value.
double spectral_norm(const CMatrix& m);

// Principal-branch fractional power per entry: v^alpha with
// Log v = ln|v| + i arg(v), arg in (-pi, pi], so (-1)^alpha = e^{i pi alpha}.
// 0^alpha = 0 for alpha > 0; a zero entry with alpha <= 0 throws BranchPole.
CVector fractional_power_diag(const CVector& values, double alpha);

}  // namespace gfrft

#include "gfrft/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Jacobi>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gfrft/rng.hpp"

namespace gfrft {
namespace {

// Above this size a Jacobi sweep's Theta(n^3) cost stops being adequate on one
// core; Eigen's tridiagonalization solver takes over behind the same output
// convention, so callers cannot tell the paths apart except by speed.
constexpr Index kJacobiMaxDim = 160;
constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-12;

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Largest-magnitude entry of each column made real positive; lowest index
// wins exact magnitude ties. Zero columns stay untouched.
void fix_phases(CMatrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index best = 0;
    double mag = -1.0;
    for (Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > mag) {
        mag = a;
        best = i;
      }
    }
    if (mag > 0.0) {
      v.col(j) *= std::conj(v(best, j)) / mag;
      v(best, j) = Complex(std::abs(v(best, j)), 0.0);  // kill rounding residue
    }
  }
}

void sort_ascending(RVector& values, CMatrix& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  RVector sv(n);
  CMatrix sm(vectors.rows(), vectors.cols());
  for (Index k = 0; k < n; ++k) {
    sv(k) = values(order[static_cast<size_t>(k)]);
    sm.col(k) = vectors.col(order[static_cast<size_t>(k)]);
  }
  values.swap(sv);
  vectors.swap(sm);
}

EigenPair finish_hermitian(RVector values, CMatrix vectors) {
  sort_ascending(values, vectors);
  fix_phases(vectors);
  EigenPair out;
  out.values = values.cast<Complex>();  // imaginary parts exactly zero
  out.vectors = std::move(vectors);
  return out;
}

EigenPair jacobi_hermitian(const CMatrix& sym) {
  const Index n = sym.rows();
  CMatrix a = sym;
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = a.norm();
  if (scale == 0.0) return finish_hermitian(RVector::Zero(n), std::move(v));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kOffDiagTol * scale) {
      return finish_hermitian(a.diagonal().real(), std::move(v));
    }
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        Eigen::JacobiRotation<Complex> rot;
        if (!rot.makeJacobi(a, p, q)) continue;
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (off_diagonal_norm(a) > kOffDiagTol * scale) {
    throw NoConvergence("hermitian_eig: Jacobi sweep budget exhausted");
  }
  return finish_hermitian(a.diagonal().real(), std::move(v));
}

void check_square(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(who) + ": matrix not square");
  }
}

}  // namespace

EigenPair hermitian_eig(const CMatrix& m) {
  check_square(m, "hermitian_eig");
  if ((m - m.adjoint()).norm() > 1e-10 * m.norm()) {
    throw NonHermitian("hermitian_eig: input is not Hermitian");
  }
  const CMatrix sym = (m + m.adjoint()) / 2.0;
  if (m.rows() <= kJacobiMaxDim) return jacobi_hermitian(sym);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("hermitian_eig: solver did not converge");
  }
  return finish_hermitian(es.eigenvalues(), es.eigenvectors());
}

EigenPair hermitian_eig(const RMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("hermitian_eig: matrix not square");
  }
  if ((m - m.transpose()).norm() > 1e-10 * m.norm()) {
    throw NonHermitian("hermitian_eig: input is not symmetric");
  }
  const RMatrix sym = (m + m.transpose()) / 2.0;
  if (m.rows() <= kJacobiMaxDim) return jacobi_hermitian(sym.cast<Complex>());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("hermitian_eig: solver did not converge");
  }
  return finish_hermitian(es.eigenvalues(), es.eigenvectors().cast<Complex>());
}

EigenPair unitary_eig(const CMatrix& m) {
  check_square(m, "unitary_eig");
  const Index n = m.rows();
  if (n == 0) return {CVector(0), CMatrix(0, 0)};

  const double tol = 1e-8 * static_cast<double>(n);
  if (n <= 512) {
    if ((m.adjoint() * m - CMatrix::Identity(n, n)).norm() > tol) {
      throw NonUnitary("unitary_eig: M^H M deviates from identity");
    }
  } else {
    // The full Gram check is an n^3 matmul; fixed probe vectors catch gross
    // non-unitarity at n^2 cost.
    rng::SplitMix64 g(0x636865636bULL);
    for (int t = 0; t < 3; ++t) {
      CVector x(n);
      for (Index i = 0; i < n; ++i) x(i) = Complex(g.gaussian(), g.gaussian());
      if ((m.adjoint() * (m * x) - x).norm() > tol * x.norm()) {
        throw NonUnitary("unitary_eig: M^H M deviates from identity");
      }
    }
  }

  const CMatrix h1 = (m + m.adjoint()) / 2.0;
  const CMatrix h2 = (m - m.adjoint()) / Complex(0.0, 2.0);

  EigenPair e1 = hermitian_eig(h1);
  const RVector mu = e1.values.real();
  CMatrix vectors = std::move(e1.vectors);

  // H2 splits each (numerically) repeated H1 eigenspace; conjugate pairs
  // e^{±i theta} share cos(theta) and are separated by their sines here.
  const double gap = 1e-8 * std::max(1.0, mu.cwiseAbs().maxCoeff());
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && mu(stop) - mu(stop - 1) <= gap) ++stop;
    const Index len = stop - start;
    if (len > 1) {
      const CMatrix w = vectors.middleCols(start, len);
      CMatrix k = w.adjoint() * h2 * w;
      k = (k + k.adjoint()) / 2.0;
      EigenPair e2 = hermitian_eig(k);
      vectors.middleCols(start, len) = w * e2.vectors;
    }
    start = stop;
  }

  const CMatrix mv = m * vectors;
  CVector values(n);
  for (Index j = 0; j < n; ++j) {
    values(j) = vectors.col(j).dot(mv.col(j));  // Rayleigh quotient v^H M v
  }

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::arg(values(a)) < std::arg(values(b));
  });
  CVector sv(n);
  CMatrix sm(n, n);
  for (Index k = 0; k < n; ++k) {
    sv(k) = values(order[static_cast<size_t>(k)]);
    sm.col(k) = vectors.col(order[static_cast<size_t>(k)]);
  }
  fix_phases(sm);

  for (Index j = 0; j < n; ++j) {
    if (std::abs(std::abs(sv(j)) - 1.0) > 1e-6) {
      throw NonUnitary("unitary_eig: eigenvalue left the unit circle");
    }
  }
  return {std::move(sv), std::move(sm)};
}

Svd svd(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

double default_svd_rtol(Index rows, Index cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

CMatrix pinv(const CMatrix& m, double rtol) {
  if (rtol < 0.0) rtol = default_svd_rtol(m.rows(), m.cols());
  if (m.rows() == 0 || m.cols() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<CMatrix> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = s.singularValues();
  const double cut = rtol * sv(0);
  RVector inv = RVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return s.matrixV() * inv.asDiagonal() * s.matrixU().adjoint();
}

double spectral_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> s(m);
  return s.singularValues()(0);
}

CVector fractional_power_diag(const CVector& values, double alpha) {
  CVector out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    Complex z = values(i);
    if (std::abs(z) == 0.0) {
      if (alpha > 0.0) {
        out(i) = Complex(0.0, 0.0);
        continue;
      }
      throw BranchPole("fractional_power_diag: 0 raised to alpha <= 0");
    }
    // Normalize a -0.0 imaginary part so negative reals take arg = +pi.
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    out(i) = std::exp(alpha * std::log(z));
  }
  return out;
}

}  // namespace gfrft

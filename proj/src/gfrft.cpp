#include "gfrft/gfrft.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "gfrft/errors.hpp"

namespace gfrft {
namespace {

// Average with the adjoint so downstream Hermitian solvers see an exactly
// symmetric matrix regardless of gemm kernel rounding.
CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

GftBasis gft_basis(const ShiftOperator& shift) {
  GftBasis b;
  b.shift = shift;
  const EigenPair e = hermitian_eig(shift.matrix);
  b.eigenvalues = e.values.real();
  b.vectors = e.vectors;
  if (shift.kind == ShiftKind::Laplacian && b.eigenvalues.size() > 0) {
    // A Laplacian is PSD by construction and its kernel is structural, so
    // rounding-scale eigenvalues are snapped to an exact zero; otherwise the
    // sign of the noise would decide branch poles of delta^alpha downstream.
    const double tol = default_svd_rtol(b.eigenvalues.size(), b.eigenvalues.size()) *
                       b.eigenvalues.cwiseAbs().maxCoeff();
    for (Index i = 0; i < b.eigenvalues.size(); ++i) {
      if (std::abs(b.eigenvalues(i)) <= tol) b.eigenvalues(i) = 0.0;
    }
  }
  return b;
}

GfrftPlan gfrft_plan(GftBasis basis) {
  GfrftPlan plan;
  plan.spectrum = unitary_eig(basis.gft_matrix());
  plan.basis = std::move(basis);
  return plan;
}

GfrftOperator gfrft_operator(const GfrftPlan& plan, double alpha) {
  if (!std::isfinite(alpha)) {
    throw InvalidArgument("gfrft_operator: alpha must be finite");
  }
  GfrftOperator op;
  op.alpha = alpha;
  const CVector powered = fractional_power_diag(plan.spectrum.values, alpha);
  op.forward = plan.spectrum.vectors * powered.asDiagonal() *
               plan.spectrum.vectors.adjoint();
  op.shift_eigenvalues = plan.basis.eigenvalues;
  return op;
}

GfrftOperator gfrft_operator(const GftBasis& basis, double alpha) {
  return gfrft_operator(gfrft_plan(basis), alpha);
}

CVector gfrft_forward(const GfrftOperator& op, const CVector& x) {
  if (x.size() != op.n()) {
    throw DimensionMismatch("gfrft_forward: signal length does not match operator");
  }
  return op.forward * x;
}

CVector gfrft_inverse(const GfrftOperator& op, const CVector& xhat) {
  if (xhat.size() != op.n()) {
    throw DimensionMismatch("gfrft_inverse: spectrum length does not match operator");
  }
  return op.forward.adjoint() * xhat;
}

CMatrix vertex_projector(const IndexSet& s) {
  CMatrix d = CMatrix::Zero(s.universe(), s.universe());
  for (Index i = 0; i < s.size(); ++i) d(s[i], s[i]) = Complex(1.0, 0.0);
  return d;
}

CMatrix band_projector(const GfrftOperator& op, const IndexSet& band) {
  const Index n = op.n();
  if (band.universe() != n) {
    throw DimensionMismatch("band_projector: band universe does not match operator");
  }
  // B = sum over band rows f_k of f_k^H f_k = C^H C with C the band rows.
  CMatrix c(band.size(), n);
  for (Index k = 0; k < band.size(); ++k) c.row(k) = op.forward.row(band[k]);
  return hermitize(c.adjoint() * c);
}

double perfect_localization_gap(const CMatrix& vertex_proj, const CMatrix& band_proj) {
  if (vertex_proj.rows() != vertex_proj.cols() ||
      band_proj.rows() != band_proj.cols() ||
      vertex_proj.rows() != band_proj.rows()) {
    throw DimensionMismatch("perfect_localization_gap: projector shapes differ");
  }
  return spectral_norm(band_proj * vertex_proj);
}

double recoverability_margin(const CMatrix& vertex_proj, const CMatrix& band_proj) {
  if (vertex_proj.rows() != vertex_proj.cols() ||
      band_proj.rows() != band_proj.cols() ||
      vertex_proj.rows() != band_proj.rows()) {
    throw DimensionMismatch("recoverability_margin: projector shapes differ");
  }
  const CMatrix rest = CMatrix::Identity(vertex_proj.rows(), vertex_proj.cols()) -
                       vertex_proj;
  return 1.0 - spectral_norm(band_proj * rest);
}

CMatrix fractional_shift(const GfrftOperator& op) {
  const CVector d =
      fractional_power_diag(op.shift_eigenvalues.cast<Complex>().eval(), op.alpha);
  return op.forward.adjoint() * d.asDiagonal() * op.forward;
}

CMatrix fractional_shift_power(const GfrftOperator& op, int power) {
  const CVector d =
      fractional_power_diag(op.shift_eigenvalues.cast<Complex>().eval(), op.alpha);
  CVector dp(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    const Complex z = d(i);
    if (z == 0.0) {
      if (power > 0) {
        dp(i) = Complex(0.0, 0.0);
      } else if (power == 0) {
        dp(i) = Complex(1.0, 0.0);
      } else {
        throw BranchPole("fractional_shift_power: negative power of a zero eigenvalue");
      }
    } else {
      dp(i) = std::pow(z, static_cast<double>(power));
    }
  }
  return op.forward.adjoint() * dp.asDiagonal() * op.forward;
}

CMatrix fractional_shift_power_gram(const GfrftOperator& op, int k) {
  if (k < 1) {
    throw InvalidArgument("fractional_shift_power_gram: k must be >= 1");
  }
  const Index n = op.n();
  CVector g(n);
  for (Index i = 0; i < n; ++i) {
    g(i) = Complex(
        std::pow(std::abs(op.shift_eigenvalues(i)), 2.0 * k * op.alpha), 0.0);
  }
  return hermitize(op.forward.adjoint() * g.asDiagonal() * op.forward);
}

LocalizationOperator localization_operator(const GfrftOperator& op, const Kernel& kernel) {
  const Index n = op.n();
  LocalizationOperator t;
  t.alpha = op.alpha;
  RVector h(n);
  if (const auto* ideal = std::get_if<IdealKernel>(&kernel)) {
    if (ideal->band.universe() != n) {
      throw DimensionMismatch("localization_operator: band universe does not match");
    }
    h.setZero();
    for (Index i = 0; i < ideal->band.size(); ++i) h(ideal->band[i]) = 1.0;
  } else {
    const auto& poly = std::get<PolyLowpassKernel>(kernel);
    if (poly.degree < 0) {
      throw InvalidArgument("localization_operator: polynomial degree must be >= 0");
    }
    // The profile (1 - x / x_max)^degree needs a real nonnegative fractional
    // spectrum x = delta^alpha; any negative shift eigenvalue breaks that.
    if (op.shift_eigenvalues.minCoeff() < 0.0) {
      throw InvalidArgument(
          "localization_operator: PolyLowpass requires nonnegative shift eigenvalues");
    }
    RVector x(n);
    for (Index i = 0; i < n; ++i) {
      x(i) = std::pow(op.shift_eigenvalues(i), op.alpha);
    }
    const double xmax = x.maxCoeff();
    if (xmax <= 0.0) {
      h.setOnes();  // flat spectrum: the kernel degenerates to all-pass
    } else {
      for (Index i = 0; i < n; ++i) {
        h(i) = std::pow(1.0 - x(i) / xmax, poly.degree);
      }
    }
  }
  t.kernel_values = h;

  // T = sum_k h_k f_k^H f_k over the nonzero kernel entries only, so an ideal
  // band kernel costs O(n^2 |band|).
  std::vector<Index> nz;
  nz.reserve(static_cast<size_t>(n));
  for (Index k = 0; k < n; ++k) {
    if (h(k) != 0.0) nz.push_back(k);
  }
  if (nz.empty()) {
    t.matrix = CMatrix::Zero(n, n);
    return t;
  }
  CMatrix c(static_cast<Index>(nz.size()), n);
  CMatrix cw(static_cast<Index>(nz.size()), n);
  for (Index i = 0; i < static_cast<Index>(nz.size()); ++i) {
    c.row(i) = op.forward.row(nz[static_cast<size_t>(i)]);
    cw.row(i) = h(nz[static_cast<size_t>(i)]) * c.row(i);
  }
  t.matrix = hermitize(c.adjoint() * cw);
  return t;
}

CutoffFrequency cutoff_frequency(const GfrftOperator& op, const IndexSet& s, int k) {
  const Index n = op.n();
  if (s.universe() != n) {
    throw DimensionMismatch("cutoff_frequency: vertex universe does not match operator");
  }
  if (k < 1) throw InvalidArgument("cutoff_frequency: k must be >= 1");

  CutoffFrequency out;
  const IndexSet comp = s.complement();
  if (comp.empty()) {
    out.omega = std::numeric_limits<double>::infinity();
    out.minimizer = CVector();
    out.zero_padded = CVector::Zero(n);
    return out;
  }

  const CMatrix gram = fractional_shift_power_gram(op, k);
  CMatrix rest(comp.size(), comp.size());
  for (Index a = 0; a < comp.size(); ++a) {
    for (Index b = 0; b < comp.size(); ++b) rest(a, b) = gram(comp[a], comp[b]);
  }
  const EigenPair e = hermitian_eig(rest);
  const double lam = std::max(e.values(0).real(), 0.0);
  out.omega = std::pow(lam, 1.0 / (2.0 * k));
  out.minimizer = e.vectors.col(0);
  out.zero_padded = CVector::Zero(n);
  for (Index a = 0; a < comp.size(); ++a) out.zero_padded(comp[a]) = out.minimizer(a);
  return out;
}

}  // namespace gfrft

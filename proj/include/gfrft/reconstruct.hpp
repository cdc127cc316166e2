#pragma once

#include "gfrft/gfrft.hpp"
#include "gfrft/types.hpp"

namespace gfrft {

// Linear reconstruction of band-limited signals from vertex samples:
// estimate = matrix * samples, with matrix = F^{-alpha}_{VF} (F^{-alpha}_{SF})^+.
// For any sample set whose sampling block has rank |band| this reproduces
// every signal in the band span exactly.
struct Reconstructor {
  double alpha = 0.0;
  IndexSet band;     // frequency support F
  IndexSet samples;  // vertex set S
  CMatrix matrix;    // n x |S|
  // Conditioning of the sampling block F^{-alpha}_{SF}: largest singular
  // value over the |band|-th one. Rank below |band| (unique recovery lost) or
  // cond beyond 1e8 sets ill_conditioned.
  double cond = 0.0;
  bool ill_conditioned = false;
};

Reconstructor build_reconstructor(const GfrftOperator& op, const IndexSet& band,
                                  const IndexSet& samples);

// The entries of x on S, ascending vertex order.
CVector sample(const CVector& x, const IndexSet& s);

CVector reconstruct(const Reconstructor& rec, const CVector& samples);

// T_{VS} (T_S)^+ y: reconstruction through a localization operator. Agrees
// with the band reconstructor when T is the ideal kernel on the same band and
// T_S has full rank.
CVector localization_reconstruct(const LocalizationOperator& t, const IndexSet& s,
                                 const CVector& samples);

// Error covariance of sampling a T-localized model on S:
//   E = T^{1/2} (T^{1/2} D_S T^{1/2})^+ T^{1/2},
// where the square root is spectral with eigenvalues clamped at zero
// (tolerance 1e-10 relative to the largest; below that T is rejected as not
// PSD). Hermitian PSD output.
CMatrix error_covariance(const LocalizationOperator& t, const IndexSet& s);

// Pointwise comparison of an estimate against the ground truth:
// mse = residual_norm^2 / N, snr_db = 10 log10(||truth||^2 / residual^2)
// clamped to [-320, 320], with a zero-residual comparison pinned at +320.
struct ErrorMetrics {
  double mse = 0.0;
  double snr_db = 0.0;
  double residual_norm = 0.0;
};

ErrorMetrics error_metrics(const CVector& truth, const CVector& estimate);

}  // namespace gfrft

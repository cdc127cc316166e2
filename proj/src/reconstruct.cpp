#include "gfrft/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfrft/linalg.hpp"

namespace gfrft {
namespace {

constexpr double kCondLimit = 1e8;
constexpr double kSnrCapDb = 320.0;

}  // namespace

Reconstructor build_reconstructor(const GfrftOperator& op, const IndexSet& band,
                                  const IndexSet& samples) {
  const Index n = op.n();
  if (band.universe() != n || samples.universe() != n) {
    throw DimensionMismatch("build_reconstructor: index universe mismatch");
  }
  if (band.empty()) throw InvalidArgument("build_reconstructor: band is empty");
  if (samples.empty()) throw InvalidArgument("build_reconstructor: sample set is empty");

  const CMatrix inv = op.forward.adjoint();  // F^{-alpha}
  CMatrix vf(n, band.size());
  for (Index k = 0; k < band.size(); ++k) vf.col(k) = inv.col(band[k]);
  CMatrix sf(samples.size(), band.size());
  for (Index i = 0; i < samples.size(); ++i) sf.row(i) = vf.row(samples[i]);

  Reconstructor rec;
  rec.alpha = op.alpha;
  rec.band = band;
  rec.samples = samples;
  rec.matrix = vf * pinv(sf);

  const Svd dec = svd(sf);
  const Index want = band.size();  // unique recovery needs this much rank
  const double smax = dec.singular(0);
  const double rtol = default_svd_rtol(sf.rows(), sf.cols());
  double swant = 0.0;
  if (dec.singular.size() >= want) {
    const double s = dec.singular(want - 1);
    if (s > rtol * smax) swant = s;
  }
  if (swant > 0.0) {
    rec.cond = smax / swant;
    rec.ill_conditioned = rec.cond > kCondLimit;
  } else {
    rec.cond = std::numeric_limits<double>::infinity();
    rec.ill_conditioned = true;
  }
  return rec;
}

CVector sample(const CVector& x, const IndexSet& s) { return gather(x, s); }

CVector reconstruct(const Reconstructor& rec, const CVector& samples) {
  if (samples.size() != rec.matrix.cols()) {
    throw DimensionMismatch("reconstruct: sample count does not match reconstructor");
  }
  return rec.matrix * samples;
}

CVector localization_reconstruct(const LocalizationOperator& t, const IndexSet& s,
                                 const CVector& samples) {
  const Index n = t.n();
  if (s.universe() != n) {
    throw DimensionMismatch("localization_reconstruct: index universe mismatch");
  }
  if (s.empty()) throw InvalidArgument("localization_reconstruct: empty sample set");
  if (samples.size() != s.size()) {
    throw DimensionMismatch("localization_reconstruct: sample count mismatch");
  }
  CMatrix tvs(n, s.size());
  for (Index k = 0; k < s.size(); ++k) tvs.col(k) = t.matrix.col(s[k]);
  CMatrix ts(s.size(), s.size());
  for (Index a = 0; a < s.size(); ++a) {
    for (Index b = 0; b < s.size(); ++b) ts(a, b) = t.matrix(s[a], s[b]);
  }
  return tvs * (pinv(ts) * samples);
}

CMatrix error_covariance(const LocalizationOperator& t, const IndexSet& s) {
  const Index n = t.n();
  if (s.universe() != n) {
    throw DimensionMismatch("error_covariance: index universe mismatch");
  }
  const EigenPair e = hermitian_eig(t.matrix);
  const RVector lam = e.values.real();
  const double top = std::max(lam.maxCoeff(), 0.0);
  if (lam.minCoeff() < -1e-10 * std::max(top, 1.0)) {
    throw NotPsd("error_covariance: localization operator is not PSD");
  }
  const RVector clamped = lam.cwiseMax(0.0);
  CMatrix root = e.vectors * clamped.cwiseSqrt().asDiagonal() * e.vectors.adjoint();
  root = 0.5 * (root + root.adjoint());

  // T^{1/2} D_S T^{1/2} = sum over s in S of root(:,s) root(:,s)^H.
  CMatrix mid = CMatrix::Zero(n, n);
  for (Index k = 0; k < s.size(); ++k) {
    mid.noalias() += root.col(s[k]) * root.col(s[k]).adjoint();
  }
  CMatrix cov = root * pinv(mid) * root;
  return 0.5 * (cov + cov.adjoint());
}

ErrorMetrics error_metrics(const CVector& truth, const CVector& estimate) {
  if (truth.size() != estimate.size()) {
    throw DimensionMismatch("error_metrics: length mismatch");
  }
  if (truth.size() == 0) throw InvalidArgument("error_metrics: empty signals");
  ErrorMetrics m;
  const double err2 = (truth - estimate).squaredNorm();
  const double sig2 = truth.squaredNorm();
  m.residual_norm = std::sqrt(err2);
  m.mse = err2 / static_cast<double>(truth.size());
  if (err2 == 0.0) {
    m.snr_db = kSnrCapDb;
  } else if (sig2 == 0.0) {
    m.snr_db = -kSnrCapDb;
  } else {
    m.snr_db = std::clamp(10.0 * std::log10(sig2 / err2), -kSnrCapDb, kSnrCapDb);
  }
  return m;
}

}  // namespace gfrft

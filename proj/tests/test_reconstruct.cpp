#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gfrft/reconstruct.hpp"
#include "gfrft/rng.hpp"
#include "gfrft/sampling.hpp"

using namespace gfrft;

namespace {

GfrftOperator test_operator(Index n, double alpha, uint64_t seed) {
  const Graph g = random_sensor(n, 3, seed);
  return gfrft_operator(gft_basis(make_shift(g, ShiftKind::Laplacian)), alpha);
}

// x = F^{-alpha} x_hat with x_hat supported on the band.
CVector bandlimited_signal(const GfrftOperator& op, const IndexSet& band,
                           uint64_t seed) {
  rng::SplitMix64 g(seed);
  CVector hat = CVector::Zero(op.n());
  for (Index k = 0; k < band.size(); ++k) {
    hat(band[k]) = Complex(g.gaussian(), g.gaussian());
  }
  return op.forward.adjoint() * hat;
}

CVector random_signal(Index n, uint64_t seed) {
  rng::SplitMix64 g(seed);
  CVector x(n);
  for (Index i = 0; i < n; ++i) x(i) = Complex(g.gaussian(), g.gaussian());
  return x;
}

// The sampling block F^{-alpha}_{S, F} assembled directly.
CMatrix sampling_block(const GfrftOperator& op, const IndexSet& band,
                       const IndexSet& s) {
  const CMatrix inv = op.forward.adjoint();
  CMatrix sf(s.size(), band.size());
  for (Index i = 0; i < s.size(); ++i) {
    for (Index k = 0; k < band.size(); ++k) sf(i, k) = inv(s[i], band[k]);
  }
  return sf;
}

}  // namespace

TEST_CASE("sample gathers entries in ascending vertex order") {
  CVector x(4);
  x << 10.0, 20.0, 30.0, 40.0;
  const CVector y = sample(x, IndexSet({3, 1}, 4));
  REQUIRE(y.size() == 2);
  CHECK(y(0) == Complex(20.0, 0.0));
  CHECK(y(1) == Complex(40.0, 0.0));
}

TEST_CASE("build_reconstructor validates its index sets") {
  const GfrftOperator op = test_operator(8, 0.7, 3);
  const IndexSet band = IndexSet::first(3, 8);
  const IndexSet s({0, 2, 5}, 8);
  CHECK_THROWS_AS(build_reconstructor(op, IndexSet::first(3, 9), s), DimensionMismatch);
  CHECK_THROWS_AS(build_reconstructor(op, band, IndexSet({0}, 9)), DimensionMismatch);
  CHECK_THROWS_AS(build_reconstructor(op, IndexSet({}, 8), s), InvalidArgument);
  CHECK_THROWS_AS(build_reconstructor(op, band, IndexSet({}, 8)), InvalidArgument);

  const Reconstructor rec = build_reconstructor(op, band, s);
  CVector two(2);
  two.setZero();
  CHECK_THROWS_AS(reconstruct(rec, two), DimensionMismatch);
}

TEST_CASE("band-limited signals are recovered exactly from a greedy sample set") {
  const GfrftOperator op = test_operator(16, 0.8, 7);
  const IndexSet band = IndexSet::first(6, 16);
  StrategyConfig cfg;
  cfg.kind = StrategyKind::MaxSigMin;
  for (Index m : {Index{6}, Index{8}, Index{12}}) {
    const IndexSet s = greedy_select(op, band, m, cfg).index_set(16);
    const Reconstructor rec = build_reconstructor(op, band, s);
    REQUIRE_FALSE(rec.ill_conditioned);
    for (uint64_t seed : {11u, 12u, 13u}) {
      const CVector x = bandlimited_signal(op, band, seed);
      const CVector xr = reconstruct(rec, sample(x, s));
      CHECK((xr - x).norm() <= 1e-9 * rec.cond * x.norm());
    }
  }
}

TEST_CASE("with every vertex sampled the reconstructor is the band projector") {
  const GfrftOperator op = test_operator(12, 0.65, 17);
  const IndexSet band = IndexSet::first(5, 12);
  const IndexSet all = IndexSet::all(12);
  const Reconstructor rec = build_reconstructor(op, band, all);
  CHECK_FALSE(rec.ill_conditioned);

  // The synthesis columns are orthonormal, so the least-squares fit of an
  // arbitrary signal lands on its orthogonal band projection.
  const CMatrix proj = band_projector(op, band);
  for (uint64_t seed : {21u, 22u}) {
    const CVector y = random_signal(12, seed);
    const CVector fit = reconstruct(rec, sample(y, all));
    CHECK((fit - proj * y).norm() < 1e-10 * y.norm());
  }
}

TEST_CASE("reconstruction is linear in the observed samples") {
  const GfrftOperator op = test_operator(10, 0.9, 23);
  const IndexSet band = IndexSet::first(4, 10);
  const IndexSet s({0, 2, 3, 6, 8}, 10);
  const Reconstructor rec = build_reconstructor(op, band, s);
  const CVector u = random_signal(5, 31);
  const CVector v = random_signal(5, 32);
  const Complex a(0.3, -1.2), b(-2.0, 0.7);
  const CVector lhs = reconstruct(rec, CVector(a * u + b * v));
  const CVector rhs = a * reconstruct(rec, u) + b * reconstruct(rec, v);
  CHECK((lhs - rhs).norm() < 1e-12 * (lhs.norm() + 1.0));
}

TEST_CASE("cond reports the sampling-block spectral range and flags rank loss") {
  const GfrftOperator op = test_operator(12, 0.75, 41);
  const IndexSet band = IndexSet::first(4, 12);
  const IndexSet s({1, 3, 4, 7, 10}, 12);
  const Reconstructor rec = build_reconstructor(op, band, s);

  Eigen::JacobiSVD<CMatrix> dec(sampling_block(op, band, s));
  const RVector& sv = dec.singularValues();
  CHECK(rec.cond == doctest::Approx(sv(0) / sv(3)).epsilon(1e-10));
  CHECK(rec.ill_conditioned == (rec.cond > 1e8));

  // Fewer samples than band dimensions: unique recovery is impossible.
  const Reconstructor low = build_reconstructor(op, band, IndexSet({2, 5}, 12));
  CHECK(low.ill_conditioned);
  CHECK(std::isinf(low.cond));
}

TEST_CASE("localization_reconstruct with the ideal kernel matches the band reconstructor") {
  const GfrftOperator op = test_operator(14, 0.7, 51);
  const IndexSet band = IndexSet::first(5, 14);
  const IndexSet s({0, 1, 4, 6, 9, 11, 13}, 14);
  const LocalizationOperator t = localization_operator(op, Kernel(IdealKernel{band}));
  const Reconstructor rec = build_reconstructor(op, band, s);
  REQUIRE_FALSE(rec.ill_conditioned);

  // T_VS (T_S)^+ equals F^{-a}_{VF} (F^{-a}_{SF})^+ as operators whenever the
  // sampling block has full band rank, so any observation vector agrees.
  for (uint64_t seed : {61u, 62u, 63u}) {
    const CVector y = random_signal(7, seed);
    const CVector via_t = localization_reconstruct(t, s, y);
    const CVector via_band = reconstruct(rec, y);
    CHECK((via_t - via_band).norm() < 1e-8 * (via_band.norm() + 1.0));
  }

  CHECK_THROWS_AS(localization_reconstruct(t, IndexSet({0}, 9), random_signal(1, 1)),
                  DimensionMismatch);
  CHECK_THROWS_AS(localization_reconstruct(t, IndexSet({}, 14), CVector()),
                  InvalidArgument);
  CHECK_THROWS_AS(localization_reconstruct(t, s, random_signal(3, 1)),
                  DimensionMismatch);
}

TEST_CASE("error_covariance of the identity model is the vertex selector") {
  // T = I (ideal kernel over the whole spectrum): E = (D_S)^+ = D_S.
  const GfrftOperator op = test_operator(6, 0.8, 71);
  const LocalizationOperator t =
      localization_operator(op, Kernel(IdealKernel{IndexSet::all(6)}));
  const IndexSet s({1, 4}, 6);
  const CMatrix e = error_covariance(t, s);
  CMatrix want = CMatrix::Zero(6, 6);
  want(1, 1) = 1.0;
  want(4, 4) = 1.0;
  CHECK((e - want).norm() < 1e-9);
}

TEST_CASE("error_covariance with all vertices sampled reproduces an idempotent T") {
  const GfrftOperator op = test_operator(10, 0.85, 73);
  const IndexSet band = IndexSet::first(4, 10);
  const LocalizationOperator t = localization_operator(op, Kernel(IdealKernel{band}));
  const CMatrix e = error_covariance(t, IndexSet::all(10));
  CHECK((e - t.matrix).norm() < 1e-8);
}

TEST_CASE("error_covariance spectrum is the inverse sampled-Gram spectrum") {
  const GfrftOperator op = test_operator(12, 0.7, 79);
  const IndexSet band = IndexSet::first(4, 12);
  const IndexSet s({0, 2, 5, 7, 9, 11}, 12);
  const LocalizationOperator t = localization_operator(op, Kernel(IdealKernel{band}));
  const CMatrix e = error_covariance(t, s);

  CHECK((e - e.adjoint()).norm() < 1e-12 * e.norm());

  Eigen::JacobiSVD<CMatrix> dec(sampling_block(op, band, s));
  const RVector& sv = dec.singularValues();
  double trace_want = 0.0;
  for (Index i = 0; i < sv.size(); ++i) trace_want += 1.0 / (sv(i) * sv(i));
  CHECK(e.trace().real() == doctest::Approx(trace_want).epsilon(1e-8));
  CHECK(spectral_norm(e) == doctest::Approx(1.0 / (sv(3) * sv(3))).epsilon(1e-8));
}

TEST_CASE("error_covariance rejects indefinite models and wrong universes") {
  const GfrftOperator op = test_operator(6, 0.8, 83);
  LocalizationOperator t =
      localization_operator(op, Kernel(IdealKernel{IndexSet::first(2, 6)}));
  CHECK_THROWS_AS(error_covariance(t, IndexSet({0}, 7)), DimensionMismatch);

  t.matrix = CMatrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) t.matrix(i, i) = (i == 0) ? -1.0 : 1.0;
  CHECK_THROWS_AS(error_covariance(t, IndexSet({0, 1}, 6)), NotPsd);
}

TEST_CASE("error_metrics closed-form cases") {
  CVector t2(2), e2(2);

  t2 << 3.0, 4.0;
  ErrorMetrics m = error_metrics(t2, t2);
  CHECK(m.mse == 0.0);
  CHECK(m.residual_norm == 0.0);
  CHECK(m.snr_db == 320.0);

  // ||truth||^2 == residual^2: exactly 0 dB, mse = 4/2.
  t2 << 2.0, 0.0;
  e2 << 0.0, 0.0;
  m = error_metrics(t2, e2);
  CHECK(m.mse == 2.0);
  CHECK(m.residual_norm == 2.0);
  CHECK(m.snr_db == 0.0);

  // Purely imaginary truth behaves through squared magnitudes.
  t2 << Complex(0.0, 1.0), 0.0;
  e2 << 0.0, 0.0;
  m = error_metrics(t2, e2);
  CHECK(m.mse == 0.5);
  CHECK(m.snr_db == 0.0);

  // Zero truth against a nonzero estimate pins the floor.
  t2 << 0.0, 0.0;
  e2 << 1.0, 0.0;
  CHECK(error_metrics(t2, e2).snr_db == -320.0);

  // Estimate worse than the signal scale goes negative by 10 log10(1/81).
  t2 << 1.0, 0.0;
  e2 << 10.0, 0.0;
  CHECK(error_metrics(t2, e2).snr_db ==
        doctest::Approx(10.0 * std::log10(1.0 / 81.0)).epsilon(1e-12));

  // A one-ulp error on a long unit signal exceeds the cap.
  CVector tl = CVector::Constant(100, Complex(1.0, 0.0));
  CVector el = tl;
  el(0) = Complex(std::nextafter(1.0, 2.0), 0.0);
  CHECK(error_metrics(tl, el).snr_db == 320.0);

  CHECK_THROWS_AS(error_metrics(CVector::Zero(2), CVector::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(error_metrics(CVector(), CVector()), InvalidArgument);
}

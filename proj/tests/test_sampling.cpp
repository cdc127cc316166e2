#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gfrft/rng.hpp"
#include "gfrft/sampling.hpp"

using namespace gfrft;

namespace {

// F^{-alpha} rows at S, columns at the band: the sampled synthesis block.
CMatrix sampled_block(const GfrftOperator& op, const IndexSet& band,
                      const std::vector<Index>& s) {
  CMatrix a(static_cast<Index>(s.size()), band.size());
  for (Index i = 0; i < static_cast<Index>(s.size()); ++i) {
    for (Index k = 0; k < band.size(); ++k) {
      a(i, k) = std::conj(op.forward(band[k], s[static_cast<size_t>(i)]));
    }
  }
  return a;
}

RVector singulars(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> s(a);
  return s.singularValues();
}

StrategyConfig make_config(StrategyKind kind, const IndexSet& band) {
  StrategyConfig cfg;
  cfg.kind = kind;
  if (kind == StrategyKind::MaxCov) cfg.kernel = Kernel(IdealKernel{band});
  if (kind == StrategyKind::Random) cfg.seed = 7;
  return cfg;
}

template <typename Fn>
void for_each_subset(Index n, Index m, Fn fn) {
  std::vector<Index> idx(static_cast<size_t>(m));
  std::iota(idx.begin(), idx.end(), Index{0});
  while (true) {
    fn(idx);
    Index i = m - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (Index j = i + 1; j < m; ++j) {
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
}

GfrftOperator test_operator(Index n, double alpha, uint64_t seed) {
  const Graph g = random_sensor(n, 3, seed);
  return gfrft_operator(gft_basis(make_shift(g, ShiftKind::Laplacian)), alpha);
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (StrategyKind k :
       {StrategyKind::MaxCut, StrategyKind::MaxSigMin, StrategyKind::MinTrac,
        StrategyKind::MinPinv, StrategyKind::MaxSig, StrategyKind::MaxVol,
        StrategyKind::MaxCov, StrategyKind::Random}) {
    CHECK(strategy_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(strategy_from_string("maxcut"), InvalidArgument);
  CHECK_THROWS_AS(strategy_from_string(""), InvalidArgument);
}

TEST_CASE("StrategyConfig::validate enforces per-strategy fields") {
  const IndexSet band = IndexSet::first(3, 8);

  StrategyConfig bad_order = make_config(StrategyKind::MaxCut, band);
  bad_order.cut_order = 0;
  CHECK_THROWS_AS(bad_order.validate(), InvalidArgument);

  StrategyConfig no_kernel;
  no_kernel.kind = StrategyKind::MaxCov;
  CHECK_THROWS_AS(no_kernel.validate(), InvalidArgument);

  StrategyConfig stray_kernel;
  stray_kernel.kind = StrategyKind::MaxSig;
  stray_kernel.kernel = Kernel(IdealKernel{band});
  CHECK_THROWS_AS(stray_kernel.validate(), InvalidArgument);

  StrategyConfig no_seed;
  no_seed.kind = StrategyKind::Random;
  CHECK_THROWS_AS(no_seed.validate(), InvalidArgument);

  StrategyConfig stray_seed;
  stray_seed.kind = StrategyKind::MinTrac;
  stray_seed.seed = 1;
  CHECK_THROWS_AS(stray_seed.validate(), InvalidArgument);

  StrategyConfig bad_fast;
  bad_fast.kind = StrategyKind::MaxSig;
  bad_fast.fast_updates = true;
  CHECK_THROWS_AS(bad_fast.validate(), InvalidArgument);

  StrategyConfig ok;
  ok.kind = StrategyKind::MinTrac;
  ok.fast_updates = true;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("greedy_select input validation") {
  const GfrftOperator op = test_operator(8, 0.7, 3);
  const IndexSet band = IndexSet::first(3, 8);
  const StrategyConfig cfg = make_config(StrategyKind::MaxSig, band);
  CHECK_THROWS_AS(greedy_select(op, IndexSet::first(3, 9), 4, cfg), DimensionMismatch);
  CHECK_THROWS_AS(greedy_select(op, IndexSet({}, 8), 4, cfg), InvalidArgument);
  CHECK_THROWS_AS(greedy_select(op, band, 0, cfg), InvalidArgument);
  CHECK_THROWS_AS(greedy_select(op, band, 9, cfg), InvalidArgument);
}

TEST_CASE("Random selection is a seeded Fisher-Yates prefix") {
  const GfrftOperator op = test_operator(10, 0.7, 5);
  const IndexSet band = IndexSet::first(3, 10);
  StrategyConfig cfg = make_config(StrategyKind::Random, band);
  cfg.seed = 99;
  const SamplingResult res = greedy_select(op, band, 6, cfg);

  // Independent replay of the documented draw.
  rng::SplitMix64 g(99);
  std::vector<Index> pool(10);
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < 6; ++i) {
    const Index j = i + static_cast<Index>(g.uniform_index(static_cast<uint64_t>(10 - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    CHECK(res.selected[static_cast<size_t>(i)] == pool[static_cast<size_t>(i)]);
    CHECK(res.objective_trace[static_cast<size_t>(i)] == 0.0);
  }
  CHECK(res.pinv_fallbacks.empty());

  const SamplingResult again = greedy_select(op, band, 6, cfg);
  CHECK(again.selected == res.selected);
}

TEST_CASE("objective equivalences against the sampled-block oracle, exhaustively") {
  // N = 8, |F| = 3, every vertex subset of size 2, 3, 4. The strategy
  // objectives must match closed forms in the singular values of
  // A = F^{-alpha}_{S, F}, and the localized design objectives on the ideal
  // localization operator must match the same quantities.
  const GfrftOperator op = test_operator(8, 0.85, 11);
  const IndexSet band = IndexSet::first(3, 8);
  const LocalizationOperator t = localization_operator(op, Kernel(IdealKernel{band}));

  for (Index m : {Index{2}, Index{3}, Index{4}}) {
    for_each_subset(8, m, [&](const std::vector<Index>& s) {
      std::vector<Index> head(s.begin(), s.end() - 1);
      const Index y = s.back();
      const IndexSet current(head, 8);
      const IndexSet full(s, 8);
      const CMatrix a = sampled_block(op, band, s);
      const RVector sv = singulars(a);
      const double smin = sv(sv.size() - 1);
      const double energy = a.squaredNorm();
      bool flag = false;

      // MaxSig == sum of squared singular values == tr[T_S].
      const double maxsig = marginal_objective(op, band, current, y,
                                               make_config(StrategyKind::MaxSig, band));
      CHECK(maxsig == doctest::Approx(energy).epsilon(1e-10));
      CHECK(localized_objective(t, full, DesignObjective::Trace) ==
            doctest::Approx(energy).epsilon(1e-9));

      // MaxSigMin == smallest singular value == E-optimal localized value.
      const double sigmin = marginal_objective(
          op, band, current, y, make_config(StrategyKind::MaxSigMin, band));
      CHECK(sigmin == doctest::Approx(smin).epsilon(1e-8).scale(1e-12));
      CHECK(localized_objective(t, full, DesignObjective::MinSingular) ==
            doctest::Approx(smin).epsilon(1e-8).scale(1e-12));

      // Sum of inverse squared singular values: MinPinv and MinTrac agree
      // with each other and with the A-optimal localized value. MinPinv
      // works on the min-side spectrum, so its value is the dagger trace
      // with no fallback at any size; MinTrac targets the band Gram inverse,
      // which cannot exist below |S| = |F|, so there it reports the dagger
      // and the strict call refuses.
      double invsum = 0.0;
      for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-9 * sv(0)) invsum += 1.0 / (sv(i) * sv(i));
      }
      const double minpinv = marginal_objective(
          op, band, current, y, make_config(StrategyKind::MinPinv, band), &flag);
      CHECK(minpinv == doctest::Approx(-invsum).epsilon(1e-8));
      CHECK_FALSE(flag);
      const double mintrac = marginal_objective(
          op, band, current, y, make_config(StrategyKind::MinTrac, band), &flag);
      CHECK(mintrac == doctest::Approx(-invsum).epsilon(1e-8));
      CHECK(flag == (m < 3));
      CHECK(localized_objective(t, full, DesignObjective::TraceInverse) ==
            doctest::Approx(invsum).epsilon(1e-8));
      if (m < 3) {
        CHECK_THROWS_AS(marginal_objective(op, band, current, y,
                                           make_config(StrategyKind::MinTrac, band)),
                        SingularSubproblem);
      } else {
        CHECK_NOTHROW(marginal_objective(op, band, current, y,
                                         make_config(StrategyKind::MinTrac, band)));
        CHECK_NOTHROW(marginal_objective(op, band, current, y,
                                         make_config(StrategyKind::MinPinv, band)));
      }

      // MaxVol == log pseudo-determinant of the sampled Gram; the localized
      // D-optimal value is the same product of retained eigenvalues.
      double logdet = 0.0;
      for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-9 * sv(0)) logdet += 2.0 * std::log(sv(i));
      }
      const double maxvol = marginal_objective(
          op, band, current, y, make_config(StrategyKind::MaxVol, band), &flag);
      CHECK(maxvol == doctest::Approx(logdet).epsilon(1e-7));
      CHECK(flag == (m > 3));  // beyond |F| the row Gram is singular by rank
      if (m > 3) {
        CHECK_THROWS_AS(marginal_objective(op, band, current, y,
                                           make_config(StrategyKind::MaxVol, band)),
                        SingularSubproblem);
      }
      CHECK(localized_objective(t, full, DesignObjective::Determinant) ==
            doctest::Approx(std::exp(logdet)).epsilon(1e-7));
    });
  }
}

TEST_CASE("greedy_select replays as repeated argmax of marginal_objective") {
  const GfrftOperator op = test_operator(12, 0.7, 21);
  const IndexSet band = IndexSet::first(4, 12);
  for (StrategyKind kind : {StrategyKind::MaxSigMin, StrategyKind::MaxSig,
                            StrategyKind::MinTrac, StrategyKind::MaxCov,
                            StrategyKind::MaxCut}) {
    const StrategyConfig cfg = make_config(kind, band);
    const SamplingResult res = greedy_select(op, band, 6, cfg);
    std::vector<Index> cur;
    for (size_t it = 0; it < 6; ++it) {
      Index best_y = -1;
      double best = 0.0;
      for (Index y = 0; y < 12; ++y) {
        if (std::find(cur.begin(), cur.end(), y) != cur.end()) continue;
        bool flag = false;
        const double v = marginal_objective(op, band, IndexSet(cur, 12), y, cfg, &flag);
        if (best_y < 0 || v > best) {
          best = v;
          best_y = y;
        }
      }
      CHECK(res.selected[it] == best_y);
      CHECK(res.objective_trace[it] == doctest::Approx(best).epsilon(1e-10));
      cur.push_back(res.selected[it]);
    }
  }
}

TEST_CASE("marginal_objective argument validation") {
  const GfrftOperator op = test_operator(8, 0.7, 31);
  const IndexSet band = IndexSet::first(3, 8);
  const IndexSet cur({0, 2}, 8);
  CHECK_THROWS_AS(marginal_objective(op, band, cur, 2,
                                     make_config(StrategyKind::MaxSig, band)),
                  InvalidArgument);  // already selected
  CHECK_THROWS_AS(marginal_objective(op, band, cur, 9,
                                     make_config(StrategyKind::MaxSig, band)),
                  InvalidArgument);
  CHECK_THROWS_AS(marginal_objective(op, band, cur, 1,
                                     make_config(StrategyKind::Random, band)),
                  InvalidArgument);
  CHECK_THROWS_AS(marginal_objective(op, IndexSet::first(3, 9), cur, 1,
                                     make_config(StrategyKind::MaxSig, band)),
                  DimensionMismatch);
}

TEST_CASE("MinTrac records dagger fallbacks exactly while |S| < |F|") {
  const GfrftOperator op = test_operator(10, 0.7, 41);
  const IndexSet band = IndexSet::first(4, 10);
  const SamplingResult res =
      greedy_select(op, band, 7, make_config(StrategyKind::MinTrac, band));
  // Iterations 0..2 evaluate sets of size 1..3 < |F| = 4.
  CHECK(res.pinv_fallbacks == std::vector<Index>{0, 1, 2});

  const SamplingResult vol =
      greedy_select(op, band, 7, make_config(StrategyKind::MaxVol, band));
  // Beyond |S| = |F| the row-Gram determinant is a pseudo-determinant.
  CHECK(vol.pinv_fallbacks == std::vector<Index>{4, 5, 6});
}

TEST_CASE("MaxCut's first pick maximizes the cutoff minimizer energy") {
  const GfrftOperator op = test_operator(14, 0.8, 51);
  const IndexSet band = IndexSet::first(4, 14);
  StrategyConfig cfg = make_config(StrategyKind::MaxCut, band);
  cfg.cut_order = 4;

  const CutoffFrequency cf = cutoff_frequency(op, IndexSet({}, 14), 4);
  Index expect = 0;
  double bestmag = -1.0;
  for (Index v = 0; v < 14; ++v) {
    const double mag = std::norm(cf.zero_padded(v));
    if (mag > bestmag) {
      bestmag = mag;
      expect = v;
    }
  }
  const SamplingResult res = greedy_select(op, band, 1, cfg);
  CHECK(res.selected[0] == expect);
  CHECK(res.objective_trace[0] == doctest::Approx(bestmag).epsilon(1e-8));
}

TEST_CASE("MaxCov follows its documented coverage recursion") {
  const GfrftOperator op = test_operator(10, 0.6, 61);
  const IndexSet band = IndexSet::first(3, 10);
  const StrategyConfig cfg = make_config(StrategyKind::MaxCov, band);
  const LocalizationOperator t = localization_operator(op, *cfg.kernel);

  RMatrix abst = t.matrix.cwiseAbs();
  abst = (abst.array() < 1e-12 * abst.maxCoeff()).select(0.0, abst);
  const RVector colsum = abst.colwise().sum();

  const SamplingResult res = greedy_select(op, band, 3, cfg);

  // Iteration 0: scores are epsilon * column sums, epsilon = grand mean.
  const double eps0 = abst.sum() / 100.0;
  Index pick0 = 0;
  double best0 = -1.0;
  for (Index y = 0; y < 10; ++y) {
    if (eps0 * colsum(y) > best0) {
      best0 = eps0 * colsum(y);
      pick0 = y;
    }
  }
  CHECK(res.selected[0] == pick0);
  CHECK(res.objective_trace[0] == doctest::Approx(best0).epsilon(1e-12));

  // Iteration 1: coverage is |T| e_{pick0}; epsilon is mean coverage; scores
  // weight uncovered mass only.
  RVector coverage = abst.col(pick0);
  const double eps1 = coverage.sum() / 10.0;
  const RVector w = (RVector::Constant(10, eps1) - coverage).cwiseMax(0.0);
  Index pick1 = -1;
  double best1 = 0.0;
  for (Index y = 0; y < 10; ++y) {
    if (y == pick0) continue;
    const double v = abst.col(y).dot(w);
    if (pick1 < 0 || v > best1) {
      best1 = v;
      pick1 = y;
    }
  }
  CHECK(res.selected[1] == pick1);
  CHECK(res.objective_trace[1] == doctest::Approx(best1).epsilon(1e-12));
}

TEST_CASE("fast_updates reproduces the exact MinTrac and MaxVol runs") {
  const GfrftOperator op = test_operator(16, 0.75, 71);
  const IndexSet band = IndexSet::first(5, 16);
  for (StrategyKind kind : {StrategyKind::MinTrac, StrategyKind::MaxVol}) {
    StrategyConfig slow = make_config(kind, band);
    StrategyConfig fast = slow;
    fast.fast_updates = true;
    const SamplingResult a = greedy_select(op, band, 10, slow);
    const SamplingResult b = greedy_select(op, band, 10, fast);
    CHECK(a.selected == b.selected);
    for (size_t i = 0; i < 10; ++i) {
      CHECK(a.objective_trace[i] ==
            doctest::Approx(b.objective_trace[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("index_set sorts the selection into a proper IndexSet") {
  SamplingResult r;
  r.selected = {5, 1, 3};
  const IndexSet s = r.index_set(6);
  CHECK(s.size() == 3);
  CHECK(s[0] == 1);
  CHECK(s[1] == 3);
  CHECK(s[2] == 5);
  CHECK(s.universe() == 6);
}

TEST_CASE("localized_objective validation and rank-zero reporting") {
  const GfrftOperator op = test_operator(8, 0.7, 81);
  const IndexSet band = IndexSet::first(3, 8);
  const LocalizationOperator t = localization_operator(op, Kernel(IdealKernel{band}));
  CHECK_THROWS_AS(localized_objective(t, IndexSet({}, 8), DesignObjective::Trace),
                  InvalidArgument);
  CHECK_THROWS_AS(localized_objective(t, IndexSet({0}, 9), DesignObjective::Trace),
                  DimensionMismatch);

  // A localization operator that is exactly zero has rank-zero restrictions.
  LocalizationOperator zero = t;
  zero.matrix.setZero();
  zero.kernel_values.setZero();
  CHECK_THROWS_AS(localized_objective(zero, IndexSet({0, 1}, 8),
                                      DesignObjective::TraceInverse),
                  SingularSubproblem);
  CHECK_THROWS_AS(localized_objective(zero, IndexSet({0, 1}, 8),
                                      DesignObjective::Determinant),
                  SingularSubproblem);
  CHECK_THROWS_AS(localized_objective(zero, IndexSet({0, 1}, 8),
                                      DesignObjective::MinSingular),
                  SingularSubproblem);
  CHECK(localized_objective(zero, IndexSet({0, 1}, 8), DesignObjective::Trace) == 0.0);
}

TEST_CASE("greedy selections of every strategy are distinct vertices") {
  const GfrftOperator op = test_operator(12, 0.9, 91);
  const IndexSet band = IndexSet::first(4, 12);
  for (StrategyKind kind :
       {StrategyKind::MaxCut, StrategyKind::MaxSigMin, StrategyKind::MinTrac,
        StrategyKind::MinPinv, StrategyKind::MaxSig, StrategyKind::MaxVol,
        StrategyKind::MaxCov, StrategyKind::Random}) {
    const SamplingResult res = greedy_select(op, band, 12, make_config(kind, band));
    std::vector<Index> sorted = res.selected;
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < 12; ++i) CHECK(sorted[static_cast<size_t>(i)] == i);
    CHECK(res.elapsed_seconds.size() == 12);
  }
}

#include "gfrft/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "gfrft/rng.hpp"

namespace gfrft {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cutoff on squared singular values matching pinv's sigma <= rtol * sigma_max.
double lambda_cutoff(Index rows, Index cols, double lambda_max) {
  const double rtol = default_svd_rtol(rows, cols);
  return rtol * rtol * lambda_max;
}

bool uses_band_gram(StrategyKind k) {
  return k == StrategyKind::MaxSigMin || k == StrategyKind::MinTrac ||
         k == StrategyKind::MinPinv || k == StrategyKind::MaxSig ||
         k == StrategyKind::MaxVol;
}

// Incremental state for one greedy run. For the band-Gram strategies the
// selected rows of F^{-alpha}_{SF} are tracked through two Grams: A A^H over
// selected rows ("rowgram", the small side while |S| < |F|) and A^H A
// ("gram", |F| x |F|). Candidate spectra come from the smaller side, which is
// exactly the nonzero singular spectrum either way.
struct Evaluator {
  const GfrftOperator& op;
  const IndexSet& band;
  const StrategyConfig& cfg;
  Index n;
  Index f;

  CMatrix cf;  // rows `band` of F^alpha; column y is candidate y's profile

  std::vector<char> picked;
  std::vector<Index> sel;

  CMatrix rowgram;
  CMatrix gram;

  // fast_updates path (MinTrac / MaxVol): running inverse and log det of gram
  CMatrix ginv;
  double ginv_trace = 0.0;
  double logdet = 0.0;
  bool fast_ok = false;

  CMatrix l2k;           // MaxCut: (L^alpha)^{2k}
  RVector cut_scores;    // |phi*(y)|^2, refreshed per iteration

  RMatrix absT;          // MaxCov: |T| with structural zeros dropped
  RVector colsum;
  RVector coverage;
  RVector cov_scores;

  bool iter_fallback = false;

  Eigen::SelfAdjointEigenSolver<CMatrix> es;

  Evaluator(const GfrftOperator& op_, const IndexSet& band_,
            const StrategyConfig& cfg_, Index capacity)
      : op(op_), band(band_), cfg(cfg_), n(op_.n()), f(band_.size()) {
    picked.assign(static_cast<size_t>(n), 0);
    sel.reserve(static_cast<size_t>(capacity));
    if (cfg.kind == StrategyKind::MaxCut) {
      l2k = fractional_shift_power_gram(op, cfg.cut_order);
      cut_scores = RVector::Zero(n);
    } else if (cfg.kind == StrategyKind::MaxCov) {
      const LocalizationOperator t = localization_operator(op, *cfg.kernel);
      absT = t.matrix.cwiseAbs();
      const double tmax = absT.maxCoeff();
      absT = (absT.array() < 1e-12 * tmax).select(0.0, absT);
      colsum = absT.colwise().sum();
      coverage = RVector::Zero(n);
      cov_scores = RVector::Zero(n);
    } else {
      cf.resize(f, n);
      for (Index k = 0; k < f; ++k) cf.row(k) = op.forward.row(band[k]);
      rowgram = CMatrix::Zero(capacity, capacity);
      gram = CMatrix::Zero(f, f);
    }
  }

  void prepare() {
    iter_fallback = false;
    if (cfg.kind == StrategyKind::MaxCut) {
      const Index r = n - static_cast<Index>(sel.size());
      std::vector<Index> comp;
      comp.reserve(static_cast<size_t>(r));
      for (Index v = 0; v < n; ++v) {
        if (!picked[static_cast<size_t>(v)]) comp.push_back(v);
      }
      CMatrix rest(r, r);
      for (Index a = 0; a < r; ++a) {
        for (Index b = 0; b < r; ++b) {
          rest(a, b) = l2k(comp[static_cast<size_t>(a)], comp[static_cast<size_t>(b)]);
        }
      }
      // Same eigensolver as cutoff_frequency, so the scores here agree with
      // the published minimizer even inside near-degenerate bottom clusters.
      const EigenPair e = hermitian_eig(rest);
      cut_scores.setZero();
      for (Index a = 0; a < r; ++a) {
        cut_scores(comp[static_cast<size_t>(a)]) = std::norm(e.vectors(a, 0));
      }
    } else if (cfg.kind == StrategyKind::MaxCov) {
      // Saturation level: grand mean of |T| before anything is selected, mean
      // accumulated coverage afterwards.
      const double eps =
          sel.empty() ? absT.sum() / (static_cast<double>(n) * static_cast<double>(n))
                      : coverage.sum() / static_cast<double>(n);
      const RVector w = (RVector::Constant(n, eps) - coverage).cwiseMax(0.0);
      if (w.sum() == 0.0) {
        cov_scores = colsum;  // everything saturated: fall back to raw mass
      } else {
        cov_scores.noalias() = absT.transpose() * w;
      }
    }
  }

  // Eigenvalues (ascending, clamped at zero) of the candidate Gram on the
  // smaller side; *rows_out reports the candidate row count |S| + 1.
  RVector candidate_spectrum(Index y, Index* rows_out) {
    const Index s = static_cast<Index>(sel.size());
    const Index r = s + 1;
    if (rows_out) *rows_out = r;
    if (r <= f) {
      CMatrix m(r, r);
      m.topLeftCorner(s, s) = rowgram.topLeftCorner(s, s);
      for (Index i = 0; i < s; ++i) {
        const Complex b = cf.col(sel[static_cast<size_t>(i)]).dot(cf.col(y));
        m(i, s) = b;
        m(s, i) = std::conj(b);
      }
      m(s, s) = Complex(cf.col(y).squaredNorm(), 0.0);
      es.compute(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseMax(0.0);
    }
    CMatrix g = gram;
    g.noalias() += cf.col(y) * cf.col(y).adjoint();
    es.compute(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0);
  }

  bool fast_active() const {
    return cfg.fast_updates && fast_ok && static_cast<Index>(sel.size()) >= f &&
           (cfg.kind == StrategyKind::MinTrac || cfg.kind == StrategyKind::MaxVol);
  }

  double score(Index y) {
    switch (cfg.kind) {
      case StrategyKind::MaxCut:
        return cut_scores(y);
      case StrategyKind::MaxCov:
        return cov_scores(y);
      case StrategyKind::MaxSigMin: {
        const RVector lam = candidate_spectrum(y, nullptr);
        return std::sqrt(lam(0));
      }
      case StrategyKind::MaxSig: {
        const RVector lam = candidate_spectrum(y, nullptr);
        return lam.sum();
      }
      case StrategyKind::MinPinv: {
        Index r = 0;
        const RVector lam = candidate_spectrum(y, &r);
        const double cut = lambda_cutoff(r, f, lam(lam.size() - 1));
        double sum = 0.0;
        Index kept = 0;
        for (Index i = 0; i < lam.size(); ++i) {
          if (lam(i) > cut) {
            sum += 1.0 / lam(i);
            ++kept;
          }
        }
        if (kept < std::min(r, f)) iter_fallback = true;
        return -sum;
      }
      case StrategyKind::MinTrac: {
        if (fast_active()) {
          const CVector c = cf.col(y);
          const CVector gc = ginv * c;
          const double q = 1.0 + c.dot(gc).real();
          if (q > 1e-12) return -(ginv_trace - gc.squaredNorm() / q);
        }
        // The defining matrix is the |F| x |F| band Gram; while the rank is
        // short of |F| its inverse cannot exist and the dagger stands in.
        // The candidate spectrum carries the nonzero part exactly, without
        // the rounding-scale null eigenvalues an |F| x |F| eigensolve of a
        // structurally deficient Gram would produce.
        const Index r = static_cast<Index>(sel.size()) + 1;
        if (r < f) {
          const RVector lam = candidate_spectrum(y, nullptr);
          const double cut = lambda_cutoff(f, f, lam(lam.size() - 1));
          double sum = 0.0;
          for (Index i = 0; i < lam.size(); ++i) {
            if (lam(i) > cut) sum += 1.0 / lam(i);
          }
          iter_fallback = true;
          return -sum;
        }
        CMatrix g = gram;
        g.noalias() += cf.col(y) * cf.col(y).adjoint();
        es.compute(g, Eigen::EigenvaluesOnly);
        const RVector lam = es.eigenvalues().cwiseMax(0.0);
        const double cut = lambda_cutoff(r, f, lam(lam.size() - 1));
        double sum = 0.0;
        Index kept = 0;
        for (Index i = 0; i < lam.size(); ++i) {
          if (lam(i) > cut) {
            sum += 1.0 / lam(i);
            ++kept;
          }
        }
        if (kept < f) iter_fallback = true;
        return -sum;
      }
      case StrategyKind::MaxVol: {
        if (fast_active()) {
          const CVector c = cf.col(y);
          const double q = 1.0 + c.dot(ginv * c).real();
          if (q > 0.0) return logdet + std::log(q);
        }
        Index r = 0;
        const RVector lam = candidate_spectrum(y, &r);
        const double cut = lambda_cutoff(r, f, lam(lam.size() - 1));
        double sum = 0.0;
        Index kept = 0;
        for (Index i = 0; i < lam.size(); ++i) {
          if (lam(i) > cut) {
            sum += std::log(lam(i));
            ++kept;
          }
        }
        if (kept == 0) {
          iter_fallback = true;
          return -kInf;
        }
        if (kept < std::min(r, f) || r > f) iter_fallback = true;
        return sum;
      }
      default:
        throw InvalidArgument("score: strategy has no objective");
    }
  }

  void choose(Index y) {
    if (uses_band_gram(cfg.kind)) {
      const Index s = static_cast<Index>(sel.size());
      const CVector c = cf.col(y);
      const bool fast_kind =
          cfg.fast_updates &&
          (cfg.kind == StrategyKind::MinTrac || cfg.kind == StrategyKind::MaxVol);
      if (fast_kind && fast_ok && s >= f) {
        const CVector gc = ginv * c;
        const double q = 1.0 + c.dot(gc).real();
        if (q > 1e-12) {
          ginv.noalias() -= (gc * gc.adjoint()) / q;
          logdet += std::log(q);
          ginv_trace = ginv.trace().real();
        } else {
          fast_ok = false;
        }
      }
      if (s < rowgram.rows()) {
        for (Index i = 0; i < s; ++i) {
          const Complex b = cf.col(sel[static_cast<size_t>(i)]).dot(c);
          rowgram(i, s) = b;
          rowgram(s, i) = std::conj(b);
        }
        rowgram(s, s) = Complex(c.squaredNorm(), 0.0);
      }
      gram.noalias() += c * c.adjoint();
      sel.push_back(y);
      if (fast_kind && static_cast<Index>(sel.size()) == f) {
        // First moment the band Gram can be full rank: seed the running
        // inverse and log det exactly.
        Eigen::LDLT<CMatrix> ldlt(gram);
        const RVector d = ldlt.vectorD().real();
        if (ldlt.info() == Eigen::Success && d.minCoeff() > 0.0) {
          ginv = ldlt.solve(CMatrix::Identity(f, f));
          ginv_trace = ginv.trace().real();
          logdet = d.array().log().sum();
          fast_ok = true;
        } else {
          fast_ok = false;
        }
      }
    } else {
      if (cfg.kind == StrategyKind::MaxCov) coverage += absT.col(y);
      sel.push_back(y);
    }
    picked[static_cast<size_t>(y)] = 1;
  }
};

}  // namespace

const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::MaxCut: return "MaxCut";
    case StrategyKind::MaxSigMin: return "MaxSigMin";
    case StrategyKind::MinTrac: return "MinTrac";
    case StrategyKind::MinPinv: return "MinPinv";
    case StrategyKind::MaxSig: return "MaxSig";
    case StrategyKind::MaxVol: return "MaxVol";
    case StrategyKind::MaxCov: return "MaxCov";
    case StrategyKind::Random: return "Random";
  }
  throw InvalidArgument("to_string: unknown strategy");
}

StrategyKind strategy_from_string(const std::string& s) {
  if (s == "MaxCut") return StrategyKind::MaxCut;
  if (s == "MaxSigMin") return StrategyKind::MaxSigMin;
  if (s == "MinTrac") return StrategyKind::MinTrac;
  if (s == "MinPinv") return StrategyKind::MinPinv;
  if (s == "MaxSig") return StrategyKind::MaxSig;
  if (s == "MaxVol") return StrategyKind::MaxVol;
  if (s == "MaxCov") return StrategyKind::MaxCov;
  if (s == "Random") return StrategyKind::Random;
  throw InvalidArgument("strategy_from_string: unknown strategy '" + s + "'");
}

void StrategyConfig::validate() const {
  if (cut_order < 1) {
    throw InvalidArgument("StrategyConfig: cut_order must be >= 1");
  }
  if (kernel.has_value() != (kind == StrategyKind::MaxCov)) {
    throw InvalidArgument(
        "StrategyConfig: kernel is required for MaxCov and rejected elsewhere");
  }
  if (seed.has_value() != (kind == StrategyKind::Random)) {
    throw InvalidArgument(
        "StrategyConfig: seed is required for Random and rejected elsewhere");
  }
  if (fast_updates && kind != StrategyKind::MinTrac && kind != StrategyKind::MaxVol) {
    throw InvalidArgument(
        "StrategyConfig: fast_updates applies to MinTrac and MaxVol only");
  }
}

IndexSet SamplingResult::index_set(Index universe) const {
  return IndexSet(selected, universe);
}

SamplingResult greedy_select(const GfrftOperator& op, const IndexSet& band,
                             Index m, const StrategyConfig& cfg) {
  cfg.validate();
  const Index n = op.n();
  if (band.universe() != n) {
    throw DimensionMismatch("greedy_select: band universe does not match operator");
  }
  if (band.empty()) throw InvalidArgument("greedy_select: band is empty");
  if (m < 1 || m > n) {
    throw InvalidArgument("greedy_select: sample size must lie in [1, n]");
  }

  using Clock = std::chrono::steady_clock;
  SamplingResult out;
  out.selected.reserve(static_cast<size_t>(m));
  out.objective_trace.reserve(static_cast<size_t>(m));
  out.elapsed_seconds.reserve(static_cast<size_t>(m));

  if (cfg.kind == StrategyKind::Random) {
    rng::SplitMix64 g(*cfg.seed);
    std::vector<Index> pool(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
    for (Index i = 0; i < m; ++i) {
      const auto t0 = Clock::now();
      const Index j = i + static_cast<Index>(g.uniform_index(static_cast<uint64_t>(n - i)));
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
      out.selected.push_back(pool[static_cast<size_t>(i)]);
      out.objective_trace.push_back(0.0);
      out.elapsed_seconds.push_back(
          std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return out;
  }

  Evaluator ev(op, band, cfg, m);
  for (Index it = 0; it < m; ++it) {
    const auto t0 = Clock::now();
    ev.prepare();
    Index best_y = -1;
    double best = -kInf;
    for (Index y = 0; y < n; ++y) {
      if (ev.picked[static_cast<size_t>(y)]) continue;
      const double v = ev.score(y);
      if (v > best || best_y < 0) {
        best = v;
        best_y = y;
      }
    }
    ev.choose(best_y);
    out.selected.push_back(best_y);
    out.objective_trace.push_back(best);
    if (ev.iter_fallback) out.pinv_fallbacks.push_back(it);
    out.elapsed_seconds.push_back(
        std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return out;
}

double marginal_objective(const GfrftOperator& op, const IndexSet& band,
                          const IndexSet& current, Index y,
                          const StrategyConfig& cfg, bool* used_pinv) {
  cfg.validate();
  if (cfg.kind == StrategyKind::Random) {
    throw InvalidArgument("marginal_objective: Random has no objective");
  }
  const Index n = op.n();
  if (band.universe() != n || current.universe() != n) {
    throw DimensionMismatch("marginal_objective: index universe mismatch");
  }
  if (y < 0 || y >= n || current.contains(y)) {
    throw InvalidArgument("marginal_objective: candidate must be an unselected vertex");
  }
  Evaluator ev(op, band, cfg, current.size() + 1);
  for (Index i = 0; i < current.size(); ++i) ev.choose(current[i]);
  ev.prepare();
  const double v = ev.score(y);
  if (used_pinv == nullptr) {
    if (ev.iter_fallback) {
      throw SingularSubproblem(
          "marginal_objective: exact inverse/determinant undefined at |current| = " +
          std::to_string(current.size()) + "; pass used_pinv for the dagger fallback");
    }
  } else {
    *used_pinv = ev.iter_fallback;
  }
  return v;
}

double localized_objective(const LocalizationOperator& t, const IndexSet& s,
                           DesignObjective kind) {
  const Index n = t.n();
  if (s.universe() != n) {
    throw DimensionMismatch("localized_objective: index universe mismatch");
  }
  if (s.empty()) throw InvalidArgument("localized_objective: empty vertex set");

  if (kind == DesignObjective::MinSingular) {
    CMatrix tvs(n, s.size());
    for (Index k = 0; k < s.size(); ++k) tvs.col(k) = t.matrix.col(s[k]);
    Eigen::JacobiSVD<CMatrix> sv(tvs);
    const RVector& sig = sv.singularValues();
    const double cut = default_svd_rtol(n, s.size()) * sig(0);
    double smallest = -1.0;
    for (Index i = 0; i < sig.size(); ++i) {
      if (sig(i) > cut) smallest = sig(i);
    }
    if (smallest <= 0.0) {
      throw SingularSubproblem("localized_objective: T_VS is numerically rank zero");
    }
    return smallest;  // = 1 / ||(T_VS)^+||_2
  }

  CMatrix ts(s.size(), s.size());
  for (Index a = 0; a < s.size(); ++a) {
    for (Index b = 0; b < s.size(); ++b) ts(a, b) = t.matrix(s[a], s[b]);
  }
  if (kind == DesignObjective::Trace) return ts.trace().real();

  Eigen::SelfAdjointEigenSolver<CMatrix> es(ts, Eigen::EigenvaluesOnly);
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  const double cut =
      default_svd_rtol(s.size(), s.size()) * lam(lam.size() - 1);
  double trace_inv = 0.0;
  double log_det = 0.0;
  Index kept = 0;
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > cut && lam(i) > 0.0) {
      trace_inv += 1.0 / lam(i);
      log_det += std::log(lam(i));
      ++kept;
    }
  }
  if (kept == 0) {
    throw SingularSubproblem("localized_objective: T_S is numerically rank zero");
  }
  return kind == DesignObjective::TraceInverse ? trace_inv : std::exp(log_det);
}

}  // namespace gfrft

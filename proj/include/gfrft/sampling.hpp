#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfrft/gfrft.hpp"

namespace gfrft {

// Greedy sampling-set selection strategies. All share one loop that adds the
// vertex maximizing a per-strategy marginal objective (minimizing criteria
// are negated); Random ignores objectives and draws uniformly without
// replacement.
enum class StrategyKind {
  MaxCut,     // energy of the spectral-proxy minimizer on the unsampled set
  MaxSigMin,  // smallest singular value of the sampled transform block
  MinTrac,    // trace of the (pseudo-)inverse of the sampled band Gram
  MinPinv,    // sum of inverse squared singular values (reconstructor norm)
  MaxSig,     // sum of squared singular values (sampled band energy)
  MaxVol,     // (pseudo-)determinant of the sampled band Gram
  MaxCov,     // coverage of localization-operator mass with saturation
  Random,
};

const char* to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& s);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::MaxSigMin;
  int cut_order = 6;             // k in the MaxCut proxy (L^alpha)^{2k}
  std::optional<Kernel> kernel;  // required for MaxCov, rejected elsewhere
  std::optional<uint64_t> seed;  // required for Random, rejected elsewhere
  bool fast_updates = false;     // rank-one update path (MinTrac, MaxVol only)

  void validate() const;
};

struct SamplingResult {
  std::vector<Index> selected;          // selection order, not sorted
  std::vector<double> objective_trace;  // maximized value per iteration
  std::vector<double> elapsed_seconds;  // wall time per iteration
  // Iterations whose objective needed a pseudo-inverse / pseudo-determinant
  // because the exact inverse or determinant did not exist.
  std::vector<Index> pinv_fallbacks;

  IndexSet index_set(Index universe) const;
};

// Grows a sampling set of size m for the band `band` (both indexed against
// op.n()). Deterministic: candidate scan in ascending vertex order, strict
// improvement, so exact objective ties go to the lowest index.
SamplingResult greedy_select(const GfrftOperator& op, const IndexSet& band,
                             Index m, const StrategyConfig& cfg);

// Objective value the greedy loop would assign to adding y at state
// `current`. When the exact inverse or determinant behind the objective does
// not exist (e.g. MinTrac with |current| + 1 < |band|) the call throws
// SingularSubproblem unless `used_pinv` is supplied, in which case the dagger
// fallback value is returned and *used_pinv is set — the same value
// greedy_select uses while recording the iteration in pinv_fallbacks.
// Throws InvalidArgument for Random.
double marginal_objective(const GfrftOperator& op, const IndexSet& band,
                          const IndexSet& current, Index y,
                          const StrategyConfig& cfg, bool* used_pinv = nullptr);

// Design objectives evaluated on a localization operator restricted to S:
// A-optimal tr[(T_S)^+], T-optimal tr[T_S], D-optimal pseudo-determinant of
// T_S, E-optimal smallest retained singular value of T_VS. Throws
// SingularSubproblem when the restriction is numerically rank zero and the
// objective needs an inverse or determinant.
enum class DesignObjective { TraceInverse, Trace, Determinant, MinSingular };

double localized_objective(const LocalizationOperator& t, const IndexSet& s,
                           DesignObjective kind);

}  // namespace gfrft

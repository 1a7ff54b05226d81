#pragma once

// Optimal CHSH value of a context distribution and the bounds relating it to
// measurement dependence M and hiddenness H.

#include <array>
#include <cstddef>
#include <vector>

#include "bellmd/measures.hpp"
#include "bellmd/model.hpp"

namespace bellmd {

/// One-sided slack used by every inequality check.
inline constexpr double kBoundTolerance = 1e-9;
inline constexpr std::size_t kDefaultOracleCap = 20;

/// Weights (p(lambda|00), p(lambda|01), p(lambda|10), p(lambda|11)) of one hidden variable.
using ZTuple = std::array<double, kContexts>;

/// Deterministic local strategy for one hidden variable; each entry is +1 or -1.
struct SignAssignment {
  int a0 = 1;  // A
  int a1 = 1;  // A'
  int b0 = 1;  // B
  int b1 = 1;  // B'
};

/// z1 A B + z2 A B' + z3 A' B - z4 A' B'.
double chsh_objective(const ZTuple& z, double a0, double a1, double b0, double b1);

/// Sum(z) - 2 min(z); the maximum of chsh_objective over [-1,1]^4.
double g_function(const ZTuple& z);

/// First maximizer of chsh_objective over the 16 sign assignments, scanned
/// lexicographically over (A, A', B, B') with +1 before -1.
SignAssignment best_signs(const ZTuple& z);

/// 4 - 2 sum_lambda min_context p(lambda|context).  Always in [2, 4].
double optimal_chsh(const ContextDistribution& dist);

/// Deterministic, lambda-dependent responses whose CHSH value equals optimal_chsh.
LocalResponses optimal_responses(const ContextDistribution& dist);

/// Per-lambda maximization over the 16 sign assignments, summed.  Shares no
/// code with optimal_chsh; used as its oracle.
double brute_force_optimal_chsh(const ContextDistribution& dist, std::size_t cap = kDefaultOracleCap);

/// min(min(H,3) M + 2, 4); H = 0 admits only M = 0 and yields 2.
double upper_bound(std::size_t hiddenness, double dependence);

/// M + 2.
double lower_bound_copt(double dependence);

/// Smallest M compatible with a CHSH value C at hiddenness H: (C-2)/min(H,3).
double min_dependence_for_chsh(double chsh, std::size_t hiddenness);

TradeoffReport check_tradeoff(const LocalModel& model, HiddennessMode mode = HiddennessMode::Declared);

/// For each lambda the lowest context index attaining min_i p(lambda|i).
std::vector<ContextIndex> min_index_per_lambda(const ContextDistribution& dist);

/// sum_lambda min_i p(lambda|i).
double sum_of_minima(const ContextDistribution& dist);

struct LemmaWitness {
  ContextIndex i = 0;
  ContextIndex j = 0;
  std::size_t lambda = 0;
  double lhs = 0.0;
};

/// Searches every (i, j, lambda) for
///   sum_lambda' p(lambda'|i_lambda') + weight |p(lambda|i) - p(lambda|j)| >= 1
/// and returns the triple with the largest left-hand side (first in scan order on ties).
/// Throws ErrorKind::Invariant when no triple reaches 1 - 1e-9.
LemmaWitness find_lemma_witness(const ContextDistribution& dist, double weight);

/// n = 3, weight 2.
LemmaWitness lemma_witness_n3(const ContextDistribution& dist);
/// n = 4, weight 3.
LemmaWitness lemma_witness_n4(const ContextDistribution& dist);

struct CoarseGraining {
  /// p~(gamma|i) = sum over lambda in E_gamma of p(lambda|i); always n = 4.
  ContextDistribution dist;
  /// E_gamma for gamma = 0..3, as lambda indices of the original distribution.
  std::array<std::vector<std::size_t>, kContexts> cells;
};

/// Groups hidden variables by their minimizing context.  Requires n >= 5.
CoarseGraining coarse_grain(const ContextDistribution& dist);

/// Quantities of the H >= 4 reduction evaluated on one distribution.
struct CoarseGrainCheck {
  double sum_min_original = 0.0;
  double sum_min_coarse = 0.0;
  double dependence_original = 0.0;
  double dependence_coarse = 0.0;
  LemmaWitness witness;          // from lemma_witness_n4 on the coarse distribution
  double chained_lhs = 0.0;      // sum_min_original + 1.5 * dependence_original
  bool sums_agree = false;       // |sum_min_coarse - sum_min_original| <= 1e-12
  bool dependence_monotone = false;  // M(coarse) <= M(original) + 1e-12
  bool chained_holds = false;    // chained_lhs >= 1 - 1e-9

  bool ok() const { return sums_agree && dependence_monotone && chained_holds; }
};

CoarseGrainCheck check_coarse_grain(const ContextDistribution& dist);

}  // namespace bellmd

#include "bellmd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "bellmd/error.hpp"

namespace bellmd {

namespace {

void check_dependence(double m) {
  if (!std::isfinite(m) || m < -kBoundTolerance || m > 2.0 + kBoundTolerance) {
    fail(ErrorKind::Domain, fmt::format("measurement dependence {} outside [0, 2]", m));
  }
}

constexpr int sign_at(unsigned bits, unsigned position) {
  return (bits >> position) & 1U ? -1 : +1;
}

// Bit 3 is A, bit 0 is B'; counting upward gives the lexicographic order with +1 first.
SignAssignment signs_from_bits(unsigned bits) {
  return {sign_at(bits, 3), sign_at(bits, 2), sign_at(bits, 1), sign_at(bits, 0)};
}

double objective(const ZTuple& z, const SignAssignment& s) {
  return chsh_objective(z, s.a0, s.a1, s.b0, s.b1);
}

}  // namespace

double chsh_objective(const ZTuple& z, double a0, double a1, double b0, double b1) {
  return z[0] * a0 * b0 + z[1] * a0 * b1 + z[2] * a1 * b0 - z[3] * a1 * b1;
}

double g_function(const ZTuple& z) {
  for (double v : z) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::Domain, fmt::format("z-tuple entry {} is negative", v));
    }
  }
  const double total = z[0] + z[1] + z[2] + z[3];
  return total - 2.0 * *std::min_element(z.begin(), z.end());
}

SignAssignment best_signs(const ZTuple& z) {
  SignAssignment best = signs_from_bits(0);
  double best_value = objective(z, best);
  for (unsigned bits = 1; bits < 16; ++bits) {
    const auto s = signs_from_bits(bits);
    const double v = objective(z, s);
    if (v > best_value) {
      best = s;
      best_value = v;
    }
  }
  return best;
}

double sum_of_minima(const ContextDistribution& dist) {
  double sum = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto col = dist.column(k);
    sum += *std::min_element(col.begin(), col.end());
  }
  return sum;
}

double optimal_chsh(const ContextDistribution& dist) {
  return 4.0 - 2.0 * sum_of_minima(dist);
}

LocalResponses optimal_responses(const ContextDistribution& dist) {
  const std::size_t n = dist.size();
  LocalResponses::Table a{std::vector<double>(n), std::vector<double>(n)};
  LocalResponses::Table b{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = best_signs(dist.column(k));
    a[0][k] = s.a0 > 0 ? 1.0 : 0.0;
    a[1][k] = s.a1 > 0 ? 1.0 : 0.0;
    b[0][k] = s.b0 > 0 ? 1.0 : 0.0;
    b[1][k] = s.b1 > 0 ? 1.0 : 0.0;
  }
  return LocalResponses::create(std::move(a), std::move(b));
}

double brute_force_optimal_chsh(const ContextDistribution& dist, std::size_t cap) {
  if (dist.size() > cap) {
    fail(ErrorKind::Resource,
         fmt::format("brute-force oracle limited to {} hidden variables, got {}", cap, dist.size()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto z = dist.column(k);
    double best = -4.0;
    for (unsigned bits = 0; bits < 16; ++bits) {
      best = std::max(best, objective(z, signs_from_bits(bits)));
    }
    total += best;
  }
  return total;
}

double upper_bound(std::size_t hiddenness, double dependence) {
  check_dependence(dependence);
  if (hiddenness == 0) {
    if (dependence > kBoundTolerance) {
      fail(ErrorKind::Infeasible,
           fmt::format("H = 0 admits only M = 0 (C_opt = 2), got M = {}", dependence));
    }
    return 2.0;
  }
  const double slope = static_cast<double>(std::min<std::size_t>(hiddenness, 3));
  return std::min(slope * std::max(dependence, 0.0) + 2.0, 4.0);
}

double lower_bound_copt(double dependence) {
  check_dependence(dependence);
  return std::clamp(dependence, 0.0, 2.0) + 2.0;
}

double min_dependence_for_chsh(double chsh, std::size_t hiddenness) {
  if (!std::isfinite(chsh) || chsh < 2.0 - kBoundTolerance || chsh > 4.0 + kBoundTolerance) {
    fail(ErrorKind::Domain, fmt::format("CHSH value {} outside [2, 4]", chsh));
  }
  const double excess = std::clamp(chsh - 2.0, 0.0, 2.0);
  if (hiddenness == 0) {
    if (chsh > 2.0 + kBoundTolerance) {
      fail(ErrorKind::Infeasible, fmt::format("H = 0 cannot exceed C = 2, requested {}", chsh));
    }
    return 0.0;
  }
  return excess / static_cast<double>(std::min<std::size_t>(hiddenness, 3));
}

TradeoffReport check_tradeoff(const LocalModel& model, HiddennessMode mode) {
  TradeoffReport r;
  r.mode = mode;
  r.hiddenness = hiddenness(model.dist(), mode);
  r.dependence = measurement_dependence(model.dist());
  r.chsh = chsh_value(joint_distribution(model));
  r.optimal_chsh = optimal_chsh(model.dist());
  r.lower_bound = lower_bound_copt(r.dependence);
  // Effective H = 0 can coexist with M of order n * 1e-9; report rather than throw.
  r.upper_bound = r.hiddenness == 0
                      ? 2.0
                      : upper_bound(r.hiddenness, r.dependence);

  r.chsh_within_optimal = r.chsh <= r.optimal_chsh + kBoundTolerance;
  r.chsh_within_upper = r.chsh <= r.upper_bound + kBoundTolerance;
  r.optimal_within_upper = r.optimal_chsh <= r.upper_bound + kBoundTolerance;
  r.lower_within_optimal = r.lower_bound <= r.optimal_chsh + kBoundTolerance;
  return r;
}

std::vector<ContextIndex> min_index_per_lambda(const ContextDistribution& dist) {
  std::vector<ContextIndex> out(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto col = dist.column(k);
    out[k] = static_cast<ContextIndex>(std::min_element(col.begin(), col.end()) - col.begin());
  }
  return out;
}

LemmaWitness find_lemma_witness(const ContextDistribution& dist, double weight) {
  const double base = sum_of_minima(dist);
  LemmaWitness best;
  best.lhs = -1.0;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    for (ContextIndex j = 0; j < kContexts; ++j) {
      for (std::size_t k = 0; k < dist.size(); ++k) {
        const double lhs = base + weight * std::abs(dist(i, k) - dist(j, k));
        if (lhs > best.lhs) best = {i, j, k, lhs};
      }
    }
  }
  if (best.lhs < 1.0 - kBoundTolerance) {
    fail(ErrorKind::Invariant,
         fmt::format("no lemma witness: best left-hand side {:.17g} < 1 (n = {}, weight {})",
                     best.lhs, dist.size(), weight));
  }
  return best;
}

LemmaWitness lemma_witness_n3(const ContextDistribution& dist) {
  if (dist.size() != 3) {
    fail(ErrorKind::Domain, fmt::format("lemma_witness_n3 needs 3 hidden variables, got {}", dist.size()));
  }
  return find_lemma_witness(dist, 2.0);
}

LemmaWitness lemma_witness_n4(const ContextDistribution& dist) {
  if (dist.size() != 4) {
    fail(ErrorKind::Domain, fmt::format("lemma_witness_n4 needs 4 hidden variables, got {}", dist.size()));
  }
  return find_lemma_witness(dist, 3.0);
}

CoarseGraining coarse_grain(const ContextDistribution& dist) {
  if (dist.size() < 5) {
    fail(ErrorKind::Domain,
         fmt::format("coarse-graining applies to n >= 5, got n = {}; use the direct lemmas", dist.size()));
  }
  const auto argmin = min_index_per_lambda(dist);
  std::array<std::vector<std::size_t>, kContexts> cells;
  for (std::size_t k = 0; k < dist.size(); ++k) cells[argmin[k]].push_back(k);

  ContextDistribution::Rows rows;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    rows[i].resize(kContexts, 0.0);
    for (std::size_t gamma = 0; gamma < kContexts; ++gamma) {
      for (std::size_t k : cells[gamma]) rows[i][gamma] += dist(i, k);
    }
    // Sums of valid probabilities can overshoot 1 by an ulp.
    for (double& v : rows[i]) v = std::min(v, 1.0);
  }
  return {ContextDistribution::from_rows(std::move(rows), {"E_1", "E_2", "E_3", "E_4"}), std::move(cells)};
}

CoarseGrainCheck check_coarse_grain(const ContextDistribution& dist) {
  const auto coarse = coarse_grain(dist);
  CoarseGrainCheck c;
  c.sum_min_original = sum_of_minima(dist);
  c.sum_min_coarse = sum_of_minima(coarse.dist);
  c.dependence_original = measurement_dependence(dist);
  c.dependence_coarse = measurement_dependence(coarse.dist);
  c.witness = lemma_witness_n4(coarse.dist);
  c.chained_lhs = c.sum_min_original + 1.5 * c.dependence_original;
  c.sums_agree = std::abs(c.sum_min_coarse - c.sum_min_original) <= kComputeTolerance;
  c.dependence_monotone = c.dependence_coarse <= c.dependence_original + kComputeTolerance;
  c.chained_holds = c.chained_lhs >= 1.0 - kBoundTolerance;
  return c;
}

}  // namespace bellmd

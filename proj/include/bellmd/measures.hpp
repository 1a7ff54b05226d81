#pragma once

#include <cstddef>
#include <span>

#include "bellmd/model.hpp"

namespace bellmd {

/// Half the L1 distance between two probability vectors of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Largest L1 distance between p(.|context) rows over the six context pairs.
/// Lies in [0, 2]; zero exactly when the model is measurement independent.
double measurement_dependence(const ContextDistribution& dist);

enum class HiddennessMode {
  Declared,   // #Lambda - 1, counting zero-probability hidden variables
  Effective,  // counts only hidden variables with some context probability > 1e-9
};

std::size_t hiddenness(const ContextDistribution& dist, HiddennessMode mode = HiddennessMode::Declared);

/// Drops hidden variables whose probability is <= 1e-9 under every context.
ContextDistribution trim_zero_rows(const ContextDistribution& dist);

/// Threshold below which a hidden variable counts as absent.
inline constexpr double kZeroThreshold = 1e-9;

struct TradeoffReport {
  std::size_t hiddenness = 0;
  HiddennessMode mode = HiddennessMode::Declared;
  double dependence = 0.0;  // M
  double chsh = 0.0;        // C realized by the model's responses
  double optimal_chsh = 0.0;
  double lower_bound = 0.0;  // M + 2
  double upper_bound = 0.0;  // min(min(H,3) M + 2, 4)

  bool chsh_within_optimal = false;      // C <= C_opt
  bool chsh_within_upper = false;        // C <= upper
  bool optimal_within_upper = false;     // C_opt <= upper
  bool lower_within_optimal = false;     // M + 2 <= C_opt

  bool all_satisfied() const {
    return chsh_within_optimal && chsh_within_upper && optimal_within_upper && lower_within_optimal;
  }
};

}  // namespace bellmd

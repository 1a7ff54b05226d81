#pragma once

// Finite-statistics CHSH experiments driven by a LocalModel.
//
// Sampling is context-first: for every context the experimenter runs
// `trials` rounds, each drawing lambda ~ p(lambda|x,y) and then the two
// outcomes independently from p(a|x,lambda) and p(b|y,lambda).
//
// Random stream: context i uses std::mt19937_64 seeded with
// splitmix64(seed ^ splitmix64(i + 1)); uniforms take the top 53 bits.
// Both pieces are fully specified, so records are reproducible across platforms.

#include <array>
#include <cstdint>

#include "bellmd/model.hpp"

namespace bellmd {

inline constexpr const char* kRngStream = "mt19937_64+splitmix64-substream/53bit-uniform";

struct ExperimentRecord {
  /// counts[context][pair], pairs ordered (+,+),(+,-),(-,+),(-,-).
  std::array<std::array<std::uint64_t, kOutcomePairs>, kContexts> counts{};
  std::array<std::uint64_t, kContexts> trials{};
  std::uint64_t seed = 0;

  /// Throws ErrorKind::Validation when row sums disagree with trials.
  void validate() const;
};

struct Estimate {
  std::array<double, kContexts> correlators{};
  double chsh = 0.0;
  /// sqrt(sum over contexts of (1 - E^2) / N), independent-binomial approximation.
  double stderr_chsh = 0.0;
};

ExperimentRecord sample(const LocalModel& model, std::uint64_t trials_per_context, std::uint64_t seed);

Estimate estimate(const ExperimentRecord& record);

/// Seed for the generator of one context.
std::uint64_t substream_seed(std::uint64_t seed, ContextIndex context);

}  // namespace bellmd

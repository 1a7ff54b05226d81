#pragma once

// Random instances for property sweeps.  Each context row is drawn uniformly
// from the probability simplex (normalized exponentials); response
// probabilities are uniform on [0, 1].

#include <cstdint>
#include <random>
#include <vector>

#include "bellmd/model.hpp"

namespace bellmd {

class RandomModels {
 public:
  explicit RandomModels(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::vector<double> simplex(std::size_t n);
  ContextDistribution dist(std::size_t n);
  LocalResponses responses(std::size_t n);
  LocalModel model(std::size_t n);
  /// Uniform integer in [lo, hi].
  std::size_t size_between(std::size_t lo, std::size_t hi);

 private:
  std::mt19937_64 gen_;
};

}  // namespace bellmd

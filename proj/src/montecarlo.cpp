#include "bellmd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "bellmd/error.hpp"

namespace bellmd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::array<std::uint64_t, kOutcomePairs> sample_context(const LocalModel& model, ContextIndex i,
                                                        std::uint64_t trials, std::uint64_t seed) {
  const auto& dist = model.dist();
  const auto& resp = model.responses();
  const auto ctx = MeasurementContext::from_index(i);

  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    acc += dist(i, k);
    cdf[k] = acc;
  }
  // Last index with positive mass absorbs rounding at the top of the CDF.
  std::size_t last = dist.size() - 1;
  while (last > 0 && dist(i, last) == 0.0) --last;

  std::mt19937_64 gen(substream_seed(seed, i));
  std::array<std::uint64_t, kOutcomePairs> counts{};
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const double u = uniform01(gen) * acc;
    auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    k = std::min(k, last);
    const bool a_plus = uniform01(gen) < resp.a_plus(ctx.x, k);
    const bool b_plus = uniform01(gen) < resp.b_plus(ctx.y, k);
    ++counts[(a_plus ? 0 : 2) + (b_plus ? 0 : 1)];
  }
  return counts;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, ContextIndex context) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(context) + 1));
}

void ExperimentRecord::validate() const {
  for (ContextIndex i = 0; i < kContexts; ++i) {
    std::uint64_t sum = 0;
    for (auto c : counts[i]) sum += c;
    if (sum != trials[i]) {
      fail(ErrorKind::Validation,
           fmt::format("context {} counts sum to {} but trials is {}", i, sum, trials[i]));
    }
  }
}

ExperimentRecord sample(const LocalModel& model, std::uint64_t trials_per_context, std::uint64_t seed) {
  if (trials_per_context == 0) fail(ErrorKind::Domain, "trials per context must be positive");
  ExperimentRecord record;
  record.seed = seed;
  std::array<std::future<std::array<std::uint64_t, kOutcomePairs>>, kContexts> jobs;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    jobs[i] = std::async(std::launch::async, sample_context, std::cref(model), i, trials_per_context, seed);
  }
  for (ContextIndex i = 0; i < kContexts; ++i) {
    record.counts[i] = jobs[i].get();
    record.trials[i] = trials_per_context;
  }
  return record;
}

Estimate estimate(const ExperimentRecord& record) {
  record.validate();
  Estimate e;
  double variance = 0.0;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    if (record.trials[i] == 0) {
      fail(ErrorKind::Domain, fmt::format("context {} has no trials", i));
    }
    const double n = static_cast<double>(record.trials[i]);
    double sum = 0.0;
    for (std::size_t k = 0; k < kOutcomePairs; ++k) {
      sum += outcome_a(k) * outcome_b(k) * static_cast<double>(record.counts[i][k]);
    }
    const double corr = sum / n;
    e.correlators[i] = corr;
    variance += std::max(0.0, 1.0 - corr * corr) / n;
  }
  e.chsh = e.correlators[0] + e.correlators[1] + e.correlators[2] - e.correlators[3];
  e.stderr_chsh = std::sqrt(variance);
  return e;
}

}  // namespace bellmd

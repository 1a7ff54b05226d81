#include "bellmd/measures.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bellmd/error.hpp"

namespace bellmd {

namespace {

void check_normalized(std::span<const double> v, const char* name) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      fail(ErrorKind::Validation, fmt::format("{} has a non-probability entry {}", name, x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kInputTolerance) {
    fail(ErrorKind::Validation, fmt::format("{} sums to {:.17g}, not 1", name, sum));
  }
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += std::abs(p[k] - q[k]);
  return sum;
}

}  // namespace

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    fail(ErrorKind::Dimension, fmt::format("distributions have lengths {} and {}", p.size(), q.size()));
  }
  check_normalized(p, "P");
  check_normalized(q, "Q");
  return 0.5 * l1_distance(p, q);
}

double measurement_dependence(const ContextDistribution& dist) {
  double best = 0.0;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    for (ContextIndex j = i + 1; j < kContexts; ++j) {
      best = std::max(best, l1_distance(dist.row(i), dist.row(j)));
    }
  }
  return best;
}

std::size_t hiddenness(const ContextDistribution& dist, HiddennessMode mode) {
  if (mode == HiddennessMode::Declared) return dist.size() - 1;
  std::size_t present = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto col = dist.column(k);
    if (*std::max_element(col.begin(), col.end()) > kZeroThreshold) ++present;
  }
  if (present == 0) fail(ErrorKind::Validation, "no hidden variable carries probability");
  return present - 1;
}

ContextDistribution trim_zero_rows(const ContextDistribution& dist) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto col = dist.column(k);
    if (*std::max_element(col.begin(), col.end()) > kZeroThreshold) keep.push_back(k);
  }
  if (keep.size() == dist.size()) return dist;

  ContextDistribution::Rows rows;
  std::vector<std::string> labels;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    for (std::size_t k : keep) rows[i].push_back(dist(i, k));
  }
  if (!dist.labels().empty()) {
    for (std::size_t k : keep) labels.push_back(dist.labels()[k]);
  }
  // Dropped mass is at most n * 1e-9 per row, inside the input tolerance.
  return ContextDistribution::from_rows(std::move(rows), std::move(labels),
                                        {kInputTolerance, std::max(dist.size(), kDefaultMaxHidden)});
}

}  // namespace bellmd

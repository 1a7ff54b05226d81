#include "bellmd/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bellmd/error.hpp"

namespace bellmd {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Infeasible: return "infeasible input";
    case ErrorKind::Resource: return "resource error";
    case ErrorKind::Invariant: return "invariant violation";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

MeasurementContext MeasurementContext::from_index(ContextIndex index) {
  if (index >= kContexts) {
    fail(ErrorKind::Domain, fmt::format("context index {} out of range 0..3", index));
  }
  return {static_cast<int>(index / 2), static_cast<int>(index % 2)};
}

ContextIndex MeasurementContext::index() const {
  if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
    fail(ErrorKind::Domain, fmt::format("measurement settings must be binary, got ({},{})", x, y));
  }
  return static_cast<ContextIndex>(2 * x + y);
}

namespace {

std::string context_name(ContextIndex i) {
  return fmt::format("P{}{}", i / 2, i % 2);
}

void check_probability(double v, const std::string& where) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    fail(ErrorKind::Validation, fmt::format("{}: value {} is not a probability", where, v));
  }
}

}  // namespace

ContextDistribution ContextDistribution::from_rows(Rows rows, std::vector<std::string> labels,
                                                   const ValidationOptions& options) {
  const std::size_t n = rows[0].size();
  if (n == 0) fail(ErrorKind::Validation, "hidden-variable set must be non-empty");
  if (n > options.max_hidden) {
    fail(ErrorKind::Resource,
         fmt::format("{} hidden variables exceeds the limit of {}", n, options.max_hidden));
  }
  std::vector<double> probs;
  probs.reserve(kContexts * n);
  for (ContextIndex i = 0; i < kContexts; ++i) {
    if (rows[i].size() != n) {
      fail(ErrorKind::Validation,
           fmt::format("row {} ({}) has {} entries, expected {}", i, context_name(i), rows[i].size(), n));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      check_probability(rows[i][k], fmt::format("row {} ({}) entry {}", i, context_name(i), k));
      sum += rows[i][k];
    }
    if (std::abs(sum - 1.0) > options.tolerance) {
      fail(ErrorKind::Validation,
           fmt::format("row {} ({}) sums to {:.17g}, not 1", i, context_name(i), sum));
    }
    probs.insert(probs.end(), rows[i].begin(), rows[i].end());
  }
  if (!labels.empty() && labels.size() != n) {
    fail(ErrorKind::Validation, fmt::format("{} labels given for {} hidden variables", labels.size(), n));
  }
  return ContextDistribution(n, std::move(probs), std::move(labels));
}

ContextDistribution ContextDistribution::from_flat(std::span<const double> probs, std::size_t n,
                                                   const ValidationOptions& options) {
  if (probs.size() != kContexts * n) {
    fail(ErrorKind::Dimension, fmt::format("expected {} values for n={}, got {}", kContexts * n, n, probs.size()));
  }
  Rows rows;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    rows[i].assign(probs.begin() + static_cast<std::ptrdiff_t>(i * n),
                   probs.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
  }
  return from_rows(std::move(rows), {}, options);
}

std::array<double, kContexts> ContextDistribution::column(std::size_t lambda) const {
  return {(*this)(0, lambda), (*this)(1, lambda), (*this)(2, lambda), (*this)(3, lambda)};
}

std::string ContextDistribution::label(std::size_t lambda) const {
  if (!labels_.empty()) return labels_[lambda];
  return fmt::format("lambda_{}", lambda + 1);
}

ContextDistribution ContextDistribution::padded(std::size_t n) const {
  if (n < n_) {
    fail(ErrorKind::Dimension, fmt::format("cannot pad {} hidden variables down to {}", n_, n));
  }
  std::vector<double> probs(kContexts * n, 0.0);
  for (ContextIndex i = 0; i < kContexts; ++i) {
    for (std::size_t k = 0; k < n_; ++k) probs[i * n + k] = (*this)(i, k);
  }
  std::vector<std::string> labels;
  if (!labels_.empty()) {
    labels = labels_;
    for (std::size_t k = n_; k < n; ++k) labels.push_back(fmt::format("lambda_{}", k + 1));
  }
  return ContextDistribution(n, std::move(probs), std::move(labels));
}

LocalResponses LocalResponses::create(Table a_plus, Table b_plus) {
  const std::size_t n = a_plus[0].size();
  if (n == 0) fail(ErrorKind::Validation, "response tables must be non-empty");
  const auto check = [n](const Table& t, const char* name) {
    for (int s = 0; s < 2; ++s) {
      if (t[s].size() != n) {
        fail(ErrorKind::Validation,
             fmt::format("{} row {} has {} entries, expected {}", name, s, t[s].size(), n));
      }
      for (std::size_t k = 0; k < n; ++k) {
        check_probability(t[s][k], fmt::format("{} row {} entry {}", name, s, k));
      }
    }
  };
  check(a_plus, "a_plus");
  check(b_plus, "b_plus");
  return LocalResponses(std::move(a_plus), std::move(b_plus));
}

LocalResponses LocalResponses::uniform(std::size_t n, double a_value, double b_value) {
  return create({std::vector<double>(n, a_value), std::vector<double>(n, a_value)},
                {std::vector<double>(n, b_value), std::vector<double>(n, b_value)});
}

LocalModel::LocalModel(ContextDistribution dist, LocalResponses responses)
    : dist_(std::move(dist)), responses_(std::move(responses)) {
  if (dist_.size() != responses_.size()) {
    fail(ErrorKind::Dimension, fmt::format("distribution has {} hidden variables but responses have {}",
                                           dist_.size(), responses_.size()));
  }
}

Behavior Behavior::create(const Table& joint, double tolerance) {
  for (ContextIndex i = 0; i < kContexts; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < kOutcomePairs; ++k) {
      check_probability(joint[i][k], fmt::format("behavior context {} pair {}", i, k));
      sum += joint[i][k];
    }
    if (std::abs(sum - 1.0) > tolerance) {
      fail(ErrorKind::Validation, fmt::format("behavior context {} sums to {:.17g}, not 1", i, sum));
    }
  }
  return Behavior(joint);
}

Behavior joint_distribution(const LocalModel& model) {
  const auto& dist = model.dist();
  const auto& resp = model.responses();
  Behavior::Table joint{};
  for (ContextIndex i = 0; i < kContexts; ++i) {
    const auto ctx = MeasurementContext::from_index(i);
    for (std::size_t k = 0; k < dist.size(); ++k) {
      const double w = dist(i, k);
      if (w == 0.0) continue;
      const double a = resp.a_plus(ctx.x, k);
      const double b = resp.b_plus(ctx.y, k);
      joint[i][0] += w * a * b;
      joint[i][1] += w * a * (1.0 - b);
      joint[i][2] += w * (1.0 - a) * b;
      joint[i][3] += w * (1.0 - a) * (1.0 - b);
    }
    // Accumulated rounding can push an entry a few ulps past 1.
    for (double& v : joint[i]) v = std::clamp(v, 0.0, 1.0);
  }
  return Behavior::create(joint);
}

double correlator(const Behavior& behavior, MeasurementContext context) {
  const ContextIndex i = context.index();
  double sum = 0.0;
  for (std::size_t k = 0; k < kOutcomePairs; ++k) {
    sum += outcome_a(k) * outcome_b(k) * behavior(i, k);
  }
  return sum;
}

double chsh_value(const Behavior& behavior) {
  return correlator(behavior, {0, 0}) + correlator(behavior, {0, 1}) +
         correlator(behavior, {1, 0}) - correlator(behavior, {1, 1});
}

}  // namespace bellmd

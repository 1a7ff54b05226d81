#pragma once

// Finite local hidden-variable models for the two-party, two-setting,
// two-outcome (CHSH) scenario.
//
// Context order is fixed everywhere: index 0..3 <-> (x,y) = (0,0),(0,1),(1,0),(1,1).
// Outcome-pair order within a context is (+,+),(+,-),(-,+),(-,-).

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bellmd {

inline constexpr std::size_t kContexts = 4;
inline constexpr std::size_t kOutcomePairs = 4;

/// Tolerance on row sums of user-supplied probability tables.
inline constexpr double kInputTolerance = 1e-9;
/// Tolerance on quantities the library computes itself.
inline constexpr double kComputeTolerance = 1e-12;
inline constexpr std::size_t kDefaultMaxHidden = 1'000'000;

using ContextIndex = std::size_t;

struct MeasurementContext {
  int x = 0;
  int y = 0;

  static MeasurementContext from_index(ContextIndex index);
  ContextIndex index() const;

  friend bool operator==(const MeasurementContext&, const MeasurementContext&) = default;
};

/// Sign of outcome pair k in the fixed (+,+),(+,-),(-,+),(-,-) order.
constexpr int outcome_a(std::size_t pair) { return pair < 2 ? +1 : -1; }
constexpr int outcome_b(std::size_t pair) { return pair % 2 == 0 ? +1 : -1; }

struct ValidationOptions {
  double tolerance = kInputTolerance;
  std::size_t max_hidden = kDefaultMaxHidden;
};

/// The four conditional distributions p(lambda | context) over a finite
/// hidden-variable set of declared size n.  Zero columns are kept as given.
class ContextDistribution {
 public:
  using Rows = std::array<std::vector<double>, kContexts>;

  static ContextDistribution from_rows(Rows rows, std::vector<std::string> labels = {},
                                       const ValidationOptions& options = {});
  /// `probs` is 4*n values, context-major.
  static ContextDistribution from_flat(std::span<const double> probs, std::size_t n,
                                       const ValidationOptions& options = {});

  std::size_t size() const { return n_; }
  double operator()(ContextIndex context, std::size_t lambda) const {
    return probs_[context * n_ + lambda];
  }
  std::span<const double> row(ContextIndex context) const {
    return {probs_.data() + context * n_, n_};
  }
  /// (p(lambda|0), ..., p(lambda|3)) for one hidden variable.
  std::array<double, kContexts> column(std::size_t lambda) const;
  std::span<const double> flat() const { return probs_; }

  const std::vector<std::string>& labels() const { return labels_; }
  /// Declared label, or "lambda_<k+1>" when none was given.
  std::string label(std::size_t lambda) const;

  /// Copy with zero columns appended up to `n` (labels continue the numbering).
  ContextDistribution padded(std::size_t n) const;

 private:
  ContextDistribution(std::size_t n, std::vector<double> probs, std::vector<std::string> labels)
      : n_(n), probs_(std::move(probs)), labels_(std::move(labels)) {}

  std::size_t n_ = 0;
  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

/// p(a=+1|x,lambda) and p(b=+1|y,lambda).  The -1 outcome has the complement.
class LocalResponses {
 public:
  using Table = std::array<std::vector<double>, 2>;

  static LocalResponses create(Table a_plus, Table b_plus);
  static LocalResponses uniform(std::size_t n, double a_value, double b_value);

  std::size_t size() const { return a_plus_[0].size(); }
  double a_plus(int x, std::size_t lambda) const { return a_plus_[x][lambda]; }
  double b_plus(int y, std::size_t lambda) const { return b_plus_[y][lambda]; }
  /// Local expectation values in [-1, 1].
  double a_expectation(int x, std::size_t lambda) const { return 2.0 * a_plus(x, lambda) - 1.0; }
  double b_expectation(int y, std::size_t lambda) const { return 2.0 * b_plus(y, lambda) - 1.0; }

  const Table& a_table() const { return a_plus_; }
  const Table& b_table() const { return b_plus_; }

 private:
  LocalResponses(Table a_plus, Table b_plus) : a_plus_(std::move(a_plus)), b_plus_(std::move(b_plus)) {}

  Table a_plus_;
  Table b_plus_;
};

class LocalModel {
 public:
  LocalModel(ContextDistribution dist, LocalResponses responses);

  const ContextDistribution& dist() const { return dist_; }
  const LocalResponses& responses() const { return responses_; }
  std::size_t size() const { return dist_.size(); }

 private:
  ContextDistribution dist_;
  LocalResponses responses_;
};

/// The 16 observable probabilities p(a,b|x,y).
class Behavior {
 public:
  using Table = std::array<std::array<double, kOutcomePairs>, kContexts>;

  static Behavior create(const Table& joint, double tolerance = kInputTolerance);

  double operator()(ContextIndex context, std::size_t pair) const { return joint_[context][pair]; }
  const Table& table() const { return joint_; }

 private:
  explicit Behavior(const Table& joint) : joint_(joint) {}

  Table joint_{};
};

Behavior joint_distribution(const LocalModel& model);

/// Sum over a,b of a*b*p(a,b|x,y).
double correlator(const Behavior& behavior, MeasurementContext context);

/// <00> + <01> + <10> - <11>.
double chsh_value(const Behavior& behavior);

}  // namespace bellmd

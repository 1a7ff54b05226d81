#include "bellmd/tight_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "bellmd/bounds.hpp"
#include "bellmd/error.hpp"
#include "bellmd/measures.hpp"

namespace bellmd {

const char* to_string(FamilyId id) noexcept {
  switch (id) {
    case FamilyId::H1: return "H1";
    case FamilyId::H2: return "H2";
    case FamilyId::H3Plus: return "H3plus";
  }
  return "?";
}

FamilyId parse_family(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "h1") return FamilyId::H1;
  if (lower == "h2") return FamilyId::H2;
  if (lower == "h3plus" || lower == "h3+" || lower == "h3") return FamilyId::H3Plus;
  fail(ErrorKind::Domain, fmt::format("unknown family '{}' (expected H1, H2 or H3plus)", text));
}

std::size_t family_min_size(FamilyId id) {
  switch (id) {
    case FamilyId::H1: return 2;
    case FamilyId::H2: return 3;
    case FamilyId::H3Plus: return 4;
  }
  return 0;
}

const char* to_string(Boundary b) noexcept {
  switch (b) {
    case Boundary::Lower: return "lower";
    case Boundary::Upper: return "upper";
    case Boundary::Interior: return "interior";
  }
  return "?";
}

namespace {

// Rounding in 1 - 2p, 1 - 3p near the branch points can leave -1e-17.
double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

// Tables list one row per hidden variable with columns P00, P01, P10, P11.
ContextDistribution::Rows from_lambda_rows(const std::vector<std::array<double, kContexts>>& table) {
  ContextDistribution::Rows rows;
  for (const auto& lambda_row : table) {
    for (ContextIndex i = 0; i < kContexts; ++i) rows[i].push_back(snap(lambda_row[i]));
  }
  return rows;
}

}  // namespace

ContextDistribution tight_model(const TightFamily& family) {
  const double p = family.p;
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    fail(ErrorKind::Domain, fmt::format("family parameter p = {} outside [0, 1]", p));
  }
  const std::size_t min_size = family_min_size(family.id);
  const std::size_t n = family.pad_to.value_or(min_size);
  if (n < min_size) {
    fail(ErrorKind::Domain, fmt::format("{} needs at least {} hidden variables, pad_to = {}",
                                        to_string(family.id), min_size, n));
  }

  std::vector<std::array<double, kContexts>> table;
  switch (family.id) {
    case FamilyId::H1:
      table = {{0, p, p, p},
               {1, 1 - p, 1 - p, 1 - p}};
      break;
    case FamilyId::H2:
      if (p <= 0.5) {
        table = {{0, p, p, p},
                 {p, 0, p, p},
                 {1 - p, 1 - p, 1 - 2 * p, 1 - 2 * p}};
      } else {
        table = {{0, 1 - p, 1 - p, 2 * p - 1},
                 {p, 0, p, 1 - p},
                 {1 - p, p, 0, 1 - p}};
      }
      break;
    case FamilyId::H3Plus:
      if (p <= 1.0 / 3.0) {
        table = {{0, p, p, p},
                 {p, 0, p, p},
                 {p, p, 0, p},
                 {1 - 2 * p, 1 - 2 * p, 1 - 2 * p, 1 - 3 * p}};
      } else {
        const double q = (1 - p) / 2;
        table = {{0, q, q, p},
                 {p, 0, q, q},
                 {q, p, 0, q},
                 {q, q, p, 0}};
      }
      break;
  }
  auto dist = ContextDistribution::from_rows(from_lambda_rows(table));
  return n > dist.size() ? dist.padded(n) : dist;
}

RegionPoint evaluate_point(const ContextDistribution& dist, std::string family, double p,
                           std::optional<double> t) {
  RegionPoint pt;
  pt.family = std::move(family);
  pt.p = p;
  pt.t = t;
  pt.hiddenness = hiddenness(dist, HiddennessMode::Declared);
  pt.dependence = measurement_dependence(dist);
  pt.optimal_chsh = optimal_chsh(dist);
  pt.lower = lower_bound_copt(pt.dependence);
  pt.upper = upper_bound(pt.hiddenness, pt.dependence);
  if (std::abs(pt.optimal_chsh - pt.upper) <= kBoundTolerance) {
    pt.boundary = Boundary::Upper;
  } else if (std::abs(pt.optimal_chsh - pt.lower) <= kBoundTolerance) {
    pt.boundary = Boundary::Lower;
  } else {
    pt.boundary = Boundary::Interior;
  }
  return pt;
}

namespace {

double grid(std::size_t k, std::size_t steps) {
  return static_cast<double>(k) / static_cast<double>(steps - 1);
}

void check_steps(std::size_t steps, const char* name) {
  if (steps < 2) fail(ErrorKind::Domain, fmt::format("{} must be at least 2, got {}", name, steps));
}

}  // namespace

std::vector<RegionPoint> tight_family_curve(FamilyId id, std::size_t steps,
                                            std::optional<std::size_t> pad_to) {
  check_steps(steps, "steps");
  std::vector<RegionPoint> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double p = grid(k, steps);
    out.push_back(evaluate_point(tight_model({id, p, pad_to}), to_string(id), p, std::nullopt));
  }
  return out;
}

ContextDistribution interpolate(const ContextDistribution& a, const ContextDistribution& b, double t) {
  if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
    fail(ErrorKind::Domain, fmt::format("interpolation weight t = {} outside [0, 1]", t));
  }
  if (a.size() != b.size()) {
    fail(ErrorKind::Dimension,
         fmt::format("cannot interpolate distributions over {} and {} hidden variables", a.size(), b.size()));
  }
  ContextDistribution::Rows rows;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    rows[i].resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      rows[i][k] = std::clamp((1.0 - t) * a(i, k) + t * b(i, k), 0.0, 1.0);
    }
  }
  return ContextDistribution::from_rows(std::move(rows), a.labels(),
                                        {kInputTolerance, std::max(a.size(), kDefaultMaxHidden)});
}

std::vector<RegionPoint> region_sweep(std::size_t hiddenness, std::size_t steps_m, std::size_t steps_t) {
  if (hiddenness == 0) {
    const auto trivial = ContextDistribution::from_rows({{{1.0}, {1.0}, {1.0}, {1.0}}});
    return {evaluate_point(trivial, "H0", 0.0, 0.0)};
  }
  check_steps(steps_m, "M steps");
  check_steps(steps_t, "t steps");

  const std::size_t n = hiddenness + 1;
  const FamilyId upper_id = hiddenness == 1 ? FamilyId::H1
                            : hiddenness == 2 ? FamilyId::H2
                                              : FamilyId::H3Plus;
  std::vector<RegionPoint> out;
  out.reserve(steps_m * steps_t);
  for (std::size_t km = 0; km < steps_m; ++km) {
    const double p = grid(km, steps_m);  // M = 2p on both endpoint families
    const auto lower = tight_model({FamilyId::H1, p, n});
    const auto upper = tight_model({upper_id, p, n});
    for (std::size_t kt = 0; kt < steps_t; ++kt) {
      const double t = grid(kt, steps_t);
      out.push_back(evaluate_point(interpolate(lower, upper, t), to_string(upper_id), p, t));
    }
  }
  return out;
}

std::string to_csv(const std::vector<RegionPoint>& points) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& pt : points) {
    out += fmt::format("{},{:.12g},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{}\n", pt.family, pt.p,
                       pt.t ? fmt::format("{:.12g}", *pt.t) : std::string(), pt.hiddenness,
                       pt.dependence, pt.optimal_chsh, pt.lower, pt.upper, to_string(pt.boundary));
  }
  return out;
}

}  // namespace bellmd

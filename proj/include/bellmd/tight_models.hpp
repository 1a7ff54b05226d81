#pragma once

// Parametric context distributions that saturate the lower and upper bounds
// on the optimal CHSH value, their convex combinations, and grid sweeps over
// the feasible (M, C_opt) region.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bellmd/model.hpp"

namespace bellmd {

enum class FamilyId {
  H1,      // two hidden variables; saturates both bounds (C_opt = M + 2)
  H2,      // three hidden variables; left branch p <= 1/2, right branch above
  H3Plus,  // four hidden variables plus zero padding; left branch p <= 1/3
};

const char* to_string(FamilyId id) noexcept;
/// Accepts "H1", "H2", "H3plus" (case-insensitive).
FamilyId parse_family(const std::string& text);

/// Smallest declared hidden-variable count of the family.
std::size_t family_min_size(FamilyId id);

struct TightFamily {
  FamilyId id = FamilyId::H1;
  double p = 0.0;
  std::optional<std::size_t> pad_to;
};

ContextDistribution tight_model(const TightFamily& family);

enum class Boundary { Lower, Upper, Interior };
const char* to_string(Boundary b) noexcept;

struct RegionPoint {
  std::string family;
  double p = 0.0;
  std::optional<double> t;  // interpolation weight of the upper endpoint; unset on family curves
  std::size_t hiddenness = 0;
  double dependence = 0.0;
  double optimal_chsh = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Boundary boundary = Boundary::Interior;
};

/// Builds a RegionPoint from a distribution using the measures and bounds
/// modules, classifying against the bounds at the declared hiddenness.
RegionPoint evaluate_point(const ContextDistribution& dist, std::string family, double p,
                           std::optional<double> t);

/// `steps` evenly spaced p in [0, 1], both ends included.
std::vector<RegionPoint> tight_family_curve(FamilyId id, std::size_t steps,
                                            std::optional<std::size_t> pad_to = std::nullopt);

/// Entrywise (1 - t) a + t b.  Both inputs must have the same size.
ContextDistribution interpolate(const ContextDistribution& a, const ContextDistribution& b, double t);

/// For each of `steps_m` values of M in [0, 2], interpolates between the padded
/// H1 family (lower bound) and the upper-bound family for H at p = M / 2 using
/// `steps_t` weights in [0, 1].  H = 0 yields the single point (0, 2).
std::vector<RegionPoint> region_sweep(std::size_t hiddenness, std::size_t steps_m, std::size_t steps_t);

inline constexpr const char* kSweepCsvHeader = "family,p,t,H,M,C_opt,lower,upper,on_boundary";

/// CSV with kSweepCsvHeader, 12 significant digits, unset t as an empty field.
std::string to_csv(const std::vector<RegionPoint>& points);

}  // namespace bellmd

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bellmd/bounds.hpp"
#include "bellmd/error.hpp"
#include "bellmd/measures.hpp"
#include "bellmd/tight_models.hpp"
#include "test_util.hpp"

using namespace bellmd;

namespace {

double column_sum(const ContextDistribution& d, ContextIndex i) {
  double s = 0.0;
  for (double v : d.row(i)) s += v;
  return s;
}

}  // namespace

TEST_SUITE("tight_models") {

TEST_CASE("family tables") {
  SUBCASE("H1 at p = 0.3") {
    const auto d = tight_model({FamilyId::H1, 0.3, std::nullopt});
    REQUIRE(d.size() == 2);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(3, 0) == 0.3);
    CHECK(d(0, 1) == 1.0);
    CHECK(d(2, 1) == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("H2 left at p = 0.25") {
    const auto d = tight_model({FamilyId::H2, 0.25, std::nullopt});
    REQUIRE(d.size() == 3);
    CHECK(d(1, 1) == 0.0);
    CHECK(d(3, 2) == 0.5);
  }
  SUBCASE("H2 right at p = 0.75") {
    const auto d = tight_model({FamilyId::H2, 0.75, std::nullopt});
    CHECK(d(0, 0) == 0.0);
    CHECK(d(3, 0) == 0.5);
    CHECK(d(2, 2) == 0.0);
    CHECK(d(3, 1) == 0.25);
  }
  SUBCASE("H3plus right at p = 0.5") {
    const auto d = tight_model({FamilyId::H3Plus, 0.5, std::nullopt});
    REQUIRE(d.size() == 4);
    for (ContextIndex i = 0; i < kContexts; ++i) CHECK(d(i, i) == 0.0);
    CHECK(d(1, 0) == 0.25);
    CHECK(d(3, 0) == 0.5);
  }
  SUBCASE("padding") {
    const auto d = tight_model({FamilyId::H3Plus, 0.1, 7});
    CHECK(d.size() == 7);
    CHECK(d(0, 6) == 0.0);
    CHECK_THROWS_AS(tight_model({FamilyId::H2, 0.1, 2}), Error);
  }
  SUBCASE("p outside [0,1]") {
    CHECK_THROWS_AS(tight_model({FamilyId::H1, 1.5, std::nullopt}), Error);
    CHECK_THROWS_AS(tight_model({FamilyId::H1, -0.01, std::nullopt}), Error);
  }
  SUBCASE("every table is normalized") {
    for (auto id : {FamilyId::H1, FamilyId::H2, FamilyId::H3Plus}) {
      for (int k = 0; k <= 100; ++k) {
        const auto d = tight_model({id, k / 100.0, std::nullopt});
        for (ContextIndex i = 0; i < kContexts; ++i) CHECK(std::abs(column_sum(d, i) - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("family names") {
  CHECK(parse_family("h1") == FamilyId::H1);
  CHECK(parse_family("H2") == FamilyId::H2);
  CHECK(parse_family("h3plus") == FamilyId::H3Plus);
  CHECK(parse_family("h3+") == FamilyId::H3Plus);
  CHECK_THROWS_AS(parse_family("h4"), Error);
  CHECK(std::string(to_string(FamilyId::H3Plus)) == "H3plus");
  CHECK(family_min_size(FamilyId::H2) == 3);
}

TEST_CASE("closed forms along the family curves") {
  for (int k = 0; k <= 60; ++k) {
    const double p = k / 60.0;
    const auto h1 = tight_model({FamilyId::H1, p, std::nullopt});
    CHECK(std::abs(optimal_chsh(h1) - (2 * p + 2)) <= 1e-12);
    CHECK(std::abs(measurement_dependence(h1) - 2 * p) <= 1e-12);

    const auto h2 = tight_model({FamilyId::H2, p, std::nullopt});
    CHECK(std::abs(optimal_chsh(h2) - (p <= 0.5 ? 4 * p + 2 : 4.0)) <= 1e-12);
    CHECK(std::abs(measurement_dependence(h2) - 2 * p) <= 1e-12);

    const auto h3 = tight_model({FamilyId::H3Plus, p, std::nullopt});
    CHECK(std::abs(optimal_chsh(h3) - (p <= 1.0 / 3.0 ? 6 * p + 2 : 4.0)) <= 1e-12);
    CHECK(std::abs(measurement_dependence(h3) - 2 * p) <= 1e-12);
  }
}

TEST_CASE("H3plus right branch dependence spans [2/3, 2]") {
  for (int k = 0; k <= 30; ++k) {
    const double p = 1.0 / 3.0 + k * (2.0 / 3.0) / 30.0;
    const auto d = tight_model({FamilyId::H3Plus, p, std::nullopt});
    CHECK(std::abs(measurement_dependence(d) - oracle::dependence_by_subsets(testutil::rows_of(d))) <= 1e-12);
  }
  CHECK(measurement_dependence(tight_model({FamilyId::H3Plus, 1.0 / 3.0, std::nullopt})) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("family curves sit on the upper boundary") {
  for (auto id : {FamilyId::H1, FamilyId::H2, FamilyId::H3Plus}) {
    const auto pts = tight_family_curve(id, 21);
    REQUIRE(pts.size() == 21);
    CHECK(pts.front().p == 0.0);
    CHECK(pts.back().p == 1.0);
    for (const auto& pt : pts) {
      CHECK(pt.boundary == Boundary::Upper);
      CHECK_FALSE(pt.t.has_value());
    }
  }
}

TEST_CASE("interpolation") {
  const auto a = tight_model({FamilyId::H1, 0.4, 3});
  const auto b = tight_model({FamilyId::H2, 0.4, std::nullopt});
  const auto at0 = interpolate(a, b, 0.0), at1 = interpolate(a, b, 1.0);
  CHECK(std::equal(at0.flat().begin(), at0.flat().end(), a.flat().begin()));
  CHECK(std::equal(at1.flat().begin(), at1.flat().end(), b.flat().begin()));
  CHECK_THROWS_AS(interpolate(a, b, 1.5), Error);
  CHECK_THROWS_AS(interpolate(tight_model({FamilyId::H1, 0.4, std::nullopt}), b, 0.5), Error);
  const auto mid = interpolate(a, b, 0.5);
  CHECK(mid(0, 1) == doctest::Approx(0.5 * (a(0, 1) + b(0, 1))).epsilon(1e-15));
}

TEST_CASE("region sweep covers the sandwiched band") {
  SUBCASE("H = 2 at M = 1 spans [3, 4]") {
    const auto pts = region_sweep(2, 21, 11);
    double lo = 10, hi = 0;
    for (const auto& pt : pts) {
      CHECK(pt.optimal_chsh >= pt.lower - kBoundTolerance);
      CHECK(pt.optimal_chsh <= pt.upper + kBoundTolerance);
      if (std::abs(pt.dependence - 1.0) <= 1e-12) {
        lo = std::min(lo, pt.optimal_chsh);
        hi = std::max(hi, pt.optimal_chsh);
      }
    }
    CHECK(lo == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("H = 3 reaches 4 at M = 2/3") {
    const auto pts = region_sweep(3, 31, 11);
    bool found = false;
    for (const auto& pt : pts) {
      CHECK(pt.optimal_chsh >= pt.lower - kBoundTolerance);
      CHECK(pt.optimal_chsh <= pt.upper + kBoundTolerance);
      if (std::abs(pt.dependence - 2.0 / 3.0) <= 1e-12 && std::abs(pt.optimal_chsh - 4.0) <= 1e-12) found = true;
    }
    CHECK(found);
  }
  SUBCASE("H = 0 collapses to a point") {
    const auto pts = region_sweep(0, 5, 5);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].optimal_chsh == 2.0);
  }
}

TEST_CASE("csv output") {
  const auto csv = to_csv(tight_family_curve(FamilyId::H1, 3));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == kSweepCsvHeader);
  std::getline(in, line);
  CHECK(line == "H1,0,,1,0,2,2,2,upper");
  std::getline(in, line);
  CHECK(line == "H1,0.5,,1,1,3,3,3,upper");
}

}  // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bellmd/error.hpp"
#include "bellmd/measures.hpp"
#include "bellmd/random_models.hpp"
#include "bellmd/tight_models.hpp"
#include "test_util.hpp"

using namespace bellmd;

namespace {

ContextDistribution permuted(const ContextDistribution& d, const std::vector<std::size_t>& perm) {
  ContextDistribution::Rows rows;
  for (ContextIndex i = 0; i < kContexts; ++i) {
    for (std::size_t k : perm) rows[i].push_back(d(i, k));
  }
  return ContextDistribution::from_rows(rows);
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("total variation examples") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1.0);
  CHECK_THROWS_AS(total_variation(std::vector<double>{1, 0}, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(total_variation(std::vector<double>{0.5, 0.4}, std::vector<double>{0.5, 0.5}), Error);
}

TEST_CASE("total variation equals the exhaustive event supremum") {
  RandomModels rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = rng.simplex(5), q = rng.simplex(5);
    CHECK(std::abs(total_variation(p, q) - oracle::tv_by_subsets(p, q)) <= 1e-12);
  }
}

TEST_CASE("total variation is a metric") {
  RandomModels rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.size_between(1, 7);
    const auto p = rng.simplex(n), q = rng.simplex(n), r = rng.simplex(n);
    CHECK(total_variation(p, q) == total_variation(q, p));
    CHECK(total_variation(p, p) == 0.0);
    CHECK(total_variation(p, r) <= total_variation(p, q) + total_variation(q, r) + 1e-15);
    CHECK(total_variation(p, q) >= 0.0);
    CHECK(total_variation(p, q) <= 1.0 + 1e-15);
  }
}

TEST_CASE("measurement dependence examples") {
  CHECK(measurement_dependence(testutil::uniform_dist(3)) == 0.0);
  CHECK(measurement_dependence(tight_model({FamilyId::H1, 1.0, std::nullopt})) == 2.0);
  CHECK(measurement_dependence(tight_model({FamilyId::H2, 0.5, std::nullopt})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("measurement dependence is twice the largest pairwise total variation") {
  RandomModels rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = rng.dist(rng.size_between(1, 6));
    double tv = 0.0;
    for (ContextIndex i = 0; i < kContexts; ++i) {
      for (ContextIndex j = 0; j < kContexts; ++j) tv = std::max(tv, total_variation(d.row(i), d.row(j)));
    }
    CHECK(measurement_dependence(d) == 2.0 * tv);
    CHECK(std::abs(measurement_dependence(d) - oracle::dependence_by_subsets(testutil::rows_of(d))) <= 1e-12);
    CHECK(measurement_dependence(d) <= 2.0);
  }
}

TEST_CASE("measurement dependence and hiddenness under permutation and zero padding") {
  RandomModels rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.size_between(1, 6);
    const auto d = rng.dist(n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    if (n > 2) std::swap(perm[0], perm[n / 2]);
    const auto pd = permuted(d, perm);
    CHECK(std::abs(measurement_dependence(pd) - measurement_dependence(d)) <= 1e-15);
    CHECK(hiddenness(pd) == hiddenness(d));

    const auto padded = d.padded(n + 2);
    CHECK(measurement_dependence(padded) == measurement_dependence(d));
    CHECK(hiddenness(padded, HiddennessMode::Effective) == hiddenness(d, HiddennessMode::Effective));
    CHECK(hiddenness(padded) == hiddenness(d) + 2);
  }
}

TEST_CASE("hiddenness examples") {
  CHECK(hiddenness(testutil::uniform_dist(1)) == 0);
  CHECK(hiddenness(testutil::uniform_dist(2)) == 1);
  const auto t3 = tight_model({FamilyId::H3Plus, 0.2, 6});
  CHECK(hiddenness(t3, HiddennessMode::Declared) == 5);
  CHECK(hiddenness(t3, HiddennessMode::Effective) == 3);
}

TEST_CASE("effective hiddenness never exceeds declared") {
  RandomModels rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = rng.dist(rng.size_between(1, 5)).padded(7);
    CHECK(hiddenness(d, HiddennessMode::Effective) <= hiddenness(d, HiddennessMode::Declared));
  }
}

TEST_CASE("trim zero rows") {
  SUBCASE("identity without zero columns") {
    const auto d = testutil::uniform_dist(3);
    const auto t = trim_zero_rows(d);
    CHECK(t.size() == 3);
    CHECK(std::equal(t.flat().begin(), t.flat().end(), d.flat().begin()));
  }
  SUBCASE("padded H3plus table shrinks to four hidden variables") {
    const auto t = trim_zero_rows(tight_model({FamilyId::H3Plus, 0.2, 6}));
    CHECK(t.size() == 4);
    for (ContextIndex i = 0; i < kContexts; ++i) {
      const double sum = std::accumulate(t.row(i).begin(), t.row(i).end(), 0.0);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
  SUBCASE("inverse of appending zero columns") {
    RandomModels rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const auto d = rng.dist(rng.size_between(1, 5));
      const auto t = trim_zero_rows(d.padded(d.size() + 2));
      REQUIRE(t.size() == d.size());
      CHECK(std::equal(t.flat().begin(), t.flat().end(), d.flat().begin()));
    }
  }
  SUBCASE("labels follow kept columns") {
    const auto d = ContextDistribution::from_rows({{{0.5, 0.0, 0.5}, {1, 0, 0}, {0, 0, 1}, {0.5, 0, 0.5}}},
                                                  {"a", "zero", "c"});
    const auto t = trim_zero_rows(d);
    CHECK(t.labels() == std::vector<std::string>{"a", "c"});
  }
}

}  // TEST_SUITE

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bellmd/bounds.hpp"
#include "bellmd/error.hpp"
#include "bellmd/measures.hpp"
#include "bellmd/montecarlo.hpp"
#include "bellmd/random_models.hpp"
#include "bellmd/tight_models.hpp"

using namespace bellmd;

namespace {

constexpr double kExact = 1e-12;  // closed-form and oracle agreement
constexpr double kBound = 1e-9;   // inequality slack

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_double(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::vector<double> p_grid(double lo, double hi, int intervals) {
  std::vector<double> out;
  for (int k = 0; k <= intervals; ++k) out.push_back(lo + (hi - lo) * k / intervals);
  return out;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  RandomModels rng(1001);
  double worst = 0.0;
  int bad = 0;
  const int count = 10000;
  for (int k = 0; k < count; ++k) {
    const auto d = rng.dist(rng.size_between(1, 6));
    const double diff = std::abs(optimal_chsh(d) - brute_force_optimal_chsh(d));
    worst = std::max(worst, diff);
    if (diff > kExact) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 10.0,
          std::to_string(count) + " dists, " + std::to_string(bad) + " mismatches, max diff " +
              fmt_double("%.2e", worst) + ", " + fmt_double("%.2f", secs) + " s (limit 10 s)"};
}

struct SweepResult {
  int models = 0;
  int upper_violations = 0;
  int lower_violations = 0;
  double seconds = 0.0;
};

SweepResult tradeoff_sweep() {
  const auto start = Clock::now();
  RandomModels rng(2002);
  SweepResult r;
  r.models = 100000;
  for (int k = 0; k < r.models; ++k) {
    const auto m = rng.model(rng.size_between(1, 6));
    const double dep = measurement_dependence(m.dist());
    const double c = chsh_value(joint_distribution(m));
    const std::size_t h = hiddenness(m.dist());
    if (c > upper_bound(h, dep) + kBound || c > 4.0 + kBound) ++r.upper_violations;
    if (lower_bound_copt(dep) > optimal_chsh(m.dist()) + kBound) ++r.lower_violations;
  }
  r.seconds = seconds_since(start);
  return r;
}

Outcome tightness(FamilyId id, double split, double slope) {
  int bad = 0, points = 0;
  double worst = 0.0;
  auto check = [&](double p, double c_expected) {
    const auto d = tight_model({id, p, std::nullopt});
    const double ec = std::abs(optimal_chsh(d) - c_expected);
    const double em = std::abs(measurement_dependence(d) - 2 * p);
    worst = std::max({worst, ec, em});
    if (ec > kExact || em > kExact) ++bad;
    ++points;
  };
  if (split >= 1.0) {
    for (int k = 0; k <= 20; ++k) {
      const double p = 0.05 * k;
      check(p, 2 * p + 2);
      // C_opt = M + 2 on this family.
      const auto d = tight_model({id, p, std::nullopt});
      if (std::abs(optimal_chsh(d) - measurement_dependence(d) - 2.0) > kExact) ++bad;
    }
  } else {
    for (double p : p_grid(0.0, split, 40)) check(p, slope * p + 2);
    for (double p : p_grid(split, 1.0, 40)) check(p, 4.0);
  }
  return {bad == 0, std::to_string(points) + " points, max error " + fmt_double("%.2e", worst)};
}

Outcome tsirelson() {
  const double c = 2 * std::sqrt(2.0);
  const double m3 = min_dependence_for_chsh(c, 3);
  const double m2 = min_dependence_for_chsh(c, 2);
  const double m1 = min_dependence_for_chsh(c, 1);
  const double m9 = min_dependence_for_chsh(c, 9);
  const bool ok = std::abs(m3 - 0.276) <= 1e-3 && std::abs(m2 - 0.414) <= 1e-3 && std::abs(m1 - 0.828) <= 1e-3 &&
                  m9 == m3;
  return {ok, "H>=3: " + fmt_double("%.6f", m3) + ", H=2: " + fmt_double("%.6f", m2) +
                  ", H=1: " + fmt_double("%.6f", m1) + " (tolerance 1e-3)"};
}

Outcome lemma_witnesses() {
  RandomModels rng(3003);
  int bad = 0;
  double least = 1e300;
  const int count = 10000;
  for (int k = 0; k < count; ++k) {
    for (auto* f : {&lemma_witness_n3, &lemma_witness_n4}) {
      const std::size_t n = f == &lemma_witness_n3 ? 3 : 4;
      try {
        const double lhs = f(rng.dist(n)).lhs;
        least = std::min(least, lhs);
        if (lhs < 1.0 - kBound) ++bad;
      } catch (const Error&) {
        ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(count) + " dists each at n=3 and n=4, " + std::to_string(bad) +
                        " failures, smallest lhs " + fmt_double("%.12f", least)};
}

Outcome coarse_graining() {
  RandomModels rng(4004);
  int bad_sum = 0, bad_chain = 0;
  double worst_sum = 0.0, least_chain = 1e300;
  const int count = 1000;
  for (int k = 0; k < count; ++k) {
    const auto c = check_coarse_grain(rng.dist(rng.size_between(5, 10)));
    worst_sum = std::max(worst_sum, std::abs(c.sum_min_coarse - c.sum_min_original));
    least_chain = std::min(least_chain, c.chained_lhs);
    if (!c.sums_agree) ++bad_sum;
    if (!c.chained_holds) ++bad_chain;
  }
  return {bad_sum == 0 && bad_chain == 0,
          std::to_string(count) + " dists, sum mismatches " + std::to_string(bad_sum) + " (max " +
              fmt_double("%.2e", worst_sum) + "), chained failures " + std::to_string(bad_chain) +
              " (smallest lhs " + fmt_double("%.6f", least_chain) + ")"};
}

Outcome region_fill() {
  int segments = 0, bad_affine = 0, bad_bounds = 0;
  double worst = 0.0;
  for (std::size_t h : {2, 3}) {
    const std::size_t steps_t = 11;
    const auto pts = region_sweep(h, 41, steps_t);
    for (std::size_t s = 0; s + steps_t <= pts.size(); s += steps_t) {
      ++segments;
      const auto& a = pts[s];
      const auto& b = pts[s + steps_t - 1];
      const auto& mid = pts[s + steps_t / 2];
      if (std::abs(a.dependence - b.dependence) > kExact) ++bad_affine;  // matched M
      const double em = std::abs(mid.dependence - 0.5 * (a.dependence + b.dependence));
      const double ec = std::abs(mid.optimal_chsh - 0.5 * (a.optimal_chsh + b.optimal_chsh));
      worst = std::max({worst, em, ec});
      if (em > kBound || ec > kBound) ++bad_affine;
      for (std::size_t k = s; k < s + steps_t; ++k) {
        const auto& pt = pts[k];
        const double t = *pt.t;
        const double dm = std::abs(pt.dependence - ((1 - t) * a.dependence + t * b.dependence));
        const double dc = std::abs(pt.optimal_chsh - ((1 - t) * a.optimal_chsh + t * b.optimal_chsh));
        worst = std::max({worst, dm, dc});
        if (dm > kBound || dc > kBound) ++bad_affine;
        if (pt.optimal_chsh < lower_bound_copt(pt.dependence) - kBound ||
            pt.optimal_chsh > upper_bound(h, pt.dependence) + kBound) {
          ++bad_bounds;
        }
      }
    }
  }
  return {segments >= 40 && bad_affine == 0 && bad_bounds == 0,
          std::to_string(segments) + " segments over H=2,3, affinity failures " + std::to_string(bad_affine) +
              " (max deviation " + fmt_double("%.2e", worst) + "), out-of-band points " +
              std::to_string(bad_bounds)};
}

Outcome monte_carlo() {
  const auto start = Clock::now();
  const auto d = tight_model({FamilyId::H1, 0.5, std::nullopt});
  const LocalModel m(d, optimal_responses(d));
  const double exact = chsh_value(joint_distribution(m));
  bool ok = std::abs(exact - 3.0) <= kExact;
  std::string detail;
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    const auto e = estimate(sample(m, 100000, seed));
    const double z = std::abs(e.chsh - 3.0) / e.stderr_chsh;
    ok = ok && z <= 5.0;
    detail += "seed " + std::to_string(seed) + ": C=" + fmt_double("%.5f", e.chsh) + " (" + fmt_double("%.2f", z) +
              " se); ";
  }
  const double secs = seconds_since(start);
  ok = ok && secs < 5.0;
  return {ok, detail + fmt_double("%.2f", secs) + " s (limit 5 s)"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](int id, const char* name, const std::function<Outcome()>& f) {
    try {
      report(id, name, f());
    } catch (const std::exception& e) {
      report(id, name, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "optimal CHSH matches brute force", oracle_equivalence);

  SweepResult sweep;
  try {
    sweep = tradeoff_sweep();
  } catch (const std::exception& e) {
    sweep.upper_violations = sweep.lower_violations = -1;
    std::printf("sweep aborted: %s\n", e.what());
  }
  const std::string sweep_info = std::to_string(sweep.models) + " models, " + fmt_double("%.2f", sweep.seconds) + " s";
  report(2, "relaxed Bell inequality holds",
         {sweep.upper_violations == 0 && sweep.seconds < 60.0,
          sweep_info + " (limit 60 s), violations " + std::to_string(sweep.upper_violations)});
  report(3, "lower bound M + 2 <= C_opt holds",
         {sweep.lower_violations == 0, sweep_info + ", violations " + std::to_string(sweep.lower_violations)});

  guarded(4, "H1 family tight", [] { return tightness(FamilyId::H1, 1.0, 2.0); });
  guarded(5, "H2 family tight", [] { return tightness(FamilyId::H2, 0.5, 4.0); });
  guarded(6, "H3plus family tight", [] { return tightness(FamilyId::H3Plus, 1.0 / 3.0, 6.0); });
  guarded(7, "minimal dependence at the Tsirelson value", tsirelson);
  guarded(8, "lemma witnesses exist", lemma_witnesses);
  guarded(9, "coarse graining preserves minima and the chained inequality", coarse_graining);
  guarded(10, "interpolation fills the sandwiched region affinely", region_fill);
  guarded(11, "Monte Carlo estimate consistent with exact CHSH", monte_carlo);

  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures == 0 ? 0 : 1;
}

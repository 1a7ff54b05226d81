#include "bellmd/random_models.hpp"

#include <cmath>

namespace bellmd {

std::vector<double> RandomModels::simplex(std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = -std::log1p(-uniform());
    sum += x;
  }
  if (sum == 0.0) {
    v.assign(n, 1.0 / static_cast<double>(n));
    return v;
  }
  for (auto& x : v) x /= sum;
  return v;
}

ContextDistribution RandomModels::dist(std::size_t n) {
  ContextDistribution::Rows rows;
  for (auto& row : rows) row = simplex(n);
  return ContextDistribution::from_rows(std::move(rows));
}

LocalResponses RandomModels::responses(std::size_t n) {
  LocalResponses::Table a{std::vector<double>(n), std::vector<double>(n)};
  LocalResponses::Table b{std::vector<double>(n), std::vector<double>(n)};
  for (auto* t : {&a, &b}) {
    for (auto& row : *t) {
      for (auto& x : row) x = uniform();
    }
  }
  return LocalResponses::create(std::move(a), std::move(b));
}

LocalModel RandomModels::model(std::size_t n) {
  auto d = dist(n);
  return LocalModel(std::move(d), responses(n));
}

std::size_t RandomModels::size_between(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1));
}

}  // namespace bellmd

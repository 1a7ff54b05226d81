#include "bellmd/bellmd.h"

#include <cstring>
#include <new>
#include <string>

#include <fmt/format.h>

#include "bellmd/bounds.hpp"
#include "bellmd/error.hpp"
#include "bellmd/measures.hpp"
#include "bellmd/model.hpp"
#include "bellmd/model_io.hpp"
#include "bellmd/montecarlo.hpp"
#include "bellmd/random_models.hpp"
#include "bellmd/tight_models.hpp"

struct bellmd_dist {
  bellmd::ContextDistribution value;
};

struct bellmd_model {
  bellmd::LocalModel value;
};

struct bellmd_record {
  bellmd::ExperimentRecord value;
};

namespace {

thread_local std::string last_error;

struct NullArgument {
  const char* name;
};

template <class T>
T* require(T* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return p;
}

bellmd_status status_of(bellmd::ErrorKind kind) {
  using bellmd::ErrorKind;
  switch (kind) {
    case ErrorKind::Validation: return BELLMD_ERR_VALIDATION;
    case ErrorKind::Dimension: return BELLMD_ERR_DIMENSION;
    case ErrorKind::Domain: return BELLMD_ERR_DOMAIN;
    case ErrorKind::Infeasible: return BELLMD_ERR_INFEASIBLE;
    case ErrorKind::Resource: return BELLMD_ERR_RESOURCE;
    case ErrorKind::Invariant: return BELLMD_ERR_INVARIANT;
    case ErrorKind::Parse: return BELLMD_ERR_PARSE;
    case ErrorKind::Io: return BELLMD_ERR_IO;
  }
  return BELLMD_ERR_INTERNAL;
}

template <class F>
bellmd_status guarded(F&& f) noexcept {
  try {
    f();
    return BELLMD_OK;
  } catch (const bellmd::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const NullArgument& e) {
    last_error = fmt::format("argument '{}' is null", e.name);
    return BELLMD_ERR_NULL_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BELLMD_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BELLMD_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return BELLMD_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bellmd::HiddennessMode mode_of(bellmd_hiddenness_mode mode) {
  switch (mode) {
    case BELLMD_HIDDENNESS_DECLARED: return bellmd::HiddennessMode::Declared;
    case BELLMD_HIDDENNESS_EFFECTIVE: return bellmd::HiddennessMode::Effective;
  }
  bellmd::fail(bellmd::ErrorKind::Domain, fmt::format("unknown hiddenness mode {}", static_cast<int>(mode)));
}

bellmd::FamilyId family_of(bellmd_family family) {
  switch (family) {
    case BELLMD_FAMILY_H1: return bellmd::FamilyId::H1;
    case BELLMD_FAMILY_H2: return bellmd::FamilyId::H2;
    case BELLMD_FAMILY_H3PLUS: return bellmd::FamilyId::H3Plus;
  }
  bellmd::fail(bellmd::ErrorKind::Domain, fmt::format("unknown family {}", static_cast<int>(family)));
}

bellmd::ValidationOptions options_with_cap(size_t max_hidden) {
  bellmd::ValidationOptions opts;
  if (max_hidden != 0) opts.max_hidden = max_hidden;
  return opts;
}

void check_len(size_t len, size_t needed, const char* name) {
  if (len < needed) {
    bellmd::fail(bellmd::ErrorKind::Dimension,
                 fmt::format("buffer '{}' holds {} values, {} required", name, len, needed));
  }
}

bellmd::Behavior behavior_of(const double* joint) {
  bellmd::Behavior::Table t{};
  for (size_t i = 0; i < bellmd::kContexts; ++i) {
    for (size_t k = 0; k < bellmd::kOutcomePairs; ++k) t[i][k] = joint[4 * i + k];
  }
  return bellmd::Behavior::create(t);
}

bellmd_lemma_witness witness_of(const bellmd::LemmaWitness& w) {
  return {static_cast<uint32_t>(w.i), static_cast<uint32_t>(w.j), w.lambda, w.lhs};
}

}  // namespace

extern "C" {

const char* bellmd_version(void) { return BELLMD_VERSION_STRING; }

const char* bellmd_status_string(bellmd_status status) {
  switch (status) {
    case BELLMD_OK: return "ok";
    case BELLMD_ERR_VALIDATION: return "validation error";
    case BELLMD_ERR_DIMENSION: return "dimension error";
    case BELLMD_ERR_DOMAIN: return "domain error";
    case BELLMD_ERR_INFEASIBLE: return "infeasible input";
    case BELLMD_ERR_RESOURCE: return "resource error";
    case BELLMD_ERR_INVARIANT: return "invariant violation";
    case BELLMD_ERR_PARSE: return "parse error";
    case BELLMD_ERR_IO: return "i/o error";
    case BELLMD_ERR_NULL_ARGUMENT: return "null argument";
    case BELLMD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bellmd_last_error(void) { return last_error.c_str(); }

void bellmd_string_free(char* s) { delete[] s; }

const char* bellmd_rng_stream(void) { return bellmd::kRngStream; }

bellmd_status bellmd_dist_create(const double* probs, size_t n, bellmd_dist** out) {
  return bellmd_dist_create_capped(probs, n, 0, out);
}

bellmd_status bellmd_dist_create_capped(const double* probs, size_t n, size_t max_hidden, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    require(probs, "probs");
    *out = new bellmd_dist{bellmd::ContextDistribution::from_flat({probs, 4 * n}, n, options_with_cap(max_hidden))};
  });
}

bellmd_status bellmd_dist_random(size_t n, uint64_t seed, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    if (n == 0) bellmd::fail(bellmd::ErrorKind::Domain, "n must be positive");
    bellmd::RandomModels rng(seed);
    *out = new bellmd_dist{rng.dist(n)};
  });
}

void bellmd_dist_destroy(bellmd_dist* dist) { delete dist; }

size_t bellmd_dist_size(const bellmd_dist* dist) { return dist ? dist->value.size() : 0; }

bellmd_status bellmd_dist_values(const bellmd_dist* dist, double* out, size_t len) {
  return guarded([&] {
    const auto flat = require(dist, "dist")->value.flat();
    require(out, "out");
    check_len(len, flat.size(), "out");
    std::copy(flat.begin(), flat.end(), out);
  });
}

bellmd_status bellmd_dist_to_json(const bellmd_dist* dist, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_string(bellmd::dist_to_json(require(dist, "dist")->value));
  });
}

bellmd_status bellmd_dist_pad(const bellmd_dist* dist, size_t n, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_dist{require(dist, "dist")->value.padded(n)};
  });
}

bellmd_status bellmd_dist_trim(const bellmd_dist* dist, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_dist{bellmd::trim_zero_rows(require(dist, "dist")->value)};
  });
}

bellmd_status bellmd_dist_interpolate(const bellmd_dist* a, const bellmd_dist* b, double t, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_dist{bellmd::interpolate(require(a, "a")->value, require(b, "b")->value, t)};
  });
}

bellmd_status bellmd_model_create(const bellmd_dist* dist, const double* a_plus, const double* b_plus,
                                  bellmd_model** out) {
  return guarded([&] {
    require(out, "out");
    const auto& d = require(dist, "dist")->value;
    require(a_plus, "a_plus");
    require(b_plus, "b_plus");
    const size_t n = d.size();
    auto responses = bellmd::LocalResponses::create(
        {std::vector<double>(a_plus, a_plus + n), std::vector<double>(a_plus + n, a_plus + 2 * n)},
        {std::vector<double>(b_plus, b_plus + n), std::vector<double>(b_plus + n, b_plus + 2 * n)});
    *out = new bellmd_model{bellmd::LocalModel(d, std::move(responses))};
  });
}

bellmd_status bellmd_model_create_optimal(const bellmd_dist* dist, bellmd_model** out) {
  return guarded([&] {
    require(out, "out");
    const auto& d = require(dist, "dist")->value;
    *out = new bellmd_model{bellmd::LocalModel(d, bellmd::optimal_responses(d))};
  });
}

bellmd_status bellmd_model_random(size_t n, uint64_t seed, bellmd_model** out) {
  return guarded([&] {
    require(out, "out");
    if (n == 0) bellmd::fail(bellmd::ErrorKind::Domain, "n must be positive");
    bellmd::RandomModels rng(seed);
    *out = new bellmd_model{rng.model(n)};
  });
}

bellmd_status bellmd_model_parse(const char* text, size_t max_hidden, bellmd_model** out, int* responses_given) {
  return guarded([&] {
    require(out, "out");
    auto loaded = bellmd::parse_model(require(text, "text"), options_with_cap(max_hidden));
    if (responses_given) *responses_given = loaded.responses_given ? 1 : 0;
    *out = new bellmd_model{std::move(loaded.model)};
  });
}

bellmd_status bellmd_model_load(const char* path, size_t max_hidden, bellmd_model** out, int* responses_given) {
  return guarded([&] {
    require(out, "out");
    auto loaded = bellmd::load_model(require(path, "path"), options_with_cap(max_hidden));
    if (responses_given) *responses_given = loaded.responses_given ? 1 : 0;
    *out = new bellmd_model{std::move(loaded.model)};
  });
}

bellmd_status bellmd_model_to_json(const bellmd_model* model, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_string(bellmd::model_to_json(require(model, "model")->value));
  });
}

bellmd_status bellmd_model_save(const bellmd_model* model, const char* path) {
  return guarded([&] {
    bellmd::write_file(require(path, "path"), bellmd::model_to_json(require(model, "model")->value));
  });
}

void bellmd_model_destroy(bellmd_model* model) { delete model; }

size_t bellmd_model_size(const bellmd_model* model) { return model ? model->value.size() : 0; }

bellmd_status bellmd_model_dist(const bellmd_model* model, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_dist{require(model, "model")->value.dist()};
  });
}

bellmd_status bellmd_model_responses(const bellmd_model* model, double* a_plus, double* b_plus, size_t len) {
  return guarded([&] {
    const auto& r = require(model, "model")->value.responses();
    require(a_plus, "a_plus");
    require(b_plus, "b_plus");
    const size_t n = r.size();
    check_len(len, 2 * n, "a_plus/b_plus");
    for (int s = 0; s < 2; ++s) {
      std::copy(r.a_table()[s].begin(), r.a_table()[s].end(), a_plus + s * n);
      std::copy(r.b_table()[s].begin(), r.b_table()[s].end(), b_plus + s * n);
    }
  });
}

bellmd_status bellmd_model_joint(const bellmd_model* model, double joint[16]) {
  return guarded([&] {
    require(joint, "joint");
    const auto b = bellmd::joint_distribution(require(model, "model")->value);
    for (size_t i = 0; i < bellmd::kContexts; ++i) {
      for (size_t k = 0; k < bellmd::kOutcomePairs; ++k) joint[4 * i + k] = b(i, k);
    }
  });
}

bellmd_status bellmd_model_correlators(const bellmd_model* model, double correlators[4]) {
  return guarded([&] {
    require(correlators, "correlators");
    const auto b = bellmd::joint_distribution(require(model, "model")->value);
    for (size_t i = 0; i < bellmd::kContexts; ++i) {
      correlators[i] = bellmd::correlator(b, bellmd::MeasurementContext::from_index(i));
    }
  });
}

bellmd_status bellmd_model_chsh(const bellmd_model* model, double* out) {
  return guarded([&] {
    *require(out, "out") = bellmd::chsh_value(bellmd::joint_distribution(require(model, "model")->value));
  });
}

bellmd_status bellmd_behavior_correlator(const double joint[16], int x, int y, double* out) {
  return guarded([&] {
    *require(out, "out") = bellmd::correlator(behavior_of(require(joint, "joint")), {x, y});
  });
}

bellmd_status bellmd_behavior_chsh(const double joint[16], double* out) {
  return guarded([&] { *require(out, "out") = bellmd::chsh_value(behavior_of(require(joint, "joint"))); });
}

bellmd_status bellmd_total_variation(const double* p, const double* q, size_t n, double* out) {
  return guarded([&] {
    *require(out, "out") = bellmd::total_variation({require(p, "p"), n}, {require(q, "q"), n});
  });
}

bellmd_status bellmd_measurement_dependence(const bellmd_dist* dist, double* out) {
  return guarded([&] { *require(out, "out") = bellmd::measurement_dependence(require(dist, "dist")->value); });
}

bellmd_status bellmd_hiddenness(const bellmd_dist* dist, bellmd_hiddenness_mode mode, uint64_t* out) {
  return guarded([&] {
    *require(out, "out") = bellmd::hiddenness(require(dist, "dist")->value, mode_of(mode));
  });
}

bellmd_status bellmd_g_function(const double z[4], double* out) {
  return guarded([&] {
    require(z, "z");
    *require(out, "out") = bellmd::g_function({z[0], z[1], z[2], z[3]});
  });
}

bellmd_status bellmd_optimal_chsh(const bellmd_dist* dist, double* out) {
  return guarded([&] { *require(out, "out") = bellmd::optimal_chsh(require(dist, "dist")->value); });
}

bellmd_status bellmd_brute_force_optimal_chsh(const bellmd_dist* dist, size_t cap, double* out) {
  return guarded([&] {
    *require(out, "out") = bellmd::brute_force_optimal_chsh(require(dist, "dist")->value,
                                                            cap == 0 ? bellmd::kDefaultOracleCap : cap);
  });
}

bellmd_status bellmd_upper_bound(uint64_t hiddenness, double dependence, double* out) {
  return guarded([&] { *require(out, "out") = bellmd::upper_bound(hiddenness, dependence); });
}

bellmd_status bellmd_lower_bound_copt(double dependence, double* out) {
  return guarded([&] { *require(out, "out") = bellmd::lower_bound_copt(dependence); });
}

bellmd_status bellmd_min_dependence_for_chsh(double chsh, uint64_t hiddenness, double* out) {
  return guarded([&] { *require(out, "out") = bellmd::min_dependence_for_chsh(chsh, hiddenness); });
}

bellmd_status bellmd_check_tradeoff(const bellmd_model* model, bellmd_hiddenness_mode mode,
                                    bellmd_tradeoff_report* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = bellmd::check_tradeoff(require(model, "model")->value, mode_of(mode));
    *out = {r.hiddenness,          r.dependence,          r.chsh,
            r.optimal_chsh,        r.lower_bound,         r.upper_bound,
            r.chsh_within_optimal, r.chsh_within_upper,   r.optimal_within_upper,
            r.lower_within_optimal};
  });
}

bellmd_status bellmd_min_index_per_lambda(const bellmd_dist* dist, uint32_t* out, size_t len) {
  return guarded([&] {
    const auto idx = bellmd::min_index_per_lambda(require(dist, "dist")->value);
    require(out, "out");
    check_len(len, idx.size(), "out");
    for (size_t k = 0; k < idx.size(); ++k) out[k] = static_cast<uint32_t>(idx[k]);
  });
}

bellmd_status bellmd_find_lemma_witness(const bellmd_dist* dist, bellmd_lemma_witness* out) {
  return guarded([&] {
    require(out, "out");
    const auto& d = require(dist, "dist")->value;
    if (d.size() == 3) {
      *out = witness_of(bellmd::lemma_witness_n3(d));
    } else if (d.size() == 4) {
      *out = witness_of(bellmd::lemma_witness_n4(d));
    } else {
      bellmd::fail(bellmd::ErrorKind::Domain,
                   fmt::format("lemma witnesses exist for n = 3 or 4, got n = {}", d.size()));
    }
  });
}

bellmd_status bellmd_coarse_grain(const bellmd_dist* dist, bellmd_dist** out, uint32_t* cells, size_t len) {
  return guarded([&] {
    require(out, "out");
    const auto& d = require(dist, "dist")->value;
    auto cg = bellmd::coarse_grain(d);
    if (cells != nullptr) {
      check_len(len, d.size(), "cells");
      for (size_t gamma = 0; gamma < cg.cells.size(); ++gamma) {
        for (size_t k : cg.cells[gamma]) cells[k] = static_cast<uint32_t>(gamma);
      }
    }
    *out = new bellmd_dist{std::move(cg.dist)};
  });
}

bellmd_status bellmd_check_coarse_grain(const bellmd_dist* dist, bellmd_coarse_grain_check* out) {
  return guarded([&] {
    require(out, "out");
    const auto c = bellmd::check_coarse_grain(require(dist, "dist")->value);
    *out = {c.sum_min_original, c.sum_min_coarse, c.dependence_original, c.dependence_coarse,
            witness_of(c.witness), c.chained_lhs,  c.sums_agree,          c.dependence_monotone,
            c.chained_holds};
  });
}

bellmd_status bellmd_oracle_random(uint64_t count, size_t n, uint64_t seed, double tolerance,
                                   bellmd_oracle_summary* out) {
  return guarded([&] {
    require(out, "out");
    if (n == 0) bellmd::fail(bellmd::ErrorKind::Domain, "n must be positive");
    bellmd::RandomModels rng(seed);
    bellmd_oracle_summary s{count, 0, 0.0};
    for (uint64_t k = 0; k < count; ++k) {
      const auto d = rng.dist(n);
      const double diff = std::abs(bellmd::optimal_chsh(d) - bellmd::brute_force_optimal_chsh(d, n));
      s.max_abs_difference = std::max(s.max_abs_difference, diff);
      if (diff <= tolerance) ++s.agreements;
    }
    *out = s;
  });
}

bellmd_status bellmd_tight_model(bellmd_family family, double p, size_t pad_to, bellmd_dist** out) {
  return guarded([&] {
    require(out, "out");
    bellmd::TightFamily f{family_of(family), p, std::nullopt};
    if (pad_to != 0) f.pad_to = pad_to;
    *out = new bellmd_dist{bellmd::tight_model(f)};
  });
}

bellmd_status bellmd_parse_family(const char* name, bellmd_family* out) {
  return guarded([&] {
    require(out, "out");
    switch (bellmd::parse_family(require(name, "name"))) {
      case bellmd::FamilyId::H1: *out = BELLMD_FAMILY_H1; break;
      case bellmd::FamilyId::H2: *out = BELLMD_FAMILY_H2; break;
      case bellmd::FamilyId::H3Plus: *out = BELLMD_FAMILY_H3PLUS; break;
    }
  });
}

bellmd_status bellmd_family_curve_csv(bellmd_family family, size_t steps, size_t pad_to, char** out) {
  return guarded([&] {
    require(out, "out");
    std::optional<size_t> pad;
    if (pad_to != 0) pad = pad_to;
    *out = copy_string(bellmd::to_csv(bellmd::tight_family_curve(family_of(family), steps, pad)));
  });
}

bellmd_status bellmd_region_csv(uint64_t hiddenness, size_t steps_m, size_t steps_t, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_string(bellmd::to_csv(bellmd::region_sweep(hiddenness, steps_m, steps_t)));
  });
}

bellmd_status bellmd_sample(const bellmd_model* model, uint64_t trials_per_context, uint64_t seed,
                            bellmd_record** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_record{bellmd::sample(require(model, "model")->value, trials_per_context, seed)};
  });
}

bellmd_status bellmd_record_parse(const char* text, bellmd_record** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bellmd_record{bellmd::parse_record(require(text, "text"))};
  });
}

void bellmd_record_destroy(bellmd_record* record) { delete record; }

bellmd_status bellmd_record_counts(const bellmd_record* record, uint64_t counts[16]) {
  return guarded([&] {
    require(counts, "counts");
    const auto& r = require(record, "record")->value;
    for (size_t i = 0; i < bellmd::kContexts; ++i) {
      for (size_t k = 0; k < bellmd::kOutcomePairs; ++k) counts[4 * i + k] = r.counts[i][k];
    }
  });
}

bellmd_status bellmd_record_estimate(const bellmd_record* record, bellmd_estimate* out) {
  return guarded([&] {
    require(out, "out");
    const auto e = bellmd::estimate(require(record, "record")->value);
    for (size_t i = 0; i < 4; ++i) out->correlators[i] = e.correlators[i];
    out->chsh = e.chsh;
    out->stderr_chsh = e.stderr_chsh;
  });
}

bellmd_status bellmd_record_to_json(const bellmd_record* record, int include_estimate, char** out) {
  return guarded([&] {
    require(out, "out");
    const auto& r = require(record, "record")->value;
    std::optional<bellmd::Estimate> e;
    if (include_estimate) e = bellmd::estimate(r);
    *out = copy_string(bellmd::record_to_json(r, e));
  });
}

bellmd_status bellmd_write_text(const char* path, const char* text) {
  return guarded([&] { bellmd::write_file(require(path, "path"), require(text, "text")); });
}

}  // extern "C"

#pragma once

// JSON documents for models and experiment records.
//
// Model document:
//   { "lambda_labels": ["l1", ...],          optional
//     "dist":   [[...n], [...n], [...n], [...n]],   contexts 00, 01, 10, 11
//     "a_plus": [[...n], [...n]],             p(a=+1|x,lambda), optional
//     "b_plus": [[...n], [...n]] }            p(b=+1|y,lambda), optional
// Numbers may be JSON numbers or strings holding a decimal or a fraction "p/q".
// When a_plus/b_plus are absent the optimal deterministic responses are used.

#include <optional>
#include <string>
#include <string_view>

#include "bellmd/model.hpp"
#include "bellmd/montecarlo.hpp"

namespace bellmd {

struct LoadedModel {
  LocalModel model;
  bool responses_given = false;
};

/// Parses "0.25", "1/3", "-2" (then rejected by validation), ...  Throws ErrorKind::Parse.
double parse_number(std::string_view text);

LoadedModel parse_model(std::string_view text, const ValidationOptions& options = {});
LoadedModel load_model(const std::string& path, const ValidationOptions& options = {});

std::string model_to_json(const LocalModel& model, int indent = 2);
std::string dist_to_json(const ContextDistribution& dist, int indent = 2);

std::string record_to_json(const ExperimentRecord& record, const std::optional<Estimate>& estimate,
                           int indent = 2);
ExperimentRecord parse_record(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace bellmd

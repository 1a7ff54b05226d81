#include "bellmd/model_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "bellmd/bounds.hpp"
#include "bellmd/error.hpp"

namespace bellmd {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_decimal(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(ErrorKind::Parse, fmt::format("'{}' is not a number or fraction", whole));
  }
  return v;
}

// Line and column of a byte offset, both 1-based.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_at(const json& node, const std::string& path) {
  if (node.is_number()) return node.get<double>();
  if (node.is_string()) {
    try {
      return parse_number(node.get<std::string>());
    } catch (const Error& e) {
      fail(ErrorKind::Parse, fmt::format("{}: {}", path, e.what()));
    }
  }
  fail(ErrorKind::Parse, fmt::format("{}: expected a number or fraction string, got {}", path, node.type_name()));
}

std::vector<std::vector<double>> matrix_at(const json& doc, const char* field, std::size_t rows) {
  if (!doc.contains(field)) fail(ErrorKind::Parse, fmt::format("missing field '{}'", field));
  const json& node = doc.at(field);
  if (!node.is_array() || node.size() != rows) {
    fail(ErrorKind::Parse, fmt::format("{}: expected an array of {} rows", field, rows));
  }
  std::vector<std::vector<double>> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = node[r];
    if (!row.is_array()) fail(ErrorKind::Parse, fmt::format("{}[{}]: expected an array", field, r));
    for (std::size_t c = 0; c < row.size(); ++c) {
      out[r].push_back(number_at(row[c], fmt::format("{}[{}][{}]", field, r, c)));
    }
  }
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(ErrorKind::Parse, fmt::format("line {}, column {}: malformed JSON ({})", line, col, e.what()));
  }
}

// Validation errors from the core name rows by index; prefix the document field.
template <class F>
auto with_field(const char* field, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Validation) {
      fail(ErrorKind::Validation, fmt::format("{}: {}", field, e.what()));
    }
    throw;
  }
}

json matrix_json(std::span<const double> flat, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                      flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)));
  }
  return out;
}

json dist_json(const ContextDistribution& dist) {
  json doc;
  json labels = json::array();
  for (std::size_t k = 0; k < dist.size(); ++k) labels.push_back(dist.label(k));
  doc["lambda_labels"] = labels;
  doc["dist"] = matrix_json(dist.flat(), kContexts, dist.size());
  return doc;
}

}  // namespace

double parse_number(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, text);
  const double num = parse_decimal(text.substr(0, slash), text);
  const double den = parse_decimal(text.substr(slash + 1), text);
  if (den == 0.0) fail(ErrorKind::Parse, fmt::format("'{}' has a zero denominator", text));
  return num / den;
}

LoadedModel parse_model(std::string_view text, const ValidationOptions& options) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail(ErrorKind::Parse, "model document must be a JSON object");

  const auto dist_rows = matrix_at(doc, "dist", kContexts);
  std::vector<std::string> labels;
  if (doc.contains("lambda_labels")) {
    const json& node = doc.at("lambda_labels");
    if (!node.is_array()) fail(ErrorKind::Parse, "lambda_labels: expected an array of strings");
    for (std::size_t k = 0; k < node.size(); ++k) {
      if (!node[k].is_string()) fail(ErrorKind::Parse, fmt::format("lambda_labels[{}]: expected a string", k));
      labels.push_back(node[k].get<std::string>());
    }
  }
  ContextDistribution::Rows rows;
  for (std::size_t i = 0; i < kContexts; ++i) rows[i] = dist_rows[i];
  auto dist = with_field("dist", [&] {
    return ContextDistribution::from_rows(std::move(rows), std::move(labels), options);
  });

  const bool has_a = doc.contains("a_plus");
  const bool has_b = doc.contains("b_plus");
  if (has_a != has_b) fail(ErrorKind::Parse, "a_plus and b_plus must be given together");
  if (!has_a) {
    auto responses = optimal_responses(dist);
    return {LocalModel(std::move(dist), std::move(responses)), false};
  }
  const auto a = matrix_at(doc, "a_plus", 2);
  const auto b = matrix_at(doc, "b_plus", 2);
  auto responses = with_field("a_plus/b_plus", [&] { return LocalResponses::create({a[0], a[1]}, {b[0], b[1]}); });
  return {LocalModel(std::move(dist), std::move(responses)), true};
}

LoadedModel load_model(const std::string& path, const ValidationOptions& options) {
  const std::string text = read_file(path);
  try {
    return parse_model(text, options);
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string model_to_json(const LocalModel& model, int indent) {
  json doc = dist_json(model.dist());
  const auto& r = model.responses();
  doc["a_plus"] = json::array({r.a_table()[0], r.a_table()[1]});
  doc["b_plus"] = json::array({r.b_table()[0], r.b_table()[1]});
  return doc.dump(indent) + "\n";
}

std::string dist_to_json(const ContextDistribution& dist, int indent) {
  return dist_json(dist).dump(indent) + "\n";
}

std::string record_to_json(const ExperimentRecord& record, const std::optional<Estimate>& estimate,
                           int indent) {
  json doc;
  doc["seed"] = record.seed;
  doc["rng"] = kRngStream;
  doc["trials"] = record.trials;
  doc["counts"] = record.counts;
  if (estimate) {
    doc["estimate"] = {{"correlators", estimate->correlators},
                       {"chsh", estimate->chsh},
                       {"stderr", estimate->stderr_chsh}};
  }
  return doc.dump(indent) + "\n";
}

ExperimentRecord parse_record(std::string_view text) {
  const json doc = parse_json(text);
  ExperimentRecord r;
  try {
    r.seed = doc.at("seed").get<std::uint64_t>();
    const json& trials = doc.at("trials");
    if (trials.is_number()) {
      r.trials.fill(trials.get<std::uint64_t>());
    } else {
      r.trials = trials.get<std::array<std::uint64_t, kContexts>>();
    }
    r.counts = doc.at("counts").get<decltype(r.counts)>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, fmt::format("record: {}", e.what()));
  }
  r.validate();
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, fmt::format("cannot open '{}' for reading", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path));
  out << contents;
  if (!out) fail(ErrorKind::Io, fmt::format("failed writing '{}'", path));
}

}  // namespace bellmd

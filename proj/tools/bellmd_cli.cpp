// bellmd: command-line front end over the libbellmd C API.
//
// Exit status: 0 when every requested check passes, 1 when a check fails,
// 2 on malformed input or usage errors, 3 on infeasible parameter combinations.
// The last line written to stdout is always a one-line summary starting with
// "RESULT <subcommand> <ok|fail|error>".

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellmd/bellmd.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

struct DistDeleter {
  void operator()(bellmd_dist* d) const { bellmd_dist_destroy(d); }
};
struct ModelDeleter {
  void operator()(bellmd_model* m) const { bellmd_model_destroy(m); }
};
struct RecordDeleter {
  void operator()(bellmd_record* r) const { bellmd_record_destroy(r); }
};
struct StringDeleter {
  void operator()(char* s) const { bellmd_string_free(s); }
};
using Dist = std::unique_ptr<bellmd_dist, DistDeleter>;
using Model = std::unique_ptr<bellmd_model, ModelDeleter>;
using Record = std::unique_ptr<bellmd_record, RecordDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct CliError {
  bellmd_status status;
  std::string message;
};

void check(bellmd_status s) {
  if (s != BELLMD_OK) throw CliError{s, bellmd_last_error()};
}

std::string fixed12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

// Rounds to 12 significant digits so JSON output carries no more than that.
double sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string sig12_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Options {
  std::string format = "text";
  std::size_t max_n = 0;
  std::string input;
  std::string output;
  std::string family = "H1";
  double p = 0.0;
  std::size_t pad_to = 0;
  std::size_t steps = 21;
  std::size_t t_steps = 0;
  std::uint64_t hiddenness = 1;
  std::optional<std::uint64_t> hiddenness_override;
  std::string hiddenness_mode = "declared";
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::uint64_t random_count = 0;
  std::size_t random_n = 5;
  double tolerance = 1e-12;
};

Model load(const Options& opt, int* responses_given = nullptr) {
  bellmd_model* raw = nullptr;
  check(bellmd_model_load(opt.input.c_str(), opt.max_n, &raw, responses_given));
  return Model(raw);
}

Dist dist_of(const bellmd_model* m) {
  bellmd_dist* raw = nullptr;
  check(bellmd_model_dist(m, &raw));
  return Dist(raw);
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    check(bellmd_write_text(opt.output.c_str(), text.c_str()));
  }
}

std::size_t oracle_cap() {
  if (const char* env = std::getenv("BELLMD_ORACLE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 20;
}

bellmd_hiddenness_mode mode_of(const std::string& s) {
  return s == "effective" ? BELLMD_HIDDENNESS_EFFECTIVE : BELLMD_HIDDENNESS_DECLARED;
}

bellmd_family family_of(const std::string& name) {
  bellmd_family f{};
  check(bellmd_parse_family(name.c_str(), &f));
  return f;
}

// ---- subcommands -------------------------------------------------------

int run_validate(const Options& opt) {
  int responses_given = 0;
  auto model = load(opt, &responses_given);
  auto dist = dist_of(model.get());
  const std::size_t n = bellmd_dist_size(dist.get());
  std::vector<double> values(4 * n);
  check(bellmd_dist_values(dist.get(), values.data(), values.size()));

  static const char* names[] = {"P00", "P01", "P10", "P11"};
  std::cout << "model: " << opt.input << "\n";
  std::cout << "hidden variables: " << n << "\n";
  for (std::size_t i = 0; i < 4; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += values[i * n + k];
    std::cout << "row " << names[i] << ": sum=" << fixed12(sum) << "\n";
  }
  std::cout << "responses: " << (responses_given ? "given" : "absent (optimal deterministic responses used)")
            << "\n";
  std::cout << "RESULT validate ok n=" << n << "\n";
  return kExitOk;
}

int run_compute(const Options& opt) {
  auto model = load(opt);
  auto dist = dist_of(model.get());
  double c = 0, m = 0, copt = 0, corr[4];
  std::uint64_t h = 0, h_eff = 0;
  check(bellmd_model_chsh(model.get(), &c));
  check(bellmd_model_correlators(model.get(), corr));
  check(bellmd_measurement_dependence(dist.get(), &m));
  check(bellmd_optimal_chsh(dist.get(), &copt));
  check(bellmd_hiddenness(dist.get(), BELLMD_HIDDENNESS_DECLARED, &h));
  check(bellmd_hiddenness(dist.get(), BELLMD_HIDDENNESS_EFFECTIVE, &h_eff));

  if (opt.format == "json") {
    json doc = {{"C", sig12(c)},
                {"C_opt", sig12(copt)},
                {"M", sig12(m)},
                {"H", h},
                {"H_effective", h_eff},
                {"correlators", {sig12(corr[0]), sig12(corr[1]), sig12(corr[2]), sig12(corr[3])}}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "C=" << fixed12(c) << "\n"
              << "C_opt=" << fixed12(copt) << "\n"
              << "M=" << fixed12(m) << "\n"
              << "H=" << h << "\n"
              << "H_effective=" << h_eff << "\n";
  }
  std::cout << "RESULT compute ok C=" << fixed12(c) << " C_opt=" << fixed12(copt) << " M=" << fixed12(m)
            << " H=" << h << " H_effective=" << h_eff << "\n";
  return kExitOk;
}

int run_verify(const Options& opt) {
  auto model = load(opt);
  auto dist = dist_of(model.get());
  const std::size_t n = bellmd_dist_size(dist.get());

  bellmd_tradeoff_report r{};
  check(bellmd_check_tradeoff(model.get(), mode_of(opt.hiddenness_mode), &r));
  double upper = r.upper_bound;
  std::uint64_t h = r.hiddenness;
  if (opt.hiddenness_override) {
    h = *opt.hiddenness_override;
    check(bellmd_upper_bound(h, r.dependence, &upper));
    r.chsh_within_upper = r.chsh <= upper + 1e-9;
    r.optimal_within_upper = r.optimal_chsh <= upper + 1e-9;
  }
  bool ok = r.chsh_within_optimal && r.chsh_within_upper && r.optimal_within_upper && r.lower_within_optimal;

  json doc = {{"H", h},
              {"M", sig12(r.dependence)},
              {"C", sig12(r.chsh)},
              {"C_opt", sig12(r.optimal_chsh)},
              {"lower_bound", sig12(r.lower_bound)},
              {"upper_bound", sig12(upper)},
              {"C<=C_opt", static_cast<bool>(r.chsh_within_optimal)},
              {"C<=upper", static_cast<bool>(r.chsh_within_upper)},
              {"C_opt<=upper", static_cast<bool>(r.optimal_within_upper)},
              {"lower<=C_opt", static_cast<bool>(r.lower_within_optimal)}};

  if (n == 3 || n == 4) {
    bellmd_lemma_witness w{};
    const auto s = bellmd_find_lemma_witness(dist.get(), &w);
    const bool found = s == BELLMD_OK;
    doc["lemma_witness"] = found ? json{{"i", w.i}, {"j", w.j}, {"lambda", w.lambda}, {"lhs", sig12(w.lhs)}}
                                 : json(bellmd_last_error());
    ok = ok && found;
  } else if (n >= 5) {
    bellmd_coarse_grain_check c{};
    check(bellmd_check_coarse_grain(dist.get(), &c));
    doc["coarse_grain"] = {{"sum_min_original", sig12(c.sum_min_original)},
                           {"sum_min_coarse", sig12(c.sum_min_coarse)},
                           {"M_coarse", sig12(c.dependence_coarse)},
                           {"chained_lhs", sig12(c.chained_lhs)},
                           {"sums_agree", static_cast<bool>(c.sums_agree)},
                           {"M_monotone", static_cast<bool>(c.dependence_monotone)},
                           {"chained_holds", static_cast<bool>(c.chained_holds)}};
    ok = ok && c.sums_agree && c.dependence_monotone && c.chained_holds;
  }

  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "H=" << h << " M=" << fixed12(r.dependence) << "\n"
              << "C=" << fixed12(r.chsh) << " C_opt=" << fixed12(r.optimal_chsh) << "\n"
              << "bound: " << fixed12(r.lower_bound) << " <= C_opt <= " << fixed12(upper) << "\n"
              << "bound: C <= " << fixed12(upper) << (r.chsh_within_upper ? " holds" : " VIOLATED") << "\n";
    if (doc.contains("lemma_witness")) std::cout << "lemma witness: " << doc["lemma_witness"].dump() << "\n";
    if (doc.contains("coarse_grain")) std::cout << "coarse grain: " << doc["coarse_grain"].dump() << "\n";
  }
  std::cout << "RESULT verify " << (ok ? "ok" : "fail") << " H=" << h << " M=" << fixed12(r.dependence)
            << " C=" << fixed12(r.chsh) << " C_opt=" << fixed12(r.optimal_chsh) << " upper=" << fixed12(upper)
            << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int run_tight(const Options& opt) {
  bellmd_dist* raw = nullptr;
  check(bellmd_tight_model(family_of(opt.family), opt.p, opt.pad_to, &raw));
  Dist dist(raw);
  bellmd_model* mraw = nullptr;
  check(bellmd_model_create_optimal(dist.get(), &mraw));
  Model model(mraw);
  char* text = nullptr;
  check(bellmd_model_to_json(model.get(), &text));
  OwnedString owned(text);
  emit(opt, text);
  std::cout << "RESULT tight ok family=" << opt.family << " p=" << sig12_text(opt.p)
            << " n=" << bellmd_dist_size(dist.get()) << "\n";
  return kExitOk;
}

std::size_t count_rows(const char* csv) {
  std::size_t lines = 0;
  for (const char* c = csv; *c; ++c) lines += *c == '\n';
  return lines == 0 ? 0 : lines - 1;
}

int run_sweep(const Options& opt) {
  char* text = nullptr;
  check(bellmd_family_curve_csv(family_of(opt.family), opt.steps, opt.pad_to, &text));
  OwnedString owned(text);
  emit(opt, text);
  std::cout << "RESULT sweep ok family=" << opt.family << " points=" << count_rows(text) << "\n";
  return kExitOk;
}

int run_region(const Options& opt) {
  char* text = nullptr;
  check(bellmd_region_csv(opt.hiddenness, opt.steps, opt.t_steps ? opt.t_steps : opt.steps, &text));
  OwnedString owned(text);
  emit(opt, text);
  std::cout << "RESULT region ok H=" << opt.hiddenness << " points=" << count_rows(text) << "\n";
  return kExitOk;
}

int run_sample(const Options& opt) {
  auto model = load(opt);
  bellmd_record* raw = nullptr;
  check(bellmd_sample(model.get(), opt.trials, opt.seed, &raw));
  Record record(raw);
  bellmd_estimate e{};
  check(bellmd_record_estimate(record.get(), &e));
  char* text = nullptr;
  check(bellmd_record_to_json(record.get(), 1, &text));
  OwnedString owned(text);
  emit(opt, text);
  double exact = 0;
  check(bellmd_model_chsh(model.get(), &exact));
  std::cout << "RESULT sample ok C_hat=" << fixed12(e.chsh) << " stderr=" << fixed12(e.stderr_chsh)
            << " C_exact=" << fixed12(exact) << " seed=" << opt.seed << " rng=" << bellmd_rng_stream() << "\n";
  return kExitOk;
}

int run_oracle(const Options& opt) {
  const std::size_t cap = oracle_cap();
  if (opt.random_count > 0) {
    bellmd_oracle_summary s{};
    check(bellmd_oracle_random(opt.random_count, opt.random_n, opt.seed, opt.tolerance, &s));
    const bool ok = s.agreements == s.instances;
    std::cout << s.agreements << "/" << s.instances << " agree within " << sig12_text(opt.tolerance)
              << " (max |diff| = " << sig12_text(s.max_abs_difference) << ")\n";
    std::cout << "RESULT oracle " << (ok ? "ok" : "fail") << " agree=" << s.agreements << "/" << s.instances
              << "\n";
    return ok ? kExitOk : kExitCheckFailed;
  }
  if (opt.input.empty()) throw CliError{BELLMD_ERR_DOMAIN, "oracle needs a model file or --random N"};
  auto model = load(opt);
  auto dist = dist_of(model.get());
  double formula = 0, brute = 0;
  check(bellmd_optimal_chsh(dist.get(), &formula));
  check(bellmd_brute_force_optimal_chsh(dist.get(), cap, &brute));
  const double diff = std::abs(formula - brute);
  const bool ok = diff <= opt.tolerance;
  std::cout << "C_opt(formula)=" << fixed12(formula) << "\nC_opt(brute force)=" << fixed12(brute) << "\n";
  std::cout << "RESULT oracle " << (ok ? "ok" : "fail") << " agree=" << (ok ? 1 : 0) << "/1 diff="
            << sig12_text(diff) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Local hidden-variable models with measurement dependence: CHSH trade-offs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bellmd_version());
  app.add_option("--max-n", opt.max_n, "Cap on the number of hidden variables accepted (default 1000000)");

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opt.output, "Output path (default stdout)");
  };

  auto* validate = app.add_subcommand("validate", "Check model-file invariants");
  validate->add_option("model", opt.input, "Model file")->required();

  auto* compute = app.add_subcommand("compute", "Print C, M, H and C_opt of a model");
  compute->add_option("model", opt.input, "Model file")->required();
  add_format(compute);

  auto* verify = app.add_subcommand("verify", "Check the trade-off bounds, lemma witnesses and coarse-graining");
  verify->add_option("model", opt.input, "Model file")->required();
  verify->add_option("--hiddenness", opt.hiddenness_mode, "Hiddenness counting")
      ->check(CLI::IsMember({"declared", "effective"}));
  verify->add_option("--H", opt.hiddenness_override, "Check against the bound for this H instead");
  add_format(verify);

  auto* tight = app.add_subcommand("tight", "Write a tight-family model file");
  tight->add_option("--family", opt.family, "H1, H2 or H3plus")->required();
  tight->add_option("--p", opt.p, "Family parameter in [0,1]")->required();
  tight->add_option("--pad-to", opt.pad_to, "Append zero hidden variables up to this count");
  add_output(tight);

  auto* sweep = app.add_subcommand("sweep", "Write the (M, C_opt) curve of a tight family as CSV");
  sweep->add_option("--family", opt.family, "H1, H2 or H3plus")->required();
  sweep->add_option("--steps", opt.steps, "Grid points in p (>= 2)");
  sweep->add_option("--pad-to", opt.pad_to, "Append zero hidden variables up to this count");
  add_output(sweep);

  auto* region = app.add_subcommand("region", "Write the feasible (M, C_opt) region for H as CSV");
  region->add_option("--H", opt.hiddenness, "Hiddenness")->required();
  region->add_option("--steps", opt.steps, "Grid points in M (>= 2)");
  region->add_option("--t-steps", opt.t_steps, "Interpolation points per M (default: --steps)");
  add_output(region);

  auto* sample = app.add_subcommand("sample", "Simulate a finite-statistics CHSH experiment");
  sample->add_option("model", opt.input, "Model file")->required();
  sample->add_option("--trials", opt.trials, "Trials per context")->required();
  sample->add_option("--seed", opt.seed, "64-bit seed")->required();
  add_output(sample);

  auto* oracle = app.add_subcommand("oracle", "Cross-check C_opt against the brute-force oracle");
  oracle->add_option("model", opt.input, "Model file");
  oracle->add_option("--random", opt.random_count, "Number of random distributions");
  oracle->add_option("--n", opt.random_n, "Hidden variables per random distribution");
  oracle->add_option("--seed", opt.seed, "64-bit seed");
  oracle->add_option("--tolerance", opt.tolerance, "Agreement tolerance");

  std::string name = "?";
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cout << "RESULT " << name << " error usage\n";
    return code == 0 ? kExitOk : kExitInputError;
  }
  name = app.get_subcommands().front()->get_name();

  try {
    if (name == "validate") return run_validate(opt);
    if (name == "compute") return run_compute(opt);
    if (name == "verify") return run_verify(opt);
    if (name == "tight") return run_tight(opt);
    if (name == "sweep") return run_sweep(opt);
    if (name == "region") return run_region(opt);
    if (name == "sample") return run_sample(opt);
    if (name == "oracle") return run_oracle(opt);
  } catch (const CliError& e) {
    const bool infeasible = e.status == BELLMD_ERR_INFEASIBLE;
    std::cerr << (infeasible ? "infeasible: " : "error: ") << bellmd_status_string(e.status) << ": "
              << e.message << "\n";
    std::cout << "RESULT " << name << " error " << bellmd_status_string(e.status) << "\n";
    return infeasible ? kExitInfeasible : kExitInputError;
  }
  return kExitInputError;
}

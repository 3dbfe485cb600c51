// Command-line front end for the spectrum-sharing game solvers.
//
//   sgame solve <mode> --config FILE [--set key=value]... [--seed N] [--samples N]
//               [--verify] [--strict] --out PATH --format csv|json
//   sgame reproduce <target> --out PATH [--format csv|json] [--seed N] [--samples N]
//
// Exit codes: 0 success, 2 config error, 3 solver precondition failure,
// 4 verification failure under --verify --strict.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgame/experiment.hpp"
#include "sgame/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitVerify = 4;

struct Options {
  std::string mode;
  std::string target;
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> workers;
  bool verify = false;
  bool strict = false;
  std::string out;
  std::string format;
};

sgame::OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return sgame::OutputFormat::csv;
  if (name == "json") return sgame::OutputFormat::json;
  throw sgame::ConfigError("--format: expected csv or json");
}

int run_solve(const Options& opt) {
  nlohmann::json doc = sgame::load_config_file(opt.config_path);
  for (const std::string& assignment : opt.overrides) {
    sgame::apply_override(doc, assignment);
  }
  if (!opt.mode.empty()) doc["mode"] = opt.mode;
  if (opt.seed) doc["mc"]["seed"] = *opt.seed;
  if (opt.samples) doc["mc"]["n_samples"] = *opt.samples;
  if (!opt.out.empty()) doc["output"]["path"] = opt.out;
  if (!opt.format.empty()) doc["output"]["format"] = opt.format;
  if (opt.verify) doc["verify"] = true;
  if (opt.workers) doc["workers"] = *opt.workers;

  sgame::ExperimentConfig cfg = sgame::parse_config(doc);
  if (cfg.out_path.empty()) {
    throw sgame::ConfigError("output.path: required (or pass --out)");
  }
  const sgame::RunArtifact art = sgame::run(cfg);
  sgame::write_artifact(art, cfg.format, cfg.out_path);
  if (cfg.verify && art.verify_failures > 0) {
    std::fprintf(stderr, "sgame: %zu row(s) failed verification\n", art.verify_failures);
    if (opt.strict) return kExitVerify;
  }
  return 0;
}

int run_reproduce(const Options& opt) {
  sgame::ReproduceOptions ro;
  ro.n_samples = opt.samples;
  ro.seed = opt.seed.value_or(1);
  ro.workers = opt.workers.value_or(sgame::default_workers());
  if (ro.n_samples && *ro.n_samples < 1) {
    throw sgame::ConfigError("--samples: must be >= 1");
  }
  const sgame::OutputFormat format = parse_format(opt.format.empty() ? "csv" : opt.format);
  const sgame::RunArtifact art = sgame::reproduce(opt.target, ro);
  sgame::write_artifact(art, format, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-sharing game solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sgame::version_string());
  Options opt;

  CLI::App* solve = app.add_subcommand("solve", "Solve one configured game or sweep");
  solve->add_option("mode", opt.mode, "nash, sep, ses, bayes, multi or reproduce")
      ->check(CLI::IsMember({"nash", "sep", "ses", "bayes", "multi", "reproduce"}));
  solve->add_option("--config", opt.config_path, "JSON config file")->required();
  solve->add_option("--set", opt.overrides, "Override a config field (dotted.key=value)");
  solve->add_option("--seed", opt.seed, "Monte Carlo seed");
  solve->add_option("--samples", opt.samples, "Monte Carlo sample count");
  solve->add_option("--workers", opt.workers, "Worker threads (default from SGAME_WORKERS)");
  solve->add_flag("--verify", opt.verify, "Attach oracle verdicts to result rows");
  solve->add_flag("--strict", opt.strict, "Exit 4 when any verdict fails");
  solve->add_option("--out", opt.out, "Output path");
  solve->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* rep = app.add_subcommand("reproduce", "Emit the data behind a named example");
  rep->add_option("target", opt.target, "Target name")->required();
  rep->add_option("--out", opt.out, "Output path")->required();
  rep->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  rep->add_option("--seed", opt.seed, "Monte Carlo seed");
  rep->add_option("--samples", opt.samples, "Monte Carlo sample count");
  rep->add_option("--workers", opt.workers, "Worker threads (default from SGAME_WORKERS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = 0;
  try {
    code = solve->parsed() ? run_solve(opt) : run_reproduce(opt);
  } catch (const sgame::ConfigError& e) {
    std::fprintf(stderr, "sgame: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const sgame::PreconditionError& e) {
    std::fprintf(stderr, "sgame: precondition failed: %s\n", e.what());
    return kExitPrecondition;
  } catch (const sgame::DomainError& e) {
    std::fprintf(stderr, "sgame: precondition failed: %s\n", e.what());
    return kExitPrecondition;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::fprintf(stderr, "sgame: done in %.3f s\n", seconds);
  return code;
}

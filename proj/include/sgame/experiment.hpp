#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sgame/game_core.hpp"
#include "sgame/multi_user.hpp"

namespace sgame {

/// Malformed or incomplete experiment configuration. The message names the
/// offending field or input line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string var;
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 2;

  std::vector<double> values() const;
};

struct McSpec {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
};

enum class OutputFormat { csv, json };

enum class MultiSolver { grant, leader, brute_force };

struct ExperimentConfig {
  std::string mode;  ///< nash, sep, ses, bayes, multi or reproduce
  GameParams params;
  MultiGame multi;
  MultiSolver multi_solver = MultiSolver::grant;
  std::size_t grid_n = 1000;
  std::optional<SweepSpec> sweep;
  McSpec mc;
  std::vector<double> c_values;
  std::vector<double> b_bar_values;
  std::string target;
  bool samples_given = false;  ///< mc.n_samples set explicitly
  OutputFormat format = OutputFormat::csv;
  std::string out_path;
  bool verify = false;
  std::size_t workers = 1;
  nlohmann::json source;  ///< effective config, echoed into JSON output
};

/// Parses JSON text. Syntax errors are reported with their line number.
nlohmann::json parse_config_text(const std::string& text);

nlohmann::json load_config_file(const std::string& path);

/// Applies "dotted.key=value"; the value is read as JSON when it parses,
/// otherwise as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Validates the document against the schema and builds a config.
ExperimentConfig parse_config(const nlohmann::json& config);

using Cell = std::variant<double, long long, std::string>;

struct RunArtifact {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json config;
  std::string version;
  std::size_t verify_failures = 0;
};

/// Dispatches a config to its solver. Rows follow sweep order.
RunArtifact run(const ExperimentConfig& config);

std::vector<std::string> reproduce_targets();

struct ReproduceOptions {
  std::optional<std::size_t> n_samples;  ///< per-target default when empty
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Data behind a named example; unknown targets raise ConfigError.
RunArtifact reproduce(const std::string& target, const ReproduceOptions& options);

std::string format_number(double x);
std::string to_csv(const RunArtifact& artifact);
std::string to_json(const RunArtifact& artifact);

/// Writes the artifact with LF line endings.
void write_artifact(const RunArtifact& artifact, OutputFormat format, const std::string& path);

std::string version_string();

}  // namespace sgame

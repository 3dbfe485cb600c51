#include "sgame/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sgame/bayesian.hpp"
#include "sgame/nash.hpp"
#include "sgame/parallel.hpp"
#include "sgame/rng.hpp"
#include "sgame/stackelberg.hpp"

#ifndef SGAME_VERSION
#define SGAME_VERSION "0.0.0"
#endif

namespace sgame {

using nlohmann::json;

std::string version_string() { return SGAME_VERSION; }

std::vector<double> SweepSpec::values() const {
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = i + 1 == steps ? stop
                            : start + (stop - start) * static_cast<double>(i) /
                                          static_cast<double>(steps - 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config parsing

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("config line " + std::to_string(line) + ": " + e.what());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) {
    value = raw;
  }
  json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) {
      throw ConfigError("--set key '" + key + "' has an empty component");
    }
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError("--set key '" + key + "': '" + part + "' is not inside an object");
      }
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) {
      break;
    }
    start = dot + 1;
  }
  *node = std::move(value);
}

namespace {

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
}

void check_keys(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(node, path.empty() ? "config" : path);
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      throw ConfigError(join_path(path, it.key()) + ": unknown field");
    }
  }
}

double get_number(const json& node, const std::string& path, const char* key,
                  std::optional<double> fallback) {
  const auto it = node.find(key);
  if (it == node.end()) {
    if (!fallback) {
      throw ConfigError(join_path(path, key) + ": required field missing");
    }
    return *fallback;
  }
  if (!it->is_number()) {
    throw ConfigError(join_path(path, key) + ": expected a number");
  }
  return it->get<double>();
}

std::uint64_t get_unsigned(const json& node, const std::string& path, const char* key,
                           std::uint64_t fallback) {
  const auto it = node.find(key);
  if (it == node.end()) {
    return fallback;
  }
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
    throw ConfigError(join_path(path, key) + ": expected a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

std::string get_string(const json& node, const std::string& path, const char* key,
                       std::optional<std::string> fallback) {
  const auto it = node.find(key);
  if (it == node.end()) {
    if (!fallback) {
      throw ConfigError(join_path(path, key) + ": required field missing");
    }
    return *fallback;
  }
  if (!it->is_string()) {
    throw ConfigError(join_path(path, key) + ": expected a string");
  }
  return it->get<std::string>();
}

std::vector<double> get_number_list(const json& node, const std::string& path, const char* key) {
  const auto it = node.find(key);
  if (it == node.end()) {
    return {};
  }
  if (!it->is_array()) {
    throw ConfigError(join_path(path, key) + ": expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number()) {
      throw ConfigError(join_path(path, key) + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back((*it)[i].get<double>());
  }
  return out;
}

const std::vector<std::string> kModes{"nash", "sep", "ses", "bayes", "multi", "reproduce"};
const std::vector<std::string> kPairFields{"a", "b", "c", "gamma_bar", "beta", "p0_max", "p1_max", "epsilon"};
const std::vector<std::string> kMultiFields{"a", "gamma_bar", "p0_max", "epsilon"};

bool contains(const std::vector<std::string>& list, const std::string& x) {
  return std::find(list.begin(), list.end(), x) != list.end();
}

std::string joined(const std::vector<std::string>& list) {
  std::string out;
  for (const auto& s : list) {
    out += (out.empty() ? "" : ", ") + s;
  }
  return out;
}

void set_pair_field(GameParams& p, const std::string& var, double v) {
  if (var == "a") p.a = v;
  else if (var == "b") p.b = v;
  else if (var == "c") p.c = v;
  else if (var == "gamma_bar") p.gamma_bar = v;
  else if (var == "beta") p.beta = v;
  else if (var == "p0_max") p.p0_max = v;
  else if (var == "p1_max") p.p1_max = v;
  else if (var == "epsilon") p.epsilon = v;
  else throw ConfigError("sweep.var: unknown parameter '" + var + "'");
}

void set_multi_field(MultiGame& g, const std::string& var, double v) {
  if (var == "a") g.a = v;
  else if (var == "gamma_bar") g.gamma_bar = v;
  else if (var == "p0_max") g.p0_max = v;
  else if (var == "epsilon") g.epsilon = v;
  else throw ConfigError("sweep.var: unknown parameter '" + var + "'");
}

GameParams parse_pair_params(const json& node, bool needs_b, bool needs_c) {
  check_keys(node, "params", {"a", "b", "c", "gamma_bar", "beta", "p0_max", "p1_max", "epsilon"});
  GameParams p;
  p.a = get_number(node, "params", "a", std::nullopt);
  p.b = get_number(node, "params", "b", needs_b ? std::nullopt : std::optional<double>(1.0));
  p.c = get_number(node, "params", "c", needs_c ? std::nullopt : std::optional<double>(1.0));
  p.gamma_bar = get_number(node, "params", "gamma_bar", std::nullopt);
  p.beta = get_number(node, "params", "beta", std::nullopt);
  p.p0_max = get_number(node, "params", "p0_max", std::nullopt);
  p.p1_max = get_number(node, "params", "p1_max", std::nullopt);
  p.epsilon = get_number(node, "params", "epsilon", 1e-3);
  return p;
}

MultiGame parse_multi(const json& params, const json& multi, MultiSolver& solver, std::size_t& grid_n) {
  check_keys(params, "params", {"a", "gamma_bar", "p0_max", "epsilon"});
  check_keys(multi, "multi", {"sus", "order", "solver", "grid_n"});
  MultiGame g;
  g.a = get_number(params, "params", "a", std::nullopt);
  g.gamma_bar = get_number(params, "params", "gamma_bar", std::nullopt);
  g.p0_max = get_number(params, "params", "p0_max", std::nullopt);
  g.epsilon = get_number(params, "params", "epsilon", 1e-3);

  const auto sus = multi.find("sus");
  if (sus == multi.end() || !sus->is_array()) {
    throw ConfigError("multi.sus: required array of SU profiles");
  }
  for (std::size_t i = 0; i < sus->size(); ++i) {
    const std::string path = "multi.sus[" + std::to_string(i) + "]";
    const json& node = (*sus)[i];
    check_keys(node, path, {"id", "b", "c", "p_max", "beta"});
    SuProfile su;
    su.id = static_cast<int>(get_unsigned(node, path, "id", i + 1));
    su.b = get_number(node, path, "b", std::nullopt);
    su.c = get_number(node, path, "c", std::nullopt);
    su.p_max = get_number(node, path, "p_max", std::nullopt);
    su.beta = get_number(node, path, "beta", std::nullopt);
    g.sus.push_back(su);
  }

  const std::string name = get_string(multi, "multi", "solver", std::string("grant"));
  if (name == "grant") solver = MultiSolver::grant;
  else if (name == "leader") solver = MultiSolver::leader;
  else if (name == "brute_force") solver = MultiSolver::brute_force;
  else throw ConfigError("multi.solver: expected one of grant, leader, brute_force");
  grid_n = get_unsigned(multi, "multi", "grid_n", 1000);
  if (grid_n < 2) {
    throw ConfigError("multi.grid_n: must be >= 2");
  }

  const auto order = multi.find("order");
  if (order != multi.end()) {
    if (!order->is_array()) {
      throw ConfigError("multi.order: expected an array of SU ids");
    }
    for (const json& id : *order) {
      if (!id.is_number_integer()) {
        throw ConfigError("multi.order: expected integer SU ids");
      }
      g.order.priority.push_back(id.get<int>());
    }
  } else if (solver == MultiSolver::grant) {
    // Descending b, stable in listing order.
    std::vector<SuProfile> sorted = g.sus;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SuProfile& x, const SuProfile& y) { return x.b > y.b; });
    for (const SuProfile& su : sorted) g.order.priority.push_back(su.id);
  } else {
    g.order = listing_order(g);
  }
  return g;
}

}  // namespace

ExperimentConfig parse_config(const json& config) {
  check_keys(config, "", {"mode", "params", "sweep", "mc", "bayes", "multi", "target", "output", "verify", "workers"});
  ExperimentConfig cfg;
  // Execution settings never change results, so they stay out of the echo.
  cfg.source = config;
  cfg.source.erase("workers");
  if (cfg.source.contains("output") && cfg.source["output"].is_object()) {
    cfg.source["output"].erase("path");
    if (cfg.source["output"].empty()) cfg.source.erase("output");
  }
  cfg.mode = get_string(config, "", "mode", std::nullopt);
  if (!contains(kModes, cfg.mode)) {
    throw ConfigError("mode: expected one of " + joined(kModes) + ", got '" + cfg.mode + "'");
  }

  const json empty = json::object();
  const auto section = [&](const char* key) -> const json& {
    const auto it = config.find(key);
    return it == config.end() ? empty : *it;
  };

  if (cfg.mode == "reproduce") {
    cfg.target = get_string(config, "", "target", std::nullopt);
  } else {
    if (!config.contains("params")) {
      throw ConfigError("params: required for mode '" + cfg.mode + "'");
    }
    if (cfg.mode == "multi") {
      if (!config.contains("multi")) {
        throw ConfigError("multi: required for mode 'multi'");
      }
      cfg.multi = parse_multi(config["params"], config["multi"], cfg.multi_solver, cfg.grid_n);
    } else {
      const bool bayes = cfg.mode == "bayes";
      const json& bayes_node = section("bayes");
      check_keys(bayes_node, "bayes", {"c_values", "b_bar_values"});
      cfg.c_values = get_number_list(bayes_node, "bayes", "c_values");
      cfg.b_bar_values = get_number_list(bayes_node, "bayes", "b_bar_values");
      cfg.params = parse_pair_params(config["params"], !bayes, !(bayes && !cfg.c_values.empty()));
      if (bayes && cfg.c_values.empty()) {
        cfg.c_values = {cfg.params.c};
      }
    }
  }

  if (config.contains("sweep")) {
    const json& s = config["sweep"];
    check_keys(s, "sweep", {"var", "start", "stop", "steps"});
    SweepSpec sweep;
    sweep.var = get_string(s, "sweep", "var", std::nullopt);
    sweep.start = get_number(s, "sweep", "start", std::nullopt);
    sweep.stop = get_number(s, "sweep", "stop", std::nullopt);
    sweep.steps = get_unsigned(s, "sweep", "steps", 0);
    if (sweep.steps < 2) {
      throw ConfigError("sweep.steps: must be >= 2");
    }
    std::vector<std::string> allowed = kPairFields;
    if (cfg.mode == "multi") allowed = kMultiFields;
    if (cfg.mode == "bayes") allowed = {"b_bar", "c"};
    if (cfg.mode == "reproduce") {
      throw ConfigError("sweep: not supported for mode 'reproduce'");
    }
    if (!contains(allowed, sweep.var)) {
      throw ConfigError("sweep.var: expected one of " + joined(allowed) + " for mode '" + cfg.mode + "'");
    }
    if (cfg.mode == "bayes") {
      (sweep.var == "c" ? cfg.c_values : cfg.b_bar_values) = sweep.values();
    }
    cfg.sweep = sweep;
  }
  if (cfg.mode == "bayes" && cfg.b_bar_values.empty()) {
    throw ConfigError("bayes.b_bar_values: required (or sweep over b_bar)");
  }

  const json& mc = section("mc");
  check_keys(mc, "mc", {"n_samples", "seed"});
  cfg.samples_given = mc.contains("n_samples");
  cfg.mc.n_samples = get_unsigned(mc, "mc", "n_samples", cfg.mc.n_samples);
  cfg.mc.seed = get_unsigned(mc, "mc", "seed", cfg.mc.seed);
  if (cfg.mc.n_samples < 1) {
    throw ConfigError("mc.n_samples: must be >= 1");
  }

  const json& out = section("output");
  check_keys(out, "output", {"format", "path"});
  const std::string format = get_string(out, "output", "format", std::string("csv"));
  if (format == "csv") cfg.format = OutputFormat::csv;
  else if (format == "json") cfg.format = OutputFormat::json;
  else throw ConfigError("output.format: expected csv or json");
  cfg.out_path = get_string(out, "output", "path", std::string());

  if (config.contains("verify")) {
    if (!config["verify"].is_boolean()) throw ConfigError("verify: expected a boolean");
    cfg.verify = config["verify"].get<bool>();
  }
  cfg.workers = get_unsigned(config, "", "workers", default_workers());
  cfg.workers = std::max<std::size_t>(cfg.workers, 1);
  return cfg;
}

// ---------------------------------------------------------------------------
// Serialization

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return std::isfinite(*d) ? json(*d == 0.0 ? 0.0 : *d) : json(format_number(*d));
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const RunArtifact& artifact) {
  std::string out;
  for (std::size_t i = 0; i < artifact.columns.size(); ++i) {
    out += (i ? "," : "") + csv_field(artifact.columns[i]);
  }
  out += '\n';
  for (const auto& row : artifact.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + csv_field(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const RunArtifact& artifact) {
  json doc;
  doc["tool"] = "sgame";
  doc["version"] = artifact.version;
  doc["title"] = artifact.title;
  doc["config"] = artifact.config;
  doc["columns"] = artifact.columns;
  json rows = json::array();
  for (const auto& row : artifact.rows) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["verify_failures"] = artifact.verify_failures;
  return doc.dump(2) + "\n";
}

void write_artifact(const RunArtifact& artifact, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot open output file '" + path + "'");
  }
  out << (format == OutputFormat::csv ? to_csv(artifact) : to_json(artifact));
  if (!out) {
    throw ConfigError("failed writing output file '" + path + "'");
  }
}

// ---------------------------------------------------------------------------
// Solvers

namespace {

constexpr double kConsistencySlack = 1e-9;

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

std::string to_string(SuSupport s) {
  switch (s) {
    case SuSupport::singleton: return "singleton";
    case SuSupport::interval_to_alpha_tilde: return "interval_to_alpha_tilde";
    case SuSupport::unit_interval: return "unit_interval";
  }
  return "unknown";
}

std::string support_text(const MixedStrategy& s) {
  std::string out;
  for (const auto& [p0, prob] : s.pu_support) {
    out += (out.empty() ? "" : ";") + format_number(p0) + "@" + format_number(prob);
  }
  return out;
}

std::string ids_text(const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) out += (out.empty() ? "" : " ") + std::to_string(id);
  return out;
}

std::string alphas_text(const std::vector<double>& alphas) {
  std::string out;
  for (double a : alphas) out += (out.empty() ? "" : " ") + format_number(a);
  return out;
}

struct RowResult {
  std::vector<Cell> cells;
  bool failed = false;
};

/// Runs `point` over every sweep value (or once) and collects rows in order.
void tabulate(const ExperimentConfig& cfg, RunArtifact& art, std::vector<std::string> columns,
              const std::function<std::vector<RowResult>(std::optional<double>)>& point) {
  if (cfg.sweep) {
    columns.insert(columns.begin(), cfg.sweep->var);
  }
  art.columns = std::move(columns);
  const std::vector<double> values = cfg.sweep ? cfg.sweep->values() : std::vector<double>{};
  const std::size_t n = cfg.sweep ? values.size() : 1;
  std::vector<std::vector<RowResult>> results(n);
  parallel_for(n, cfg.workers, [&](std::size_t i) {
    results[i] = point(cfg.sweep ? std::optional<double>(values[i]) : std::nullopt);
    if (cfg.sweep) {
      for (RowResult& r : results[i]) r.cells.insert(r.cells.begin(), values[i]);
    }
  });
  for (auto& group : results) {
    for (RowResult& r : group) {
      art.verify_failures += r.failed ? 1 : 0;
      art.rows.push_back(std::move(r.cells));
    }
  }
}

GameParams pair_at(const ExperimentConfig& cfg, std::optional<double> v) {
  GameParams p = cfg.params;
  if (v) set_pair_field(p, cfg.sweep->var, *v);
  return p;
}

void run_nash(const ExperimentConfig& cfg, RunArtifact& art) {
  std::vector<std::string> cols{"case", "p0", "alpha", "u0", "u1", "pu_support", "su_support"};
  if (cfg.verify) {
    cols.insert(cols.end(), {"verified", "worst_pu_deviation", "worst_su_deviation", "indifference_gap"});
  }
  tabulate(cfg, art, cols, [&](std::optional<double> v) {
    const GameParams p = pair_at(cfg, v);
    const NashOutcome ne = solve_nash(p);
    const Strategy rep = ne.strategy.representative();
    RowResult r;
    r.cells = {to_string(ne.case_tag), rep.p0, rep.alpha, ne.utilities.u0, ne.utilities.u1,
               support_text(ne.strategy), to_string(ne.strategy.su_support)};
    if (cfg.verify) {
      const VerificationReport rep_v = verify_equilibrium(p, ne);
      const UtilityPair again = expected_utilities(p, ne.strategy);
      const bool ok = rep_v.pass && std::abs(again.u0 - ne.utilities.u0) <= kConsistencySlack &&
                      std::abs(again.u1 - ne.utilities.u1) <= kConsistencySlack;
      r.failed = !ok;
      r.cells.insert(r.cells.end(), {verdict(ok), rep_v.worst_pu_deviation, rep_v.worst_su_deviation,
                                     rep_v.indifference_gap});
    }
    return std::vector<RowResult>{r};
  });
}

void run_sep(const ExperimentConfig& cfg, RunArtifact& art) {
  std::vector<std::string> cols{"p0", "alpha", "u0", "u1", "leader_value", "q", "warning"};
  if (cfg.verify) cols.insert(cols.end(), {"verified", "margin_u0", "margin_u1"});
  tabulate(cfg, art, cols, [&](std::optional<double> v) {
    const GameParams p = pair_at(cfg, v);
    const StackelbergOutcome se = sep_strategy(p);
    RowResult r;
    r.cells = {se.leader_strategy, se.follower_strategy, se.utilities.u0, se.utilities.u1,
               se.leader_value, threshold_q(p), se.warning};
    if (cfg.verify) {
      const DominanceReport d = dominance_check(p, se, solve_nash(p));
      const bool ok = d.dominates &&
                      std::abs(d.se_utilities.u0 - se.utilities.u0) <= kConsistencySlack &&
                      std::abs(d.se_utilities.u1 - se.utilities.u1) <= kConsistencySlack;
      r.failed = !ok;
      r.cells.insert(r.cells.end(), {verdict(ok), d.margin_u0, d.margin_u1});
    }
    return std::vector<RowResult>{r};
  });
}

void run_ses(const ExperimentConfig& cfg, RunArtifact& art) {
  std::vector<std::string> cols{"alpha", "p0", "u0", "u1", "warning"};
  if (cfg.verify) cols.insert(cols.end(), {"verified", "pu_gain_over_ne"});
  tabulate(cfg, art, cols, [&](std::optional<double> v) {
    const GameParams p = pair_at(cfg, v);
    const StackelbergOutcome se = ses_strategy(p);
    RowResult r;
    r.cells = {se.leader_strategy, se.follower_strategy, se.utilities.u0, se.utilities.u1, se.warning};
    if (cfg.verify) {
      const double gain = utilities(p, se.profile()).u0 - solve_nash(p).utilities.u0;
      const bool ok = gain <= kConsistencySlack;
      r.failed = !ok;
      r.cells.insert(r.cells.end(), {verdict(ok), gain});
    }
    return std::vector<RowResult>{r};
  });
}

std::vector<Cell> record_cells(const ComparisonRecord& rec) {
  return {rec.c,
          rec.b_bar,
          rec.avg_u0_revealed,
          rec.avg_u0_hidden,
          rec.avg_u1_revealed,
          rec.avg_u1_hidden,
          rec.se_u0_diff,
          rec.se_u1_diff,
          rec.hidden_leader_power,
          static_cast<long long>(rec.n_samples),
          static_cast<long long>(rec.seed)};
}

const std::vector<std::string> kRecordColumns{
    "c",          "b_bar",      "avg_u0_revealed", "avg_u0_hidden",    "avg_u1_revealed", "avg_u1_hidden",
    "se_u0_diff", "se_u1_diff", "hidden_leader_power", "n_samples", "seed"};

void run_bayes(const ExperimentConfig& cfg, RunArtifact& art) {
  art.columns = kRecordColumns;
  if (cfg.verify) art.columns.push_back("verified");
  const auto records = monte_carlo_compare(cfg.params, cfg.c_values, cfg.b_bar_values,
                                           cfg.mc.n_samples, cfg.mc.seed, cfg.workers);
  for (const ComparisonRecord& rec : records) {
    std::vector<Cell> row = record_cells(rec);
    if (cfg.verify) {
      const bool ok = rec.avg_u0_revealed >= rec.avg_u0_hidden - 3.0 * rec.se_u0_diff;
      art.verify_failures += ok ? 0 : 1;
      row.push_back(verdict(ok));
    }
    art.rows.push_back(std::move(row));
  }
}

std::string dominating_text(const MultiGame& g, int index) {
  return index < 0 ? std::string() : std::to_string(g.sus[static_cast<std::size_t>(index)].id);
}

bool multi_consistent(const MultiGame& g, const MultiOutcome& out) {
  const std::vector<double> alphas = followers_cascade(g, out.p0_sep);
  if (alphas != out.alphas) return false;
  if (std::abs(pu_utility_multi(g, out.p0_sep, alphas).value - out.u0_sep) > kConsistencySlack) {
    return false;
  }
  std::vector<int> granted;
  for (std::size_t i : g.ranked_indices()) {
    if (alphas[i] == 1.0) granted.push_back(g.sus[i].id);
  }
  return granted == out.allowed_sus;
}

void run_multi(const ExperimentConfig& cfg, RunArtifact& art) {
  std::vector<std::string> cols{"solver", "order", "p0", "u0", "allowed", "n_allowed",
                                "alphas", "dominating", "best", "warning"};
  if (cfg.verify) cols.push_back("verified");
  const char* solver_name = cfg.multi_solver == MultiSolver::grant    ? "grant"
                            : cfg.multi_solver == MultiSolver::leader ? "leader"
                                                                      : "brute_force";
  tabulate(cfg, art, cols, [&](std::optional<double> v) {
    MultiGame g = cfg.multi;
    if (v) set_multi_field(g, cfg.sweep->var, *v);
    std::vector<std::pair<OrderResult, bool>> results;
    if (cfg.multi_solver == MultiSolver::brute_force) {
      const BruteForceResult bf = brute_force_order(g, cfg.grid_n);
      for (const OrderResult& r : bf.all) {
        results.emplace_back(r, r.order.priority == bf.best.order.priority);
      }
    } else {
      const MultiOutcome out = cfg.multi_solver == MultiSolver::grant ? grant_algorithm(g)
                                                                      : leader_best_power(g, cfg.grid_n);
      results.emplace_back(OrderResult{g.order, out}, true);
    }
    std::vector<RowResult> rows;
    for (const auto& [r, best] : results) {
      MultiGame ordered = g;
      ordered.order = r.order;
      RowResult row;
      row.cells = {std::string(solver_name),
                   ids_text(r.order.priority),
                   r.outcome.p0_sep,
                   r.outcome.u0_sep,
                   ids_text(r.outcome.allowed_sus),
                   static_cast<long long>(r.outcome.allowed_sus.size()),
                   alphas_text(r.outcome.alphas),
                   dominating_text(ordered, r.outcome.dominating),
                   static_cast<long long>(best ? 1 : 0),
                   r.outcome.warning};
      if (cfg.verify) {
        const bool ok = multi_consistent(ordered, r.outcome);
        row.failed = !ok;
        row.cells.push_back(verdict(ok));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

}  // namespace

RunArtifact run(const ExperimentConfig& cfg) {
  RunArtifact art;
  art.version = version_string();
  art.config = cfg.source;
  if (cfg.mode == "reproduce") {
    ReproduceOptions opt;
    if (cfg.samples_given) opt.n_samples = cfg.mc.n_samples;
    opt.seed = cfg.mc.seed;
    opt.workers = cfg.workers;
    RunArtifact rep = reproduce(cfg.target, opt);
    rep.config = cfg.source;
    return rep;
  }
  art.title = cfg.mode;
  if (cfg.mode == "nash") run_nash(cfg, art);
  else if (cfg.mode == "sep") run_sep(cfg, art);
  else if (cfg.mode == "ses") run_ses(cfg, art);
  else if (cfg.mode == "bayes") run_bayes(cfg, art);
  else if (cfg.mode == "multi") run_multi(cfg, art);
  else throw ConfigError("mode: unknown mode '" + cfg.mode + "'");
  return art;
}

// ---------------------------------------------------------------------------
// Reproduce targets

namespace {

GameParams example_params(double c) {
  GameParams p;
  p.a = 2.5;
  p.b = 1.0;
  p.c = c;
  p.beta = 1.0;
  p.gamma_bar = 1.0;
  p.p0_max = 1.0;
  p.p1_max = 1.0;
  return p;
}

RunArtifact example_sec3() {
  RunArtifact art;
  art.columns = {"c", "case", "q", "alpha_q", "p0_ne", "alpha_ne", "u0_ne", "u1_ne", "u0_q_alpha_q", "u0_q_full"};
  for (double c : {3.5, 5.0}) {
    const GameParams p = example_params(c);
    const NashOutcome ne = solve_nash(p);
    const Strategy s = ne.strategy.representative();
    const double q = threshold_q(p);
    const double aq = alpha_q_raw(p);
    art.rows.push_back({c, to_string(ne.case_tag), q, aq, s.p0, s.alpha, ne.utilities.u0,
                        ne.utilities.u1, pu_utility(p, q, std::clamp(aq, 0.0, 1.0)),
                        pu_utility(p, q, 1.0)});
  }
  return art;
}

RunArtifact reaction_curves() {
  GameParams p;
  p.a = 3.0;
  p.b = 0.7;
  p.beta = 1.0;
  p.gamma_bar = 1.0;
  p.p0_max = 10.0;
  p.p1_max = 10.0;
  const BeliefModel belief{0.7};
  RunArtifact art;
  art.columns = {"alpha", "p_b", "p_star"};
  for (int i = 0; i <= 100; ++i) {
    const double alpha = i / 100.0;
    art.rows.push_back({alpha, p_b(p, belief, alpha), p_star(p, alpha)});
  }
  return art;
}

RunArtifact hidden_b(const ReproduceOptions& opt) {
  GameParams p;
  p.a = 3.0;
  p.beta = 1.0;
  p.gamma_bar = 1.0;
  p.p0_max = 5.0;
  p.p1_max = 5.0;
  p.epsilon = 1e-2;
  const std::vector<double> cs{0.6, 0.7, 1.3};
  std::vector<double> bbs;
  for (int i = 0; i < 20; ++i) bbs.push_back(0.1 + 0.2 * i);
  RunArtifact art;
  art.columns = kRecordColumns;
  for (const ComparisonRecord& rec :
       monte_carlo_compare(p, cs, bbs, opt.n_samples.value_or(10000), opt.seed, opt.workers)) {
    art.rows.push_back(record_cells(rec));
  }
  return art;
}

struct GammaReading {
  std::string label;
  double gamma_bar;
};

const std::vector<GammaReading> kGammaReadings{{"gamma_bar=0.5", 0.5},
                                               {"gamma=0.5", 0.5 * std::log(4.0)}};

RunArtifact two_su_orders(const std::vector<SuProfile>& sus) {
  RunArtifact art;
  art.columns = {"reading", "gamma_bar", "order", "p0", "u0", "allowed", "alphas", "optimal"};
  for (const GammaReading& reading : kGammaReadings) {
    MultiGame g;
    g.a = 3.0;
    g.gamma_bar = reading.gamma_bar;
    g.p0_max = 10.0;
    g.sus = sus;
    g.order = listing_order(g);
    const BruteForceResult bf = brute_force_order(g, 2000);
    for (const OrderResult& r : bf.all) {
      const bool optimal = r.outcome.u0_sep >= bf.best.outcome.u0_sep - 1e-12;
      art.rows.push_back({reading.label, reading.gamma_bar, ids_text(r.order.priority),
                          r.outcome.p0_sep, r.outcome.u0_sep, ids_text(r.outcome.allowed_sus),
                          alphas_text(r.outcome.alphas), static_cast<long long>(optimal ? 1 : 0)});
    }
  }
  return art;
}

/// Averages over random eavesdropper draws for N = 1..20: no SU granted,
/// only the strongest eavesdropper granted, and the grant algorithm.
RunArtifact grant_campaign(const ReproduceOptions& opt, bool random_c) {
  constexpr std::size_t kMaxSus = 20;
  const std::vector<double> betas{0.1, 0.2};
  const std::size_t samples = opt.n_samples.value_or(10000);
  const std::size_t points = betas.size() * kMaxSus;
  std::vector<std::vector<Cell>> rows(points);
  const CounterRng b_rng(opt.seed, 0);
  const CounterRng c_rng(opt.seed, 1);

  parallel_for(points, opt.workers, [&](std::size_t idx) {
    const double beta = betas[idx / kMaxSus];
    const std::size_t n = idx % kMaxSus + 1;
    double sum_none = 0.0, sum_one = 0.0, sum_alg = 0.0, sum_allowed = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      MultiGame g;
      g.a = 2.0;
      g.gamma_bar = 0.2;
      g.p0_max = 4.5;
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t k = s * kMaxSus + i;
        const double c = random_c ? c_rng.rayleigh(k, 0.5) : 0.5;
        g.sus.push_back({static_cast<int>(i + 1), b_rng.exponential(k, 1.0), c, 4.5, beta});
      }
      std::stable_sort(g.sus.begin(), g.sus.end(),
                       [](const SuProfile& x, const SuProfile& y) { return x.b > y.b; });
      g.order = listing_order(g);

      const GameParams strongest = g.pair_params(0);
      sum_none += pu_utility(strongest, p_star(strongest, 0.0), 0.0);
      std::vector<bool> only_first(n, false);
      only_first[0] = true;
      sum_one += leader_best_power(g, 2, &only_first).u0_sep;
      const MultiOutcome alg = grant_algorithm(g);
      sum_alg += alg.u0_sep;
      sum_allowed += static_cast<double>(alg.allowed_sus.size());
    }
    const double m = static_cast<double>(samples);
    rows[idx] = {beta, static_cast<long long>(n), sum_none / m, sum_one / m, sum_alg / m,
                 sum_allowed / m, static_cast<long long>(samples), static_cast<long long>(opt.seed)};
  });

  RunArtifact art;
  art.columns = {"beta", "n_sus", "avg_u0_none", "avg_u0_one", "avg_u0_algorithm",
                 "avg_allowed", "n_samples", "seed"};
  art.rows = std::move(rows);
  return art;
}

}  // namespace

std::vector<std::string> reproduce_targets() {
  return {"example-sec3",    "fig-reaction-curves", "fig-hidden-b",  "fig-order-example",
          "fig-order-proof", "fig-uniform",         "fig-nonuniform"};
}

RunArtifact reproduce(const std::string& target, const ReproduceOptions& opt) {
  RunArtifact art;
  if (target == "example-sec3") {
    art = example_sec3();
  } else if (target == "fig-reaction-curves") {
    art = reaction_curves();
  } else if (target == "fig-hidden-b") {
    art = hidden_b(opt);
  } else if (target == "fig-order-example") {
    art = two_su_orders({{1, 0.7, 0.6, 1.5, 0.1}, {2, 0.4, 0.35, 1.5, 0.25}});
  } else if (target == "fig-order-proof") {
    art = two_su_orders({{1, 0.7, 0.575, 1.5, 0.25}, {2, 0.4, 0.575, 1.5, 0.25}});
  } else if (target == "fig-uniform") {
    art = grant_campaign(opt, false);
  } else if (target == "fig-nonuniform") {
    art = grant_campaign(opt, true);
  } else {
    throw ConfigError("unknown reproduce target '" + target + "'; known targets: " +
                      joined(reproduce_targets()));
  }
  art.title = target;
  art.version = version_string();
  art.config = {{"mode", "reproduce"}, {"target", target}, {"seed", opt.seed}};
  if (opt.n_samples) art.config["n_samples"] = *opt.n_samples;
  return art;
}

}  // namespace sgame

// Implementation notes:
// - Config files parse into (section, key, JSON value) triples; every key
//   must be consumed by the loader, so typos and unknown sections fail
//   loudly with the file, line and key named.
// - execute_runs precomputes the per-horizon oracle values serially (that
//   is the LP-heavy part and it is shared by all seeds), then fans the
//   (horizon, seed) jobs out to a worker pool.  Each worker deposits its
//   result into a fixed slot, so output bytes never depend on scheduling.

#include "planpace/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "planpace/minimizers.hpp"

namespace planpace {
namespace {

using nlohmann::json;

namespace fs = std::filesystem;

[[noreturn]] void config_fail(const std::string& message) {
  throw Error(ErrorCode::ConfigError, message);
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

// Removes a trailing '#' comment, ignoring '#' inside quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (ch == '"') {
      in_string = !in_string;
    } else if (ch == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_name(const std::string& name, bool allow_dot) {
  if (name.empty()) return false;
  for (char ch : name) {
    bool ok = std::isalnum(static_cast<unsigned char>(ch)) != 0 ||
              ch == '_' || (allow_dot && ch == '.');
    if (!ok) return false;
  }
  return true;
}

struct ConfigValue {
  json value;
  std::size_t line = 0;
};

struct ConfigDoc {
  std::string path;
  std::map<std::string, std::map<std::string, ConfigValue>> sections;
  std::map<std::string, std::size_t> section_lines;
  // Consumption tracking so unknown keys/sections can be reported.
  mutable std::set<std::string> used_sections;
  mutable std::set<std::string> used_keys;  // "section\nkey"
};

ConfigDoc parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail(path + ": cannot open config file");
  ConfigDoc doc;
  doc.path = path;
  std::string raw;
  std::string current;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    std::string where = path + " line " + std::to_string(lineno);
    if (text.front() == '[') {
      if (text.back() != ']') config_fail(where + ": unterminated [section]");
      std::string name = trim(text.substr(1, text.size() - 2));
      if (!valid_name(name, /*allow_dot=*/true)) {
        config_fail(where + ": invalid section name '" + name + "'");
      }
      if (doc.sections.count(name)) {
        config_fail(where + ": duplicate section [" + name + "]");
      }
      doc.sections[name];
      doc.section_lines[name] = lineno;
      current = name;
      continue;
    }
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      config_fail(where + ": expected 'key = value' or '[section]'");
    }
    if (current.empty()) {
      config_fail(where + ": key outside any [section]");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value_text = trim(text.substr(eq + 1));
    if (!valid_name(key, /*allow_dot=*/false)) {
      config_fail(where + ": invalid key '" + key + "'");
    }
    if (value_text.empty()) config_fail(where + ": empty value for '" + key + "'");
    json value;
    try {
      value = json::parse(value_text);
    } catch (const json::exception&) {
      value = json(value_text);  // bare word -> string
    }
    auto& section = doc.sections[current];
    if (section.count(key)) {
      config_fail(where + ": duplicate key '" + key + "' in [" + current + "]");
    }
    section[key] = ConfigValue{std::move(value), lineno};
  }
  return doc;
}

// Typed access into one section, with config_fail messages naming the file,
// line and key.  Lookups mark keys as consumed.
class Section {
 public:
  Section(const ConfigDoc& doc, std::string name, bool required)
      : doc_(doc), name_(std::move(name)) {
    auto it = doc.sections.find(name_);
    if (it != doc.sections.end()) {
      kv_ = &it->second;
      doc.used_sections.insert(name_);
    } else if (required) {
      config_fail(doc.path + ": missing required section [" + name_ + "]");
    }
  }

  bool exists() const { return kv_ != nullptr; }
  const std::string& name() const { return name_; }

  const ConfigValue* find(const std::string& key) const {
    if (!kv_) return nullptr;
    auto it = kv_->find(key);
    if (it == kv_->end()) return nullptr;
    doc_.used_keys.insert(name_ + "\n" + key);
    return &it->second;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  [[noreturn]] void fail(const std::string& key, const std::string& message,
                         const ConfigValue* v = nullptr) const {
    std::ostringstream out;
    out << doc_.path;
    if (v) out << " line " << v->line;
    out << ": [" << name_ << "] " << key << ": " << message;
    config_fail(out.str());
  }

  const ConfigValue& require(const std::string& key) const {
    const ConfigValue* v = find(key);
    if (!v) fail(key, "missing required key");
    return *v;
  }

  double number_req(const std::string& key) const {
    const ConfigValue& v = require(key);
    if (!v.value.is_number()) fail(key, "expected a number", &v);
    return v.value.get<double>();
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number_req(key) : fallback;
  }

  std::int64_t integer_req(const std::string& key) const {
    const ConfigValue& v = require(key);
    if (!v.value.is_number_integer() && !v.value.is_number_unsigned()) {
      fail(key, "expected an integer", &v);
    }
    return v.value.get<std::int64_t>();
  }

  std::size_t size_req(const std::string& key) const {
    std::int64_t raw = integer_req(key);
    if (raw < 0) fail(key, "expected a nonnegative integer");
    return static_cast<std::size_t>(raw);
  }

  std::size_t size(const std::string& key, std::size_t fallback) const {
    return has(key) ? size_req(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const ConfigValue* v = find(key);
    if (!v) return fallback;
    if (!v->value.is_boolean()) fail(key, "expected true or false", v);
    return v->value.get<bool>();
  }

  std::string str_req(const std::string& key) const {
    const ConfigValue& v = require(key);
    if (!v.value.is_string()) fail(key, "expected a string", &v);
    return v.value.get<std::string>();
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str_req(key) : fallback;
  }

  std::vector<double> number_array_req(const std::string& key) const {
    const ConfigValue& v = require(key);
    if (!v.value.is_array()) fail(key, "expected an array of numbers", &v);
    std::vector<double> out;
    out.reserve(v.value.size());
    for (const json& item : v.value) {
      if (!item.is_number()) fail(key, "expected an array of numbers", &v);
      out.push_back(item.get<double>());
    }
    return out;
  }

  std::vector<std::uint64_t> uint_array_req(const std::string& key) const {
    const ConfigValue& v = require(key);
    if (!v.value.is_array()) fail(key, "expected an array of integers", &v);
    std::vector<std::uint64_t> out;
    out.reserve(v.value.size());
    for (const json& item : v.value) {
      if (item.is_number_unsigned()) {
        out.push_back(item.get<std::uint64_t>());
      } else if (item.is_number_integer() && item.get<std::int64_t>() >= 0) {
        out.push_back(static_cast<std::uint64_t>(item.get<std::int64_t>()));
      } else {
        fail(key, "expected an array of nonnegative integers", &v);
      }
    }
    return out;
  }

 private:
  const ConfigDoc& doc_;
  std::string name_;
  const std::map<std::string, ConfigValue>* kv_ = nullptr;
};

void check_unconsumed(const ConfigDoc& doc) {
  for (const auto& [section, kv] : doc.sections) {
    std::size_t line = doc.section_lines.at(section);
    if (!doc.used_sections.count(section)) {
      config_fail(doc.path + " line " + std::to_string(line) +
                  ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : kv) {
      if (!doc.used_keys.count(section + "\n" + key)) {
        config_fail(doc.path + " line " + std::to_string(value.line) + ": [" +
                    section + "] unknown key '" + key + "'");
      }
    }
  }
}

// --- enum token parsing -----------------------------------------------------

std::string lowercase(std::string text) {
  for (char& ch : text) ch = static_cast<char>(std::tolower(
      static_cast<unsigned char>(ch)));
  return text;
}

PlanKind parse_plan_kind(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "uniform") return PlanKind::Uniform;
  if (t == "frontloaded") return PlanKind::Frontloaded;
  if (t == "backloaded") return PlanKind::Backloaded;
  if (t == "spiky") return PlanKind::Spiky;
  if (t == "custom") return PlanKind::CustomMatrix;
  sec.fail("kind", "unknown plan kind '" + text +
                       "' (uniform|frontloaded|backloaded|spiky|custom)");
}

EnvKind parse_env_kind(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "stationary") return EnvKind::Stationary;
  if (t == "piecewise") return EnvKind::Piecewise;
  if (t == "drifting") return EnvKind::Drifting;
  if (t == "deterministic" || t == "deterministic_adversarial") {
    return EnvKind::DeterministicAdversarial;
  }
  sec.fail("kind", "unknown environment kind '" + text +
                       "' (stationary|piecewise|drifting|deterministic)");
}

NoiseModel parse_noise(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "bernoulli") return NoiseModel::Bernoulli;
  if (t == "uniform" || t == "uniform_interval") {
    return NoiseModel::UniformInterval;
  }
  sec.fail("noise", "unknown noise model '" + text + "' (bernoulli|uniform)");
}

Setting parse_setting(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "ora") return Setting::Ora;
  if (t == "olrc_full" || t == "full") return Setting::OlrcFull;
  if (t == "olrc_bandit" || t == "bandit") return Setting::OlrcBandit;
  sec.fail("setting", "unknown setting '" + text +
                          "' (ORA|OLRC_full|OLRC_bandit)");
}

DualKind parse_dual(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "euclidean") return DualKind::Euclidean;
  if (t == "entropic") return DualKind::Entropic;
  sec.fail("dual", "unknown dual minimizer '" + text +
                       "' (euclidean|entropic)");
}

PrimalKind parse_primal(const Section& sec, const std::string& text) {
  std::string t = lowercase(text);
  if (t == "none") return PrimalKind::None;
  if (t == "hedge") return PrimalKind::Hedge;
  if (t == "exp3ix") return PrimalKind::Exp3Ix;
  sec.fail("primal", "unknown primal minimizer '" + text +
                         "' (none|hedge|exp3ix)");
}

// --- plan matrix CSV --------------------------------------------------------

std::optional<double> parse_double_text(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<std::vector<double>> load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail(path + ": cannot open plan matrix CSV");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(text);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::optional<double> value = parse_double_text(trim(cell));
      if (!value) {
        config_fail(path + " line " + std::to_string(lineno) +
                    ": '" + trim(cell) + "' is not a number");
      }
      row.push_back(*value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      config_fail(path + " line " + std::to_string(lineno) +
                  ": ragged row (expected " +
                  std::to_string(rows.front().size()) + " cells)");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) config_fail(path + ": plan matrix CSV is empty");
  return rows;
}

// --- environment phases -----------------------------------------------------

MeanPhase parse_phase(const Section& sec, std::size_t num_arms,
                      std::size_t num_resources) {
  MeanPhase phase;
  phase.reward_means = sec.number_array_req("rewards");
  if (phase.reward_means.size() != num_arms) {
    sec.fail("rewards", "expected " + std::to_string(num_arms) +
                            " entries (one per arm, arm 0 is the void arm)");
  }
  const ConfigValue& costs = sec.require("costs");
  bool nested = costs.value.is_array() && !costs.value.empty() &&
                costs.value.front().is_array();
  if (nested) {
    if (costs.value.size() != num_arms) {
      sec.fail("costs", "expected " + std::to_string(num_arms) + " rows",
               &costs);
    }
    for (const json& row : costs.value) {
      if (!row.is_array() || row.size() != num_resources) {
        sec.fail("costs", "each row needs " + std::to_string(num_resources) +
                              " entries (one per resource)",
                 &costs);
      }
      std::vector<double> parsed;
      for (const json& item : row) {
        if (!item.is_number()) sec.fail("costs", "expected numbers", &costs);
        parsed.push_back(item.get<double>());
      }
      phase.cost_means.push_back(std::move(parsed));
    }
  } else if (num_resources == 1) {
    // Flat K-vector shortcut for single-resource instances.
    std::vector<double> flat = sec.number_array_req("costs");
    if (flat.size() != num_arms) {
      sec.fail("costs", "expected " + std::to_string(num_arms) + " entries",
               &costs);
    }
    for (double value : flat) phase.cost_means.push_back({value});
  } else {
    sec.fail("costs", "expected " + std::to_string(num_arms) + " rows of " +
                          std::to_string(num_resources) + " costs",
             &costs);
  }
  return phase;
}

EnvTemplate parse_environment(const ConfigDoc& doc, std::size_t num_arms,
                              std::size_t num_resources) {
  Section env(doc, "environment", /*required=*/true);
  EnvTemplate tmpl;
  tmpl.kind = parse_env_kind(env, env.str_req("kind"));
  tmpl.noise = parse_noise(env, env.str("noise", "bernoulli"));
  tmpl.uniform_halfwidth = env.number("halfwidth", 0.1);
  if (tmpl.uniform_halfwidth < 0.0) {
    env.fail("halfwidth", "must be nonnegative");
  }
  tmpl.shared_noise = env.boolean("shared_noise", false);
  if (env.has("seed")) {
    std::int64_t raw = env.integer_req("seed");
    if (raw < 0) env.fail("seed", "must be nonnegative");
    tmpl.seed = static_cast<std::uint64_t>(raw);
  }

  bool has_abs = env.has("boundaries");
  bool has_frac = env.has("boundaries_frac");
  if (has_abs && has_frac) {
    env.fail("boundaries", "give boundaries or boundaries_frac, not both");
  }
  if (has_abs) {
    std::vector<std::uint64_t> raw = env.uint_array_req("boundaries");
    tmpl.boundaries_abs.assign(raw.begin(), raw.end());
  }
  if (has_frac) {
    tmpl.boundaries_frac = env.number_array_req("boundaries_frac");
    double prev = 0.0;
    for (double frac : tmpl.boundaries_frac) {
      if (!(frac > prev) || frac > 1.0) {
        env.fail("boundaries_frac",
                 "fractions must be strictly increasing in (0, 1]");
      }
      prev = frac;
    }
    if (tmpl.boundaries_frac.empty() ||
        std::abs(tmpl.boundaries_frac.back() - 1.0) > 1e-12) {
      env.fail("boundaries_frac", "last fraction must be 1.0");
    }
  }

  bool inline_phase = env.has("rewards") || env.has("costs");
  if (inline_phase) {
    tmpl.phases.push_back(parse_phase(env, num_arms, num_resources));
  }
  for (std::size_t p = 0;; ++p) {
    Section phase(doc, "environment.phase" + std::to_string(p),
                  /*required=*/false);
    if (!phase.exists()) break;
    if (inline_phase) {
      phase.fail("rewards",
                 "give inline [environment] rewards/costs or phase "
                 "sections, not both");
    }
    tmpl.phases.push_back(parse_phase(phase, num_arms, num_resources));
  }
  if (tmpl.phases.empty()) {
    env.fail("rewards",
             "environment needs inline rewards/costs or [environment.phase0]");
  }

  std::size_t phases = tmpl.phases.size();
  bool has_bounds = has_abs || has_frac;
  switch (tmpl.kind) {
    case EnvKind::Stationary:
      if (phases != 1) env.fail("kind", "stationary needs exactly one phase");
      if (has_bounds) env.fail("boundaries", "stationary takes no boundaries");
      break;
    case EnvKind::Drifting:
      if (phases != 2) {
        env.fail("kind", "drifting interpolates exactly two phases");
      }
      if (has_bounds) env.fail("boundaries", "drifting takes no boundaries");
      break;
    case EnvKind::Piecewise:
      if (!has_bounds) {
        env.fail("boundaries", "piecewise needs one boundary per phase");
      }
      break;
    case EnvKind::DeterministicAdversarial:
      if (phases > 1 && !has_bounds) {
        env.fail("boundaries",
                 "multi-phase deterministic needs one boundary per phase");
      }
      break;
  }
  if (has_bounds) {
    std::size_t count =
        has_abs ? tmpl.boundaries_abs.size() : tmpl.boundaries_frac.size();
    if (count != phases) {
      env.fail("boundaries", "need exactly one boundary per phase (" +
                                 std::to_string(phases) + " phases)");
    }
  }
  return tmpl;
}

// --- summary CSV parsing helpers --------------------------------------------

std::optional<std::uint64_t> parse_u64_text(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size()) return std::nullopt;
  return static_cast<std::uint64_t>(value);
}

std::optional<Setting> parse_setting_token(const std::string& text) {
  if (text == "ORA") return Setting::Ora;
  if (text == "OLRC_full") return Setting::OlrcFull;
  if (text == "OLRC_bandit") return Setting::OlrcBandit;
  return std::nullopt;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// --- run execution ----------------------------------------------------------

bool auto_meta_rule(const Instance& inst) {
  return inst.plan.rho_min() <=
         inst.rho() / std::pow(static_cast<double>(inst.horizon), 0.25);
}

std::string algorithm_label(const AlgorithmSpec& spec) {
  std::string label;
  switch (spec.setting) {
    case Setting::Ora: label = "dual"; break;
    case Setting::OlrcFull: label = "primal_dual_full"; break;
    case Setting::OlrcBandit: label = "primal_dual_bandit"; break;
  }
  if (spec.dual_kind == DualKind::Entropic) label += "_entropic";
  if (spec.void_skip) label += "+voidskip";
  return label;
}

struct HorizonContext {
  std::size_t horizon = 0;
  Instance inst;
  Environment env;
  OracleReport oracle;
  AlgorithmSpec spec;
  std::string algorithm_name;

  HorizonContext(Instance instance, Environment environment)
      : inst(std::move(instance)), env(std::move(environment)) {}
};

double bound_for(const HorizonContext& ctx, const RunResult& result) {
  const Instance& inst = ctx.inst;
  std::size_t horizon = inst.horizon;
  double radius = 1.0 / result.rho_min_used;
  double dual_regret =
      ctx.spec.dual_kind == DualKind::Euclidean
          ? ogd_unit_regret(inst.num_resources, radius, horizon)
          : entropic_dual_unit_regret(inst.num_resources, horizon);
  double primal_regret = 0.0;
  if (ctx.spec.setting == Setting::OlrcFull) {
    primal_regret = hedge_unit_regret(inst.num_arms, horizon);
  } else if (ctx.spec.setting == Setting::OlrcBandit) {
    primal_regret = exp3ix_unit_regret(inst.num_arms, horizon,
                                       ctx.spec.delta_P);
  }
  return regret_bound(ctx.spec.setting, result.meta_applied, horizon,
                      inst.rho(), result.rho_min_used, dual_regret,
                      primal_regret, ctx.spec.delta, ctx.spec.delta_P);
}

const char* const kRunMetaHeader =
    "T,seed,algorithm,setting,dual,primal,delta,delta_P,meta_applied,"
    "void_skip,void_skipped_rounds,clamp_events,rho_min_used,dual_rate,"
    "primal_rate,tau";

std::string rate_descriptor_dual(const AlgorithmSpec& spec, double radius,
                                 std::size_t num_resources,
                                 std::size_t horizon) {
  std::ostringstream out;
  if (spec.dual_kind == DualKind::Euclidean) {
    double grad_bound = std::sqrt(static_cast<double>(num_resources)) *
                        std::max(1.0, 2.0 * radius);
    out << "ogd;eta_t=D/(G*sqrt(t));D=" << format_double(radius)
        << ";G=" << format_double(grad_bound);
  } else {
    double eta = std::sqrt(8.0 * std::log(static_cast<double>(
                               num_resources + 1)) /
                           static_cast<double>(horizon));
    out << "entropic;eta=" << format_double(eta);
  }
  return out.str();
}

std::string rate_descriptor_primal(const AlgorithmSpec& spec,
                                   std::size_t num_arms,
                                   std::size_t horizon) {
  std::ostringstream out;
  double ln_k = std::log(static_cast<double>(std::max<std::size_t>(
      num_arms, 2)));
  if (spec.setting == Setting::OlrcFull) {
    double eta = std::sqrt(8.0 * ln_k / static_cast<double>(horizon));
    out << "hedge;eta=" << format_double(eta);
  } else if (spec.setting == Setting::OlrcBandit) {
    double eta1 = std::sqrt(2.0 * ln_k / static_cast<double>(num_arms));
    out << "exp3ix;eta_t=sqrt(2lnK/(Kt));eta_1=" << format_double(eta1)
        << ";gamma_t=eta_t/2";
  } else {
    out << "-";
  }
  return out.str();
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted.front();
  double position = p * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(position);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = position - static_cast<double>(lo);
  return (1.0 - frac) * sorted[lo] + frac * sorted[lo + 1];
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, 0.5);
}

}  // namespace

// --- config loading ---------------------------------------------------------

ExperimentConfig load_config(const std::string& path) {
  ConfigDoc doc = parse_config_file(path);
  ExperimentConfig cfg;

  Section inst(doc, "instance", /*required=*/true);
  cfg.horizon = inst.size_req("T");
  if (cfg.horizon < 1) inst.fail("T", "horizon must be at least 1");
  cfg.num_arms = inst.size_req("K");
  if (cfg.num_arms < 2) {
    inst.fail("K", "need at least the void arm plus one real arm");
  }
  cfg.num_resources = inst.size_req("m");
  if (cfg.num_resources < 1) inst.fail("m", "need at least one resource");
  bool has_budget = inst.has("B");
  bool has_rho = inst.has("rho");
  if (has_budget == has_rho) {
    inst.fail("B", "give exactly one of B (absolute) or rho (per-round)");
  }
  if (has_budget) {
    cfg.budget = inst.number_req("B");
    if (!(cfg.budget > 0.0)) inst.fail("B", "budget must be positive");
  } else {
    cfg.rho = inst.number_req("rho");
    if (!(cfg.rho > 0.0) || cfg.rho > 1.0) {
      inst.fail("rho", "per-round budget must lie in (0, 1]");
    }
  }

  Section plan(doc, "plan", /*required=*/true);
  cfg.plan.kind = parse_plan_kind(plan, plan.str_req("kind"));
  cfg.plan.imbalance = plan.number("imbalance", 2.0);
  if (!(cfg.plan.imbalance > 0.0)) plan.fail("imbalance", "must be positive");
  cfg.plan.min_entry_scale = plan.number("min_entry_scale", 0.5);
  if (cfg.plan.min_entry_scale < 0.0) {
    plan.fail("min_entry_scale", "must be nonnegative");
  }
  cfg.plan.num_lean_rounds = plan.size("num_lean_rounds", 0);
  if (cfg.plan.kind == PlanKind::CustomMatrix) {
    std::string csv = plan.str_req("matrix_csv");
    fs::path csv_path(csv);
    if (csv_path.is_relative()) {
      csv_path = fs::path(path).parent_path() / csv_path;
    }
    cfg.plan.matrix = load_matrix_csv(csv_path.string());
  } else if (plan.has("matrix_csv")) {
    plan.fail("matrix_csv", "only valid with kind = custom");
  }

  cfg.environment = parse_environment(doc, cfg.num_arms, cfg.num_resources);

  Section alg(doc, "algorithm", /*required=*/true);
  cfg.algorithm.setting = parse_setting(alg, alg.str_req("setting"));
  cfg.algorithm.dual_kind = parse_dual(alg, alg.str("dual", "euclidean"));
  switch (cfg.algorithm.setting) {
    case Setting::Ora: cfg.algorithm.primal_kind = PrimalKind::None; break;
    case Setting::OlrcFull: cfg.algorithm.primal_kind = PrimalKind::Hedge; break;
    case Setting::OlrcBandit:
      cfg.algorithm.primal_kind = PrimalKind::Exp3Ix;
      break;
  }
  if (alg.has("primal")) {
    cfg.algorithm.primal_kind = parse_primal(alg, alg.str_req("primal"));
  }
  const ConfigValue* meta = alg.find("meta");
  if (!meta) {
    cfg.meta_mode = MetaMode::Auto;
  } else if (meta->value.is_boolean()) {
    cfg.meta_mode = meta->value.get<bool>() ? MetaMode::On : MetaMode::Off;
  } else if (meta->value.is_string()) {
    std::string t = lowercase(meta->value.get<std::string>());
    if (t == "auto") cfg.meta_mode = MetaMode::Auto;
    else if (t == "on") cfg.meta_mode = MetaMode::On;
    else if (t == "off") cfg.meta_mode = MetaMode::Off;
    else alg.fail("meta", "expected auto, on or off", meta);
  } else {
    alg.fail("meta", "expected auto, on, off, true or false", meta);
  }
  cfg.algorithm.void_skip = alg.boolean("void_skip", false);
  if (cfg.meta_mode == MetaMode::On && cfg.algorithm.void_skip) {
    alg.fail("void_skip", "meta rescaling and void-skip are mutually "
                          "exclusive");
  }
  cfg.algorithm.delta = alg.number("delta", 0.05);
  if (!(cfg.algorithm.delta > 0.0) || cfg.algorithm.delta >= 1.0) {
    alg.fail("delta", "confidence parameter must lie in (0, 1)");
  }
  cfg.algorithm.delta_P = alg.number("delta_P", 0.05);
  if (!(cfg.algorithm.delta_P > 0.0) || cfg.algorithm.delta_P >= 1.0) {
    alg.fail("delta_P", "confidence parameter must lie in (0, 1)");
  }
  cfg.algorithm.meta_rescale = false;  // resolved per horizon at run time
  try {
    cfg.algorithm.validate();
  } catch (const Error& e) {
    alg.fail("setting", e.what());
  }

  Section errors(doc, "errors", /*required=*/false);
  if (errors.exists()) {
    cfg.has_eps = true;
    cfg.eps_uniform = errors.number_req("eps");
    if (cfg.eps_uniform < 0.0) errors.fail("eps", "must be nonnegative");
  }

  Section runs(doc, "runs", /*required=*/false);
  if (runs.exists()) {
    bool has_seeds = runs.has("seeds");
    bool has_count = runs.has("count");
    if (has_seeds && has_count) {
      runs.fail("seeds", "give seeds or count, not both");
    }
    if (has_seeds) {
      cfg.seeds = runs.uint_array_req("seeds");
      if (cfg.seeds.empty()) runs.fail("seeds", "seed list is empty");
      std::set<std::uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
      if (unique.size() != cfg.seeds.size()) {
        runs.fail("seeds", "duplicate seeds");
      }
    } else if (has_count) {
      std::size_t count = runs.size_req("count");
      if (count < 1) runs.fail("count", "must be at least 1");
      for (std::size_t s = 1; s <= count; ++s) cfg.seeds.push_back(s);
    }
    if (runs.has("horizons")) {
      std::vector<std::uint64_t> raw = runs.uint_array_req("horizons");
      if (raw.empty()) runs.fail("horizons", "horizon list is empty");
      std::set<std::uint64_t> unique(raw.begin(), raw.end());
      if (unique.size() != raw.size()) runs.fail("horizons", "duplicates");
      for (std::uint64_t t : raw) {
        if (t < 1) runs.fail("horizons", "horizons must be at least 1");
        cfg.horizons.push_back(static_cast<std::size_t>(t));
      }
    }
  }
  if (cfg.seeds.empty()) cfg.seeds = {1};
  if (cfg.horizons.empty()) cfg.horizons = {cfg.horizon};

  Section output(doc, "output", /*required=*/false);
  if (output.exists()) {
    cfg.out_dir = output.str("dir", "out");
    cfg.dump_traces = output.boolean("traces", false);
  }

  check_unconsumed(doc);

  // Dry-run the per-horizon materialization so that every invalid
  // combination surfaces as a config error, not mid-run.
  for (std::size_t horizon : cfg.horizons) {
    try {
      Instance instance = instantiate_instance(cfg, horizon);
      Environment env(instantiate_environment(cfg, horizon));
      (void)instance;
      (void)env;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      config_fail(path + ": horizon " + std::to_string(horizon) + ": " +
                  e.what());
    }
  }
  return cfg;
}

double budget_for(const ExperimentConfig& config, std::size_t horizon) {
  if (config.budget >= 0.0) return config.budget;
  return config.rho * static_cast<double>(horizon);
}

EnvironmentSpec instantiate_environment(const ExperimentConfig& config,
                                        std::size_t horizon) {
  const EnvTemplate& tmpl = config.environment;
  EnvironmentSpec spec;
  spec.kind = tmpl.kind;
  spec.num_arms = config.num_arms;
  spec.num_resources = config.num_resources;
  spec.horizon = horizon;
  spec.phases = tmpl.phases;
  spec.noise = tmpl.noise;
  spec.uniform_halfwidth = tmpl.uniform_halfwidth;
  spec.shared_noise = tmpl.shared_noise;
  spec.seed = tmpl.seed;
  if (!tmpl.boundaries_abs.empty()) {
    if (tmpl.boundaries_abs.back() != horizon) {
      config_fail("absolute phase boundaries end at " +
                  std::to_string(tmpl.boundaries_abs.back()) +
                  " but the horizon is " + std::to_string(horizon) +
                  "; use boundaries_frac for horizon sweeps");
    }
    spec.phase_boundaries = tmpl.boundaries_abs;
  } else if (!tmpl.boundaries_frac.empty()) {
    std::size_t prev = 0;
    for (double frac : tmpl.boundaries_frac) {
      auto rounded = static_cast<std::size_t>(
          std::llround(frac * static_cast<double>(horizon)));
      rounded = std::min(std::max<std::size_t>(rounded, 1), horizon);
      if (rounded <= prev) {
        config_fail("fractional phase boundaries collide at horizon " +
                    std::to_string(horizon));
      }
      spec.phase_boundaries.push_back(rounded);
      prev = rounded;
    }
    spec.phase_boundaries.back() = horizon;
  }
  return spec;
}

Instance instantiate_instance(const ExperimentConfig& config,
                              std::size_t horizon) {
  double budget = budget_for(config, horizon);
  PlanSpec plan_spec = config.plan;
  plan_spec.budget = budget;
  SpendingPlan plan =
      generate_plan(plan_spec, horizon, config.num_resources, budget);
  Instance inst{horizon, config.num_arms, config.num_resources, budget,
                std::move(plan)};
  validate_instance(inst);
  return inst;
}

bool resolve_meta(const ExperimentConfig& config, const Instance& inst) {
  if (config.algorithm.void_skip) return false;
  switch (config.meta_mode) {
    case MetaMode::On: return true;
    case MetaMode::Off: return false;
    case MetaMode::Auto: return auto_meta_rule(inst);
  }
  return false;
}

// --- summary CSV ------------------------------------------------------------

const char* const kSummaryHeader =
    "algorithm,setting,T,seed,total_reward,opt_dynamic,opt_static,"
    "dynamic_regret,static_regret,tau,theoretical_bound,rho_min_used,"
    "meta_applied";

void write_summary_csv(std::ostream& out,
                       const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << "\n";
  for (const SummaryRow& row : rows) {
    out << row.algorithm << ',' << setting_name(row.setting) << ','
        << row.horizon << ',' << row.seed << ','
        << format_double(row.total_reward) << ','
        << format_double(row.opt_dynamic) << ','
        << format_double(row.opt_static) << ','
        << format_double(row.dynamic_regret) << ','
        << format_double(row.static_regret) << ',' << row.tau << ','
        << format_double(row.theoretical_bound) << ','
        << format_double(row.rho_min_used) << ','
        << (row.meta_applied ? 1 : 0) << "\n";
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in,
                                         std::size_t* malformed_rows) {
  std::vector<SummaryRow> rows;
  std::size_t malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line == kSummaryHeader) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 13) {
      ++malformed;
      continue;
    }
    SummaryRow row;
    row.algorithm = cells[0];
    std::optional<Setting> setting = parse_setting_token(cells[1]);
    std::optional<std::uint64_t> horizon = parse_u64_text(cells[2]);
    std::optional<std::uint64_t> seed = parse_u64_text(cells[3]);
    std::optional<double> total = parse_double_text(cells[4]);
    std::optional<double> dyn = parse_double_text(cells[5]);
    std::optional<double> stat = parse_double_text(cells[6]);
    std::optional<double> dyn_regret = parse_double_text(cells[7]);
    std::optional<double> stat_regret = parse_double_text(cells[8]);
    std::optional<std::uint64_t> tau = parse_u64_text(cells[9]);
    std::optional<double> bound = parse_double_text(cells[10]);
    std::optional<double> rho_min = parse_double_text(cells[11]);
    bool meta_ok = cells[12] == "0" || cells[12] == "1" ||
                   cells[12] == "true" || cells[12] == "false";
    if (row.algorithm.empty() || !setting || !horizon || !seed || !total ||
        !dyn || !stat || !dyn_regret || !stat_regret || !tau || !bound ||
        !rho_min || !meta_ok) {
      ++malformed;
      continue;
    }
    row.setting = *setting;
    row.horizon = static_cast<std::size_t>(*horizon);
    row.seed = *seed;
    row.total_reward = *total;
    row.opt_dynamic = *dyn;
    row.opt_static = *stat;
    row.dynamic_regret = *dyn_regret;
    row.static_regret = *stat_regret;
    row.tau = static_cast<std::size_t>(*tau);
    row.theoretical_bound = *bound;
    row.rho_min_used = *rho_min;
    row.meta_applied = cells[12] == "1" || cells[12] == "true";
    rows.push_back(std::move(row));
  }
  if (malformed_rows) *malformed_rows = malformed;
  return rows;
}

// --- run execution ----------------------------------------------------------

namespace {

std::size_t worker_count(std::size_t jobs) {
  if (jobs <= 1) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t cap = hw != 0 ? hw : 1;
  if (const char* env = std::getenv("PLANPACE_THREADS")) {
    char* end = nullptr;
    unsigned long value = std::strtoul(env, &end, 10);
    if (env[0] != '\0' && end != nullptr && *end == '\0' && value >= 1) {
      cap = static_cast<std::size_t>(value);
    } else {
      std::cerr << "warning: ignoring invalid PLANPACE_THREADS='" << env
                << "'\n";
    }
  }
  return std::min(cap, jobs);
}

}  // namespace

std::vector<SummaryRow> execute_runs(const ExperimentConfig& config,
                                     bool strict) {
  fs::create_directories(config.out_dir);

  std::vector<HorizonContext> contexts;
  contexts.reserve(config.horizons.size());
  for (std::size_t horizon : config.horizons) {
    Instance inst = instantiate_instance(config, horizon);
    Environment env(instantiate_environment(config, horizon));
    HorizonContext ctx(std::move(inst), std::move(env));
    ctx.horizon = horizon;
    MeanProfile profile = profile_from_environment(ctx.env);
    auto [dynamic_value, per_round] = opt_dynamic(profile, ctx.inst.plan);
    ctx.oracle.opt_dynamic = dynamic_value;
    ctx.oracle.per_round_dynamic_values = std::move(per_round);
    ctx.oracle.opt_static = opt_static(profile, ctx.inst.plan);
    ctx.spec = config.algorithm;
    ctx.spec.meta_rescale = resolve_meta(config, ctx.inst);
    bool suggested = auto_meta_rule(ctx.inst);
    if (ctx.spec.meta_rescale != suggested) {
      std::cerr << "[planpace] T=" << horizon << ": auto-meta rule suggests "
                << (suggested ? "on" : "off") << "; running with meta "
                << (ctx.spec.meta_rescale ? "on" : "off")
                << " (config override)\n";
    }
    ctx.algorithm_name = algorithm_label(ctx.spec);
    contexts.push_back(std::move(ctx));
  }

  struct Job {
    std::size_t context = 0;
    std::uint64_t seed = 0;
  };
  std::vector<Job> jobs;
  jobs.reserve(contexts.size() * config.seeds.size());
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    for (std::uint64_t seed : config.seeds) jobs.push_back({c, seed});
  }

  std::vector<SummaryRow> rows(jobs.size());
  std::vector<std::string> meta_lines(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> clamp_total{0};

  auto work = [&]() {
    for (;;) {
      std::size_t index = next.fetch_add(1);
      if (index >= jobs.size()) return;
      const Job& job = jobs[index];
      const HorizonContext& ctx = contexts[job.context];
      try {
        RunResult result =
            run_algorithm(ctx.spec, ctx.inst, ctx.env, job.seed);
        auto [dynamic_regret, static_regret] =
            realized_regrets(result.trace, ctx.oracle);
        SummaryRow row;
        row.algorithm = ctx.algorithm_name;
        row.setting = ctx.spec.setting;
        row.horizon = ctx.horizon;
        row.seed = job.seed;
        row.total_reward = result.trace.total_reward;
        row.opt_dynamic = ctx.oracle.opt_dynamic;
        row.opt_static = ctx.oracle.opt_static;
        row.dynamic_regret = dynamic_regret;
        row.static_regret = static_regret;
        row.tau = result.trace.stop_time;
        row.theoretical_bound = bound_for(ctx, result);
        row.rho_min_used = result.rho_min_used;
        row.meta_applied = result.meta_applied;
        rows[index] = std::move(row);
        clamp_total.fetch_add(result.clamp_events);

        double radius = 1.0 / result.rho_min_used;
        std::ostringstream meta_line;
        meta_line << ctx.horizon << ',' << job.seed << ','
                  << ctx.algorithm_name << ',' << setting_name(ctx.spec.setting)
                  << ','
                  << (ctx.spec.dual_kind == DualKind::Euclidean ? "euclidean"
                                                               : "entropic")
                  << ','
                  << (ctx.spec.primal_kind == PrimalKind::None
                          ? "none"
                          : ctx.spec.primal_kind == PrimalKind::Hedge
                                ? "hedge"
                                : "exp3ix")
                  << ',' << format_double(ctx.spec.delta) << ','
                  << format_double(ctx.spec.delta_P) << ','
                  << (result.meta_applied ? 1 : 0) << ','
                  << (ctx.spec.void_skip ? 1 : 0) << ','
                  << result.void_skipped_rounds << ',' << result.clamp_events
                  << ',' << format_double(result.rho_min_used) << ','
                  << rate_descriptor_dual(ctx.spec, radius,
                                          ctx.inst.num_resources, ctx.horizon)
                  << ','
                  << rate_descriptor_primal(ctx.spec, ctx.inst.num_arms,
                                            ctx.horizon)
                  << ',' << result.trace.stop_time;
        meta_lines[index] = meta_line.str();

        if (config.dump_traces) {
          fs::path trace_path =
              fs::path(config.out_dir) /
              ("trace_T" + std::to_string(ctx.horizon) + "_seed" +
               std::to_string(job.seed) + ".csv");
          std::ofstream trace_out(trace_path);
          if (!trace_out) {
            throw Error(ErrorCode::ConfigError,
                        "cannot write " + trace_path.string());
          }
          write_trace_csv(trace_out, result.trace, ctx.inst.num_resources);
        }
      } catch (...) {
        failures[index] = std::current_exception();
      }
    }
  };

  std::size_t workers = worker_count(jobs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& thread : pool) thread.join();
  }

  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  // Deterministic merge: (T, seed) sort order regardless of scheduling or
  // the order seeds/horizons were listed in.
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (rows[a].horizon != rows[b].horizon) {
                       return rows[a].horizon < rows[b].horizon;
                     }
                     return rows[a].seed < rows[b].seed;
                   });
  std::vector<SummaryRow> sorted_rows;
  sorted_rows.reserve(rows.size());
  std::vector<std::string> sorted_meta;
  sorted_meta.reserve(meta_lines.size());
  for (std::size_t i : order) {
    sorted_rows.push_back(std::move(rows[i]));
    sorted_meta.push_back(std::move(meta_lines[i]));
  }

  fs::path summary_path = fs::path(config.out_dir) / "summary.csv";
  {
    std::ofstream out(summary_path);
    if (!out) {
      throw Error(ErrorCode::ConfigError,
                  "cannot write " + summary_path.string());
    }
    write_summary_csv(out, sorted_rows);
  }
  {
    fs::path meta_path = fs::path(config.out_dir) / "run_meta.csv";
    std::ofstream out(meta_path);
    if (!out) {
      throw Error(ErrorCode::ConfigError, "cannot write " + meta_path.string());
    }
    out << kRunMetaHeader << "\n";
    for (const std::string& line : sorted_meta) out << line << "\n";
  }

  if (strict && clamp_total.load() > 0) {
    throw Error(ErrorCode::EntryOutOfRange,
                "strict mode: " + std::to_string(clamp_total.load()) +
                    " minimizer payoff clamp events");
  }
  return sorted_rows;
}

// --- report aggregation -----------------------------------------------------

std::vector<ReportRow> aggregate_rows(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyInput, "no summary rows to aggregate");
  }
  using Key = std::tuple<std::string, int, std::size_t>;
  std::map<Key, std::vector<const SummaryRow*>> groups;
  for (const SummaryRow& row : rows) {
    groups[{row.algorithm, static_cast<int>(row.setting), row.horizon}]
        .push_back(&row);
  }

  auto regret_of = [](const SummaryRow& row) {
    return row.setting == Setting::Ora ? row.dynamic_regret
                                       : row.static_regret;
  };

  std::vector<ReportRow> report;
  report.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    ReportRow out;
    out.algorithm = std::get<0>(key);
    out.setting = static_cast<Setting>(std::get<1>(key));
    out.horizon = std::get<2>(key);
    out.count = members.size();
    std::vector<double> regrets;
    std::vector<double> bounds;
    regrets.reserve(members.size());
    bounds.reserve(members.size());
    for (const SummaryRow* row : members) {
      regrets.push_back(regret_of(*row));
      bounds.push_back(row->theoretical_bound);
    }
    std::sort(regrets.begin(), regrets.end());
    std::sort(bounds.begin(), bounds.end());
    out.median_regret = sorted_quantile(regrets, 0.5);
    out.iqr_regret =
        sorted_quantile(regrets, 0.75) - sorted_quantile(regrets, 0.25);
    out.median_bound = sorted_quantile(bounds, 0.5);
    out.bound_over_regret = out.median_bound / std::max(out.median_regret, 1.0);

    // Sublinearity check R_{4T} / R_T: pair seeds with the T/4 group when
    // both halves ran the same seeds, otherwise fall back to the ratio of
    // group medians.
    if (out.horizon % 4 == 0) {
      Key quarter{std::get<0>(key), std::get<1>(key), out.horizon / 4};
      auto it = groups.find(quarter);
      if (it != groups.end()) {
        std::map<std::uint64_t, double> base;
        for (const SummaryRow* row : it->second) {
          base[row->seed] = regret_of(*row);
        }
        std::vector<double> ratios;
        for (const SummaryRow* row : members) {
          auto found = base.find(row->seed);
          if (found != base.end() && found->second > 0.0) {
            ratios.push_back(regret_of(*row) / found->second);
          }
        }
        if (!ratios.empty()) {
          out.sublinearity_ratio = median_of(std::move(ratios));
        } else {
          std::vector<double> base_regrets;
          for (const auto& [seed, value] : base) base_regrets.push_back(value);
          double base_median = median_of(std::move(base_regrets));
          if (base_median > 0.0) {
            out.sublinearity_ratio = out.median_regret / base_median;
          }
        }
      }
    }
    report.push_back(std::move(out));
  }
  return report;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "algorithm,setting,T,count,median_regret,iqr_regret,median_bound,"
         "bound_over_regret,sublinearity_ratio\n";
  for (const ReportRow& row : rows) {
    out << row.algorithm << ',' << setting_name(row.setting) << ','
        << row.horizon << ',' << row.count << ','
        << format_double(row.median_regret) << ','
        << format_double(row.iqr_regret) << ','
        << format_double(row.median_bound) << ','
        << format_double(row.bound_over_regret) << ','
        << format_double(row.sublinearity_ratio) << "\n";
  }
}

// --- SVG rendering ----------------------------------------------------------

namespace {

std::string svg_num(double value) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << value;
  return out.str();
}

}  // namespace

std::string render_report_svg(const std::vector<ReportRow>& rows) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 480.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 610.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 430.0;
  static const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr std::size_t kPaletteSize = 6;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">median regret vs "
         "horizon (log-log)</text>\n";

  // Collect series points; clamp nonpositive medians so they stay plottable
  // on the log axis.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  bool first_point = true;
  for (const ReportRow& row : rows) {
    double x = std::log10(static_cast<double>(std::max<std::size_t>(
        row.horizon, 1)));
    double y = std::log10(std::max(row.median_regret, 0.1));
    std::string label =
        row.algorithm + "/" + std::string(setting_name(row.setting));
    series[label].emplace_back(x, y);
    if (first_point) {
      x_min = x_max = x;
      y_min = y_max = y;
      first_point = false;
    } else {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (series.empty()) {
    svg << "<text x=\"" << (kWidth / 2) << "\" y=\"" << (kHeight / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">no data</text>\n</svg>\n";
    return svg.str();
  }
  if (x_max - x_min < 1e-9) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max - y_min < 1e-9) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  x_min -= 0.05 * (x_max - x_min);
  x_max += 0.05 * (x_max - x_min);
  y_min -= 0.08 * (y_max - y_min);
  y_max += 0.08 * (y_max - y_min);

  auto px = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  auto py = [&](double y) {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  };

  // Axes.
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\""
      << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // Decade ticks.
  for (int decade = static_cast<int>(std::ceil(x_min));
       decade <= static_cast<int>(std::floor(x_max)); ++decade) {
    double x = px(decade);
    svg << "<line x1=\"" << svg_num(x) << "\" y1=\"" << kBottom << "\" x2=\""
        << svg_num(x) << "\" y2=\"" << (kBottom + 5)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << svg_num(x) << "\" y=\"" << (kBottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e" << decade << "</text>\n";
  }
  for (int decade = static_cast<int>(std::ceil(y_min));
       decade <= static_cast<int>(std::floor(y_max)); ++decade) {
    double y = py(decade);
    svg << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << svg_num(y)
        << "\" x2=\"" << kLeft << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (kLeft - 10) << "\" y=\"" << svg_num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e" << decade << "</text>\n";
  }
  svg << "<text x=\"" << ((kLeft + kRight) / 2) << "\" y=\"" << (kBottom + 40)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">horizon T</text>\n";
  svg << "<text x=\"18\" y=\"" << ((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << ((kTop + kBottom) / 2) << ")\">median regret</text>\n";

  std::size_t color = 0;
  double legend_y = kTop + 12.0;
  for (auto& [label, points] : series) {
    std::sort(points.begin(), points.end());
    const char* stroke = kPalette[color % kPaletteSize];
    svg << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points) {
      svg << svg_num(px(x)) << ',' << svg_num(py(y)) << ' ';
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : points) {
      svg << "<circle cx=\"" << svg_num(px(x)) << "\" cy=\"" << svg_num(py(y))
          << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
    }
    svg << "<rect x=\"" << (kLeft + 8) << "\" y=\"" << svg_num(legend_y - 8)
        << "\" width=\"10\" height=\"10\" fill=\"" << stroke << "\"/>\n";
    svg << "<text x=\"" << (kLeft + 24) << "\" y=\"" << svg_num(legend_y + 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label
        << "</text>\n";
    legend_y += 16.0;
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

// --- CLI --------------------------------------------------------------------

namespace {

int cmd_run(const std::string& config_path,
            const std::optional<std::uint64_t>& seed_override,
            const std::optional<std::string>& out_override, bool strict) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (seed_override) config.seeds = {*seed_override};
    if (out_override) config.out_dir = *out_override;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  try {
    std::vector<SummaryRow> rows = execute_runs(config, strict);
    std::cout << "wrote "
              << (fs::path(config.out_dir) / "summary.csv").string() << " ("
              << rows.size() << " rows)\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return 1;
  }
}

int cmd_oracle(const std::string& config_path) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  try {
    for (std::size_t horizon : config.horizons) {
      Instance inst = instantiate_instance(config, horizon);
      Environment env(instantiate_environment(config, horizon));
      MeanProfile profile = profile_from_environment(env);
      auto [dynamic_value, per_round] = opt_dynamic(profile, inst.plan);
      (void)per_round;
      double static_value = opt_static(profile, inst.plan);
      double dynamic_eps = dynamic_value;
      double static_eps = static_value;
      if (config.has_eps) {
        ErrorSchedule errs = ErrorSchedule::uniform(
            inst.num_resources, horizon, config.eps_uniform);
        dynamic_eps = opt_dynamic_eps(profile, inst.plan, errs, inst.budget);
        static_eps = opt_static_eps(profile, inst.plan, errs, inst.budget);
      }
      std::cout << "T=" << horizon << "\n"
                << "opt_dynamic=" << format_double(dynamic_value) << "\n"
                << "opt_static=" << format_double(static_value) << "\n"
                << "opt_dynamic_eps=" << format_double(dynamic_eps) << "\n"
                << "opt_static_eps=" << format_double(static_eps) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return 1;
  }
}

int cmd_report(const std::string& in_dir, bool svg, bool strict) {
  try {
    if (!fs::is_directory(in_dir)) {
      throw Error(ErrorCode::EmptyInput,
                  "report input directory not found: " + in_dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
      if (!entry.is_regular_file()) continue;
      std::string name = entry.path().filename().string();
      if (name.rfind("summary", 0) == 0 &&
          entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw Error(ErrorCode::EmptyInput,
                  "no summary*.csv files in " + in_dir);
    }
    std::vector<SummaryRow> rows;
    std::size_t malformed = 0;
    for (const fs::path& file : files) {
      std::ifstream in(file);
      if (!in) {
        throw Error(ErrorCode::EmptyInput, "cannot open " + file.string());
      }
      std::size_t bad = 0;
      std::vector<SummaryRow> chunk = read_summary_csv(in, &bad);
      malformed += bad;
      rows.insert(rows.end(), std::make_move_iterator(chunk.begin()),
                  std::make_move_iterator(chunk.end()));
    }
    if (malformed > 0) {
      std::cerr << "warning: skipped " << malformed
                << " malformed summary rows\n";
    }
    if (rows.empty()) {
      throw Error(ErrorCode::EmptyInput,
                  "summary files contain no parsable rows");
    }
    std::vector<ReportRow> report = aggregate_rows(rows);
    fs::path report_path = fs::path(in_dir) / "report.csv";
    {
      std::ofstream out(report_path);
      if (!out) {
        throw Error(ErrorCode::EmptyInput,
                    "cannot write " + report_path.string());
      }
      write_report_csv(out, report);
    }
    std::cout << "wrote " << report_path.string() << " (" << report.size()
              << " groups)\n";
    if (svg) {
      // Best effort only; plotting problems never change the exit code.
      try {
        fs::path svg_path = fs::path(in_dir) / "report.svg";
        std::ofstream out(svg_path);
        if (out) {
          out << render_report_svg(report);
          std::cout << "wrote " << svg_path.string() << "\n";
        } else {
          std::cerr << "warning: cannot write " << svg_path.string() << "\n";
        }
      } catch (const std::exception& e) {
        std::cerr << "warning: SVG rendering failed: " << e.what() << "\n";
      }
    }
    if (strict && malformed > 0) {
      std::cerr << "strict mode: malformed rows were skipped\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "report failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{
      "planpace: online decision making under knapsack constraints, paced "
      "by a spending plan"};
  app.require_subcommand(1);

  std::string run_config;
  std::uint64_t run_seed = 0;
  std::string run_out;
  bool run_strict = false;
  CLI::App* run = app.add_subcommand(
      "run", "execute the configured seeds/horizons and write summary CSVs");
  run->add_option("--config", run_config, "experiment config file")
      ->required();
  CLI::Option* seed_opt = run->add_option(
      "--seed", run_seed, "override the configured seed list with one seed");
  CLI::Option* out_opt = run->add_option(
      "--out", run_out, "override the configured output directory");
  run->add_flag("--strict", run_strict,
                "fail when any minimizer payoff was clamped");

  std::string oracle_config;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "compute the four baseline values for a config (no "
                "simulation)");
  oracle->add_option("--config", oracle_config, "experiment config file")
      ->required();

  std::string report_in;
  bool report_svg = false;
  bool report_strict = false;
  CLI::App* report = app.add_subcommand(
      "report", "aggregate summary CSVs from a directory into report.csv");
  report->add_option("--in", report_in, "directory containing summary*.csv")
      ->required();
  report->add_flag("--svg", report_svg,
                   "also render report.svg (log-log medians)");
  report->add_flag("--strict", report_strict,
                   "fail when malformed rows had to be skipped");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    std::optional<std::uint64_t> seed_override;
    if (seed_opt->count() > 0) seed_override = run_seed;
    std::optional<std::string> out_override;
    if (out_opt->count() > 0) out_override = run_out;
    return cmd_run(run_config, seed_override, out_override, run_strict);
  }
  if (oracle->parsed()) return cmd_oracle(oracle_config);
  if (report->parsed()) return cmd_report(report_in, report_svg, report_strict);
  return 2;
}

}  // namespace planpace

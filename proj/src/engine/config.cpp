#include "llmc/engine/config.hpp"

#include <sstream>

#include "json.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::engine {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    size_t idx = 0;
    int64_t v = std::stoll(value, &idx);
    if (idx != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected integer, got '" +
                      value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t idx = 0;
    double v = std::stod(value, &idx);
    if (idx != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected number, got '" +
                      value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

}  // namespace

void apply_config_kv(CampaignConfig& c, const std::string& key,
                     const std::string& raw_value) {
  std::string value = unquote(trim(raw_value));
  if (key == "program") {
    c.program_path = value;
  } else if (key == "strategy") {
    c.strategy = value;
  } else if (key == "oracle.kind") {
    c.oracle.kind = value;
  } else if (key == "oracle.endpoint") {
    c.oracle.endpoint = value;
  } else if (key == "oracle.transcript_path") {
    c.oracle.transcript_path = value;
  } else if (key == "oracle.cache_path") {
    c.oracle.cache_path = value;
  } else if (key == "oracle.prompts_dir") {
    c.oracle.prompts_dir = value;
  } else if (key == "oracle.lenient_replay") {
    c.oracle.lenient_replay = parse_bool(key, value);
  } else if (key == "oracle.remote_timeout_ms") {
    c.oracle.remote_timeout_ms = parse_int(key, value);
  } else if (key == "budget.max_iterations") {
    c.max_iterations = parse_int(key, value);
  } else if (key == "budget.max_wallclock_ms") {
    c.max_wallclock_ms = parse_int(key, value);
  } else if (key == "batch_size") {
    c.batch_size = static_cast<int>(parse_int(key, value));
  } else if (key == "rng_seed") {
    c.rng_seed = static_cast<uint64_t>(parse_int(key, value));
  } else if (key == "solver.timeout_ms") {
    c.solver_timeout_ms = parse_int(key, value);
  } else if (key == "solver.node_budget") {
    c.solver_node_budget = parse_int(key, value);
  } else if (key == "solver.external_cmd") {
    c.solver_external_cmd = value;
  } else if (key == "exec.max_steps") {
    c.exec_limits.max_steps = parse_int(key, value);
  } else if (key == "exec.max_loop_iters") {
    c.exec_limits.max_loop_iters = parse_int(key, value);
  } else if (key == "domains.int_lo") {
    c.domains.int_lo = parse_int(key, value);
  } else if (key == "domains.int_hi") {
    c.domains.int_hi = parse_int(key, value);
  } else if (key == "domains.str_max_len") {
    c.domains.str_max_len = static_cast<int>(parse_int(key, value));
  } else if (key == "ga.population_size") {
    c.ga.population_size = static_cast<int>(parse_int(key, value));
  } else if (key == "ga.crossover_rate") {
    c.ga.crossover_rate = parse_double(key, value);
  } else if (key == "ga.mutation_rate") {
    c.ga.mutation_rate = parse_double(key, value);
  } else if (key == "ga.tournament_size") {
    c.ga.tournament_size = static_cast<int>(parse_int(key, value));
  } else if (key == "ga.elitism") {
    c.ga.elitism = static_cast<int>(parse_int(key, value));
  } else if (key == "seeds_path") {
    c.seeds_path = value;
  } else if (key == "transcript_record_path") {
    c.transcript_record_path = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

CampaignConfig parse_config_text(const std::string& text) {
  CampaignConfig c;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_kv(c, key, value);
  }
  return c;
}

CampaignConfig parse_config_file(const std::string& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return parse_config_text(text);
}

void check_config(const CampaignConfig& c) {
  if (c.strategy != "llmc" && c.strategy != "concolic" && c.strategy != "random" &&
      c.strategy != "ga")
    throw ConfigError("unknown strategy '" + c.strategy + "'");
  if (c.oracle.kind != "null" && c.oracle.kind != "heuristic" &&
      c.oracle.kind != "replay" && c.oracle.kind != "remote")
    throw ConfigError("unknown oracle kind '" + c.oracle.kind + "'");
  if (c.max_iterations <= 0) throw ConfigError("budget.max_iterations must be > 0");
  if (c.max_wallclock_ms && *c.max_wallclock_ms <= 0)
    throw ConfigError("budget.max_wallclock_ms must be > 0");
  if (c.batch_size <= 0) throw ConfigError("batch_size must be > 0");
  if (c.solver_node_budget <= 0) throw ConfigError("solver.node_budget must be > 0");
  if (c.solver_timeout_ms <= 0) throw ConfigError("solver.timeout_ms must be > 0");
  if (c.domains.int_lo > c.domains.int_hi)
    throw ConfigError("domains: int_lo must be <= int_hi");
  if (c.domains.str_max_len < 0 || c.domains.str_max_len > 64)
    throw ConfigError("domains.str_max_len must be in [0, 64]");
  if (c.ga.population_size < 2) throw ConfigError("ga.population_size must be >= 2");
  if (c.ga.crossover_rate < 0.0 || c.ga.crossover_rate > 1.0 ||
      c.ga.mutation_rate < 0.0 || c.ga.mutation_rate > 1.0)
    throw ConfigError("ga rates must be in [0, 1]");
  if (c.ga.tournament_size < 1) throw ConfigError("ga.tournament_size must be >= 1");
  if (c.ga.elitism < 0 || c.ga.elitism >= c.ga.population_size)
    throw ConfigError("ga.elitism must be in [0, population_size)");
}

std::vector<concolic::ConcreteInput> load_seeds(const std::string& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read seeds: ") + e.what());
  }
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw ConfigError("seeds file must be a JSON array of input objects");
  std::vector<concolic::ConcreteInput> seeds;
  for (const auto& obj : j) {
    if (!obj.is_object()) throw ConfigError("seeds entry is not an object");
    concolic::ConcreteInput in;
    for (const auto& [name, v] : obj.items()) {
      if (v.is_number_integer())
        in[name] = v.get<int64_t>();
      else if (v.is_boolean())
        in[name] = v.get<bool>();
      else if (v.is_string())
        in[name] = v.get<std::string>();
      else
        throw ConfigError("seeds entry '" + name + "' has unsupported type");
    }
    seeds.push_back(std::move(in));
  }
  return seeds;
}

concolic::ConcreteInput default_input(const lang::FunctionDef& entry) {
  concolic::ConcreteInput in;
  for (const auto& p : entry.params) {
    switch (p.type) {
      case lang::Type::Int: in[p.name] = int64_t{0}; break;
      case lang::Type::Bool: in[p.name] = false; break;
      case lang::Type::Str: in[p.name] = std::string(); break;
    }
  }
  return in;
}

}  // namespace llmc::engine

#include "wpn/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wpn/errors.hpp"

namespace wpn {

const std::vector<ConfigEntry>& config_schema() {
  static const std::vector<ConfigEntry> schema = {
      {"problem", "source", "generator",
       "problem instance source: generator | edge_list"},
      {"problem", "edge_list_path", "",
       "edge-list file (required when source = edge_list)"},
      {"problem", "n", "8", "generator: vertex count"},
      {"problem", "radius", "0.6", "generator: unit-disk radius on the unit square"},
      {"problem", "graph_seed", "1", "generator: placement seed"},
      {"problem", "g_a", "1", "independence penalty gain (positive)"},
      {"problem", "g_b", "1", "coverage penalty gain (positive)"},
      {"engine", "kind", "gradient",
       "update rule: gradient | hopfield | mfa | threshold"},
      {"engine", "lambda", "30", "sigmoid slope"},
      {"engine", "dt", "0.01", "Euler step for gradient/hopfield dynamics"},
      {"engine", "hopfield_mode", "euler_memory",
       "hopfield recursion: euler_memory | memoryless"},
      {"engine", "update_order", "synchronous",
       "centralized sweep order: synchronous | async"},
      {"engine", "mfa_tau", "0.5", "mean-field discretization step"},
      {"engine", "mfa_mu", "1", "mean-field gain (uniform across neurons)"},
      {"engine", "t0", "10", "annealing start temperature"},
      {"engine", "alpha", "0.95", "annealing geometric decay in (0,1)"},
      {"engine", "t_min", "0.01", "annealing floor temperature"},
      {"criterion", "epsilon", "1e-09", "convergence tolerance on max |dz|"},
      {"criterion", "max_steps", "5000", "step/round cap per episode"},
      {"criterion", "max_episodes", "100", "multistart episode cap"},
      {"run", "mode", "both", "what to run: centralized | distributed | both"},
      {"run", "seeds", "1", "comma-separated episode seeds"},
      {"run", "emit_trace", "false", "write per-transmission trace.tsv"},
      {"mac", "kind", "ideal_tdma", "medium access: ideal_tdma | slotted_aloha"},
      {"mac", "slot_time", "1e-06", "seconds per slot (= per-message airtime)"},
      {"mac", "channels", "1", "parallel radio channels"},
      {"mac", "p_transmit", "0.5", "slotted_aloha per-slot transmit probability"},
      {"sim", "trigger", "periodic", "mote update trigger: periodic | on_receive"},
      {"sim", "period", "0.001", "seconds between synchronized update rounds"},
      {"sim", "delta", "0.0001", "broadcast threshold on |dz| (0 = always)"},
      {"sim", "max_sim_time", "10", "simulated-seconds cap"},
      {"sim", "max_updates", "10000000", "neuron-update cap"},
      {"cost", "bytes_per_real", "4", "bytes per stored real (cost table)"},
      {"cost", "group_size", "10", "motes per cluster (cost table)"},
  };
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool known_key(const std::string& section, const std::string& key) {
  for (const ConfigEntry& entry : config_schema())
    if (section == entry.section && key == entry.key) return true;
  return false;
}

bool known_section(const std::string& section) {
  for (const ConfigEntry& entry : config_schema())
    if (section == entry.section) return true;
  return false;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  for (const ConfigEntry& entry : config_schema())
    cfg.values_[std::string(entry.section) + "." + entry.key] = entry.def;
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig cfg = defaults();
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section))
        throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected \"key = value\"", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ParseError("key \"" + key + "\" appears before any [section]", line_no);
    if (!known_key(section, key))
      throw ParseError("unknown key \"" + section + "." + key + "\"", line_no);
    cfg.values_[section + "." + key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

const std::string& ExperimentConfig::get(const std::string& section,
                                         const std::string& key) const {
  auto it = values_.find(section + "." + key);
  if (it == values_.end())
    throw std::invalid_argument("unknown config key " + section + "." + key);
  return it->second;
}

double ExperimentConfig::get_double(const std::string& section,
                                    const std::string& key) const {
  const std::string& raw = get(section, key);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw ParseError("config key " + section + "." + key + ": \"" + raw +
                     "\" is not a number");
  }
  if (used != raw.size())
    throw ParseError("config key " + section + "." + key + ": \"" + raw +
                     "\" is not a number");
  return value;
}

long ExperimentConfig::get_long(const std::string& section,
                                const std::string& key) const {
  const std::string& raw = get(section, key);
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(raw, &used);
  } catch (const std::exception&) {
    throw ParseError("config key " + section + "." + key + ": \"" + raw +
                     "\" is not an integer");
  }
  if (used != raw.size())
    throw ParseError("config key " + section + "." + key + ": \"" + raw +
                     "\" is not an integer");
  return value;
}

bool ExperimentConfig::get_bool(const std::string& section,
                                const std::string& key) const {
  const std::string& raw = get(section, key);
  if (raw == "true" || raw == "1") return true;
  if (raw == "false" || raw == "0") return false;
  throw ParseError("config key " + section + "." + key + ": \"" + raw +
                   "\" is not a boolean");
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  const std::string& raw = get("run", "seeds");
  std::vector<std::uint64_t> seeds;
  std::string token;
  std::istringstream in(raw);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    try {
      seeds.push_back(std::stoull(token));
    } catch (const std::exception&) {
      throw ParseError("config key run.seeds: \"" + token + "\" is not a seed");
    }
  }
  if (seeds.empty()) throw ParseError("config key run.seeds: empty list");
  return seeds;
}

void ExperimentConfig::set(const std::string& section, const std::string& key,
                           std::string value) {
  if (!known_key(section, key))
    throw std::invalid_argument("unknown config key " + section + "." + key);
  values_[section + "." + key] = std::move(value);
}

std::string format_config_help() {
  std::string out = "Configuration keys (plain text, \"key = value\" under [section] headers):\n";
  std::string current;
  for (const ConfigEntry& entry : config_schema()) {
    if (current != entry.section) {
      current = entry.section;
      out += "\n[" + current + "]\n";
    }
    out += "  " + std::string(entry.key) + " = " + entry.def;
    out += "\n      " + std::string(entry.desc) + "\n";
  }
  return out;
}

}  // namespace wpn

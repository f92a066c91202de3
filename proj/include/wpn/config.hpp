#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wpn {

/// One schema row: where a key lives, its default, and what it means. The
/// parser, the defaults, and the help text all come from this single table.
struct ConfigEntry {
  const char* section;
  const char* key;
  const char* def;
  const char* desc;
};

const std::vector<ConfigEntry>& config_schema();

/// Plain-text "key = value" configuration with [section] headers and #
/// comments. Unknown sections or keys are rejected by name.
class ExperimentConfig {
 public:
  static ExperimentConfig defaults();
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);

  const std::string& get(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<std::uint64_t> seed_list() const;

  void set(const std::string& section, const std::string& key, std::string value);

 private:
  std::map<std::string, std::string> values_;  // "section.key" -> value
};

/// Help text enumerating every config key with its default and description.
std::string format_config_help();

}  // namespace wpn

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace resonate {

// Flat TOML-compatible key-value text: [section] headers, `key = value`,
// values are numbers, "strings", [number arrays] or true/false. Keys are
// addressed fully qualified ("system.params.beta0").
class Config {
 public:
  using Value = std::variant<double, std::string, std::vector<double>, bool>;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  std::string str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  // keys under `prefix.` with the prefix stripped, mapped to numbers
  std::map<std::string, double> number_map(const std::string& prefix) const;

 private:
  const Value& get(const std::string& key) const;
  std::map<std::string, Value> values_;
  std::string origin_;
};

}  // namespace resonate

#include "resonate/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// strip a # comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty() || raw.empty()) throw ConfigError(where + ": empty key or value");
    const std::string full = section.empty() ? key : section + "." + key;

    Value value;
    if (raw.front() == '"') {
      if (raw.size() < 2 || raw.back() != '"') {
        throw ConfigError(where + ": unterminated string");
      }
      value = raw.substr(1, raw.size() - 2);
    } else if (raw.front() == '[') {
      if (raw.back() != ']') throw ConfigError(where + ": unterminated array");
      std::vector<double> arr;
      std::string body = raw.substr(1, raw.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) arr.push_back(parse_number(item, where));
      }
      value = std::move(arr);
    } else if (raw == "true" || raw == "false") {
      value = (raw == "true");
    } else {
      value = parse_number(raw, where);
    }
    cfg.values_[full] = std::move(value);
  }
  return cfg;
}

const Config::Value& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
  return it->second;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

double Config::number(const std::string& key) const {
  const Value& v = get(key);
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw ConfigError(origin_ + ": key '" + key + "' is not a number");
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Config::integer(const std::string& key) const {
  const double d = number(key);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9) {
    throw ConfigError(origin_ + ": key '" + key + "' is not an integer");
  }
  return static_cast<int>(r);
}

int Config::integer_or(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Config::str(const std::string& key) const {
  const Value& v = get(key);
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError(origin_ + ": key '" + key + "' is not a string");
}

std::string Config::str_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Value& v = get(key);
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError(origin_ + ": key '" + key + "' is not a boolean");
}

std::vector<double> Config::numbers(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  if (const double* d = std::get_if<double>(&v)) return {*d};
  throw ConfigError(origin_ + ": key '" + key + "' is not an array");
}

std::map<std::string, double> Config::number_map(const std::string& prefix) const {
  std::map<std::string, double> out;
  const std::string p = prefix + ".";
  for (const auto& [key, value] : values_) {
    if (key.rfind(p, 0) != 0) continue;
    if (const double* d = std::get_if<double>(&value)) out[key.substr(p.size())] = *d;
  }
  return out;
}

}  // namespace resonate

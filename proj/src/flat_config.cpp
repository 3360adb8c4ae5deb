#include "ritzpen/flat_config.hpp"

#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ritzpen/errors.hpp"

namespace ritzpen {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  return v;
}

long long parse_ll(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
  return v;
}

}  // namespace

FlatConfig FlatConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

FlatConfig FlatConfig::parse_text(const std::string& text, const std::string& origin) {
  FlatConfig cfg;
  cfg.text_ = text;
  cfg.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!cfg.values_.emplace(key, value).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
  }
  return cfg;
}

std::string FlatConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string FlatConfig::get_string(const std::string& key) const { return raw(key); }

std::string FlatConfig::get_string_or(const std::string& key,
                                      const std::string& fallback) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key) const {
  return parse_double(key, raw(key));
}

double FlatConfig::get_double_or(const std::string& key, double fallback) const {
  consumed_.insert(key);
  return has(key) ? get_double(key) : fallback;
}

int FlatConfig::get_int(const std::string& key) const {
  const long long v = parse_ll(key, raw(key));
  if (v < INT_MIN || v > INT_MAX) throw ConfigError("key '" + key + "': out of int range");
  return static_cast<int>(v);
}

int FlatConfig::get_int_or(const std::string& key, int fallback) const {
  consumed_.insert(key);
  return has(key) ? get_int(key) : fallback;
}

bool FlatConfig::get_bool_or(const std::string& key, bool fallback) const {
  consumed_.insert(key);
  if (!has(key)) return fallback;
  const std::string v = values_.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a boolean");
}

std::vector<int> FlatConfig::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& part : split_commas(raw(key)))
    out.push_back(static_cast<int>(parse_ll(key, part)));
  return out;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& part : split_commas(raw(key)))
    out.push_back(parse_double(key, part));
  return out;
}

std::vector<std::uint64_t> FlatConfig::get_u64_list(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const std::string& part : split_commas(raw(key))) {
    const long long v = parse_ll(key, part);
    if (v < 0) throw ConfigError("key '" + key + "': seeds must be nonnegative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<std::string> FlatConfig::unknown_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (consumed_.count(key) == 0) out.push_back(key);
  return out;
}

}  // namespace ritzpen

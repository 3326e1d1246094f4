#include "hkt/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hkt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
  return v;
}

long parse_int(const std::string& s, const std::string& what) {
  long v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": '" + s + "' is not an integer");
  }
  return v;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (c.values_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string Config::get_string(const std::string& key, const std::optional<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  if (fallback) return *fallback;
  throw ConfigError(origin_ + ": missing required key '" + key + "'");
}

double Config::get_double(const std::string& key, std::optional<double> fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return parse_double(it->second, key);
  if (fallback) return *fallback;
  throw ConfigError(origin_ + ": missing required key '" + key + "'");
}

long Config::get_int(const std::string& key, std::optional<long> fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return parse_int(it->second, key);
  if (fallback) return *fallback;
  throw ConfigError(origin_ + ": missing required key '" + key + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::optional<std::vector<double>>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  std::vector<double> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_double(s, key));
  return out;
}

std::vector<long> Config::get_ints(const std::string& key, const std::optional<std::vector<long>>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  std::vector<long> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_int(s, key));
  return out;
}

void Config::require_only(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (!allowed.count(key)) throw ConfigError(origin_ + ": unknown key '" + key + "'");
  }
}

}  // namespace hkt

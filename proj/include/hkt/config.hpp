#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat "key = value" file. '#' starts a comment; blank lines are ignored;
// repeated keys are an error. Values keep their inner whitespace.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::optional<std::string>& fallback = {}) const;
  double get_double(const std::string& key, std::optional<double> fallback = {}) const;
  long get_int(const std::string& key, std::optional<long> fallback = {}) const;
  std::vector<double> get_doubles(const std::string& key, const std::optional<std::vector<double>>& fallback = {}) const;
  std::vector<long> get_ints(const std::string& key, const std::optional<std::vector<long>>& fallback = {}) const;

  // Throws ConfigError naming the first key outside `allowed`.
  void require_only(const std::set<std::string>& allowed) const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

// Comma separated list parsing shared with the CLI.
std::vector<std::string> split_list(const std::string& s);
double parse_double(const std::string& s, const std::string& what);
long parse_int(const std::string& s, const std::string& what);

}  // namespace hkt

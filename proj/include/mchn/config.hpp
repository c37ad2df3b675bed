#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mchn {

/// Invalid configuration; the message names the offending "section.key".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// INI-style configuration ("key = value" under [section] headers), addressed
/// as "section.key". Lists are comma separated.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  /// One of `choices`; the error lists them.
  std::string get_choice(const std::string& key, const std::vector<std::string>& choices,
                         const std::string& fallback) const;

  /// Throws on the first key not listed in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace mchn

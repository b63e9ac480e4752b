#pragma once

// Flat key = value configuration with typed accessors. Lines starting with
// '#' are comments. Command-line overrides are applied on top of the file.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdefl::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set_default(const std::string& key, const std::string& value) { values_.try_emplace(key, value); }
  /// "key=value"
  void apply_override(const std::string& kv);
  void merge(const Config& other);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// "a,b,c" or "lo:hi:step" (inclusive of hi up to rounding).
  std::vector<double> grid(const std::string& key) const;

  /// Rejects keys outside `allowed`.
  void check_keys(const std::set<std::string>& allowed, const std::string& command) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tdefl::cli

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tdefl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    c.values_[key] = trim(t.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::apply_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + kv + "' is not key=value");
  values_[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
  return it->second;
}

double Config::num(const std::string& key) const { return parse_double(key, str(key)); }

long Config::integer(const std::string& key) const {
  const double d = num(key);
  if (d != std::floor(d)) throw ConfigError("config: '" + key + "' expects an integer");
  return static_cast<long>(d);
}

bool Config::flag(const std::string& key) const {
  const std::string v = str(key);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> Config::grid(const std::string& key) const {
  const std::string v = str(key);
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError("config: '" + key + "' range must be lo:hi:step");
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const double step = parse_double(key, parts[2]);
    if (!(step > 0.0)) throw ConfigError("config: '" + key + "' step must be > 0");
    if (hi < lo) throw ConfigError("config: '" + key + "' range is empty");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(v);
  std::string p;
  while (std::getline(ss, p, ',')) {
    p = trim(p);
    if (!p.empty()) out.push_back(parse_double(key, p));
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' is an empty list");
  return out;
}

void Config::check_keys(const std::set<std::string>& allowed, const std::string& command) const {
  for (const auto& [k, v] : values_) {
    if (!allowed.count(k)) throw ConfigError("config: unknown key '" + k + "' for command '" + command + "'");
  }
}

std::string Config::dump() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
  return s;
}

}  // namespace tdefl::cli

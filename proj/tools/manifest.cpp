#include "manifest.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace tdefl::cli {

namespace {

std::string digest_hex(const unsigned char* md, unsigned int len) {
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 0xf];
  }
  return s;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("sha256: OpenSSL digest failed");
  }
  return digest_hex(md.data(), len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("sha256: cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

void write_atomic(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << data;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.values()) cfg[k] = v;
  j["config"] = cfg;
  j["seeds"] = seeds;
  j["wall_clock_seconds"] = wall_clock_seconds;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& [name, digest] : outputs) outs.push_back({{"file", name}, {"sha256", digest}});
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& dir) const { write_atomic(dir / "manifest.json", to_json()); }

Config config_from_manifest(const std::string& json_text, std::string* command) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("config") || !j["config"].is_object()) {
    throw ConfigError("manifest: missing \"config\" object");
  }
  Config c;
  for (const auto& [k, v] : j["config"].items()) {
    if (v.is_string()) {
      c.set(k, v.get<std::string>());
    } else if (v.is_number() || v.is_boolean()) {
      c.set(k, v.dump());
    } else {
      throw ConfigError("manifest: config value for '" + k + "' must be a scalar");
    }
  }
  if (command && j.contains("command") && j["command"].is_string()) *command = j["command"].get<std::string>();
  return c;
}

}  // namespace tdefl::cli

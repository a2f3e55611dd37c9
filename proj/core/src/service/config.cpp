#include "gutinstinct/service/config.hpp"

#include <charconv>
#include <fstream>

#include "gutinstinct/common/error.hpp"

namespace gutinstinct::service {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

void validate(const ApiConfig& config) {
  if (!(config.router_threshold > 0.0 && config.router_threshold < 1.0)) {
    invalid("router_threshold must lie in (0, 1)");
  }
  if (config.session_ttl <= Duration::zero()) invalid("session_ttl must be positive");
  if (config.session_gap <= Duration::zero()) invalid("session_gap must be positive");
  if (config.listen_port < 0 || config.listen_port > 65535) invalid("listen port out of range");
  if (config.listen_host.empty()) invalid("listen host must not be empty");
  if (config.data_path.empty()) invalid("data_path must not be empty");
}

ApiConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ApiConfig c;
  try {
    if (!j.is_object()) invalid("config must be a JSON object");
    if (j.contains("listen_address")) {
      const auto addr = j.at("listen_address").get<std::string>();
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) invalid("listen_address must be host:port");
      c.listen_host = addr.substr(0, colon);
      const auto port_text = std::string_view(addr).substr(colon + 1);
      int port = -1;
      const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
      if (ec != std::errc() || ptr != port_text.data() + port_text.size()) {
        invalid("listen_address has a bad port");
      }
      c.listen_port = port;
    }
    if (j.contains("data_path")) c.data_path = resolve(base_dir, j.at("data_path").get<std::string>());
    if (j.contains("session_ttl_seconds")) {
      c.session_ttl = std::chrono::seconds(j.at("session_ttl_seconds").get<std::int64_t>());
    }
    if (j.contains("router_threshold")) c.router_threshold = j.at("router_threshold").get<double>();
    if (j.contains("session_gap_seconds")) {
      c.session_gap = std::chrono::seconds(j.at("session_gap_seconds").get<std::int64_t>());
    }
    for (auto [key, field] : {std::pair{"experiments_file", &c.experiments_file},
                              std::pair{"mappings_file", &c.mappings_file},
                              std::pair{"topics_dir", &c.topics_dir}}) {
      if (j.contains(key) && !j.at(key).is_null()) {
        *field = resolve(base_dir, j.at(key).get<std::string>());
      }
    }
    if (j.contains("pseudonym_salt")) c.pseudonym_salt = j.at("pseudonym_salt").get<std::string>();
    if (j.contains("level2_public")) c.level2_public = j.at("level2_public").get<bool>();
    if (j.contains("password_hashing")) {
      const auto& p = j.at("password_hashing");
      c.password.opslimit = p.value("opslimit", c.password.opslimit);
      c.password.memlimit = p.value("memlimit", c.password.memlimit);
    }
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

ApiConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    invalid("cannot read config file " + file.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    invalid("config " + file.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, file.parent_path());
}

}  // namespace gutinstinct::service

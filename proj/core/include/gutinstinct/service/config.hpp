#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gutinstinct/common/time.hpp"
#include "gutinstinct/service/auth.hpp"
#include "gutinstinct/service/platform.hpp"

namespace gutinstinct::service {

/// Service configuration. The JSON form uses the same names, with
/// "listen_address" as "host:port" and durations in whole seconds
/// ("session_ttl_seconds", "session_gap_seconds").
struct ApiConfig {
  std::string listen_host{"127.0.0.1"};
  int listen_port{8080};
  std::filesystem::path data_path{"var"};
  Duration session_ttl{std::chrono::hours(24)};
  double router_threshold{router::kDefaultThreshold};
  Duration session_gap{experiment::kDefaultSessionGap};
  std::optional<std::filesystem::path> experiments_file;
  std::optional<std::filesystem::path> mappings_file;
  std::optional<std::filesystem::path> topics_dir;
  std::string pseudonym_salt{"gutinstinct-export"};
  /// Level-2 responses are readable by every participant when true;
  /// otherwise only by their author and moderators.
  bool level2_public{true};
  PasswordParams password{PasswordParams::interactive()};

  PlatformOptions platform_options() const {
    return PlatformOptions{router_threshold, session_gap, pseudonym_salt};
  }
};

/// Throws Error{ConfigInvalid}.
void validate(const ApiConfig& config);

/// Relative paths are resolved against `base_dir`. Validates the result.
ApiConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ApiConfig load_config(const std::filesystem::path& file);

}  // namespace gutinstinct::service

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"

namespace gutinstinct::service {

/// Argon2id cost parameters (libsodium crypto_pwhash).
struct PasswordParams {
  unsigned long long opslimit;
  std::size_t memlimit;

  static PasswordParams interactive() noexcept;
  /// Cheapest parameters libsodium accepts. Tests only.
  static PasswordParams minimum() noexcept;
};

std::string hash_password(std::string_view password, const PasswordParams& params);
bool verify_password(std::string_view stored_hash, std::string_view password);

/// 128 bits from the OS CSPRNG, URL-safe base64 without padding (22 chars).
std::string random_token();

struct SessionToken {
  std::string token;
  UserId user_id;
  Timestamp expires_at;
};

/// In-memory bearer tokens. Thread-safe.
class SessionRegistry {
 public:
  SessionRegistry(std::shared_ptr<const Clock> clock, Duration ttl);

  SessionToken issue(UserId user_id);
  /// nullopt for unknown or expired tokens; expired ones are dropped.
  std::optional<UserId> validate(std::string_view token);
  void revoke(std::string_view token);

 private:
  std::shared_ptr<const Clock> clock_;
  Duration ttl_;
  std::mutex mutex_;
  std::map<std::string, SessionToken, std::less<>> sessions_;
};

}  // namespace gutinstinct::service

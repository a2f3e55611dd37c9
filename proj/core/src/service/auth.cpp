#include "gutinstinct/service/auth.hpp"

#include <sodium.h>

#include <array>
#include <stdexcept>

#include "gutinstinct/common/error.hpp"

namespace gutinstinct::service {
namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) {
    throw std::runtime_error("libsodium failed to initialize");
  }
}

}  // namespace

PasswordParams PasswordParams::interactive() noexcept {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

PasswordParams PasswordParams::minimum() noexcept {
  return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN};
}

std::string hash_password(std::string_view password, const PasswordParams& params) {
  ensure_sodium();
  std::array<char, crypto_pwhash_STRBYTES> out{};
  if (crypto_pwhash_str(out.data(), password.data(), password.size(), params.opslimit,
                        params.memlimit) != 0) {
    throw Error(ErrorCode::IoError, "password hashing ran out of memory");
  }
  return std::string(out.data());
}

bool verify_password(std::string_view stored_hash, std::string_view password) {
  ensure_sodium();
  const std::string hash(stored_hash);
  return crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
}

std::string random_token() {
  ensure_sodium();
  std::array<unsigned char, 16> bytes{};
  randombytes_buf(bytes.data(), bytes.size());
  constexpr int kVariant = sodium_base64_VARIANT_URLSAFE_NO_PADDING;
  std::array<char, sodium_base64_ENCODED_LEN(16, kVariant)> out{};
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
  return std::string(out.data());
}

SessionRegistry::SessionRegistry(std::shared_ptr<const Clock> clock, Duration ttl)
    : clock_(std::move(clock)), ttl_(ttl) {
  if (ttl_ <= Duration::zero()) {
    throw Error(ErrorCode::ConfigInvalid, "session ttl must be positive");
  }
}

SessionToken SessionRegistry::issue(UserId user_id) {
  SessionToken session{random_token(), user_id, clock_->now() + ttl_};
  std::lock_guard lock(mutex_);
  sessions_.insert_or_assign(session.token, session);
  return session;
}

std::optional<UserId> SessionRegistry::validate(std::string_view token) {
  const Timestamp now = clock_->now();
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(token);
  if (it == sessions_.end()) {
    return std::nullopt;
  }
  if (now >= it->second.expires_at) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second.user_id;
}

void SessionRegistry::revoke(std::string_view token) {
  std::lock_guard lock(mutex_);
  if (const auto it = sessions_.find(token); it != sessions_.end()) {
    sessions_.erase(it);
  }
}

}  // namespace gutinstinct::service

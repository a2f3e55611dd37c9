#pragma once

#include <memory>
#include <string>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/service/auth.hpp"
#include "gutinstinct/service/platform.hpp"

namespace gutinstinct::service {

/// HTTP status for every ErrorCode: 400 validation, 401 authentication,
/// 403 role, 404 unknown id, 409 conflict, 500 internal.
int http_status(ErrorCode code) noexcept;

struct ServerOptions {
  Duration session_ttl{std::chrono::hours(24)};
  bool level2_public{true};
  PasswordParams password{PasswordParams::interactive()};
};

/// JSON-over-HTTP surface of the platform. Every route except register and
/// login needs "Authorization: Bearer <token>"; /api/admin/* additionally
/// needs the moderator role. Errors come back as
/// {"error": {"code": "NOT_QUALIFIED", "message": "..."}}.
class ApiServer {
 public:
  ApiServer(Platform& platform, ServerOptions options);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns the bound
  /// port; throws Error{AddressInUse} on failure.
  int bind(const std::string& host, int port);
  /// Serves on the bound socket until stop().
  void run();
  /// bind() + run() on a background thread; returns once accepting.
  int start(const std::string& host, int port);
  void stop();

  SessionRegistry& sessions() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gutinstinct::service

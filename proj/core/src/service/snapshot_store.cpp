#include "gutinstinct/service/snapshot_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/service/codec.hpp"

namespace gutinstinct::service {
namespace {

[[noreturn]] void io_error(const std::string& what, const std::filesystem::path& path) {
  throw Error(ErrorCode::IoError, what + " " + path.string() + ": " + std::strerror(errno));
}

void write_file_synced(const std::filesystem::path& path, const std::string& bytes) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    io_error("cannot open", path);
  }
  std::size_t written = 0;
  while (written < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_error("cannot write", path);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_error("cannot fsync", path);
  }
  if (::close(fd) != 0) {
    io_error("cannot close", path);
  }
}

}  // namespace

FileSnapshotStore::FileSnapshotStore(std::filesystem::path data_dir)
    : dir_(std::move(data_dir)), path_(dir_ / "store.json") {}

void FileSnapshotStore::save(const State& state) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
  }
  const std::string bytes = canonical_dump(encode_state(state));
  const auto tmp = std::filesystem::path(path_).concat(".tmp");
  write_file_synced(tmp, bytes);
  if (before_rename_) {
    before_rename_();
  }
  std::filesystem::rename(tmp, path_, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot rename snapshot into place: " + ec.message());
  }
  // Persist the rename itself.
  const int dfd = ::open(dir_.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

std::optional<State> FileSnapshotStore::load() const {
  if (!std::filesystem::exists(path_)) {
    return std::nullopt;
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read " + path_.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaError,
                "snapshot " + path_.string() + " is not valid JSON: " + ex.what());
  }
  return decode_state(j);
}

}  // namespace gutinstinct::service

#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "gutinstinct/service/state.hpp"

namespace gutinstinct::service {

/// Durable home of the State. Implementations must make save() atomic.
class SnapshotStore {
 public:
  virtual ~SnapshotStore() = default;
  virtual void save(const State& state) = 0;
  /// nullopt when nothing has been saved yet.
  virtual std::optional<State> load() const = 0;
};

/// `<dir>/store.json`, written as canonical JSON to `store.json.tmp`,
/// flushed, then renamed over the previous snapshot.
class FileSnapshotStore final : public SnapshotStore {
 public:
  explicit FileSnapshotStore(std::filesystem::path data_dir);

  void save(const State& state) override;
  std::optional<State> load() const override;

  const std::filesystem::path& snapshot_path() const noexcept { return path_; }

  /// Runs after the temporary file is complete and before the rename.
  /// Tests throw from it to simulate a crash at that point.
  void set_before_rename_hook(std::function<void()> hook) { before_rename_ = std::move(hook); }

 private:
  std::filesystem::path dir_;
  std::filesystem::path path_;
  std::function<void()> before_rename_;
};

}  // namespace gutinstinct::service

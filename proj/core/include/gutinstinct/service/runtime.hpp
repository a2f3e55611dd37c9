#pragma once

#include <memory>

#include "gutinstinct/service/config.hpp"
#include "gutinstinct/service/platform.hpp"
#include "gutinstinct/service/snapshot_store.hpp"

namespace gutinstinct::service {

struct Runtime {
  ApiConfig config;
  std::shared_ptr<FileSnapshotStore> store;
  std::unique_ptr<Platform> platform;
};

/// Opens the store under config.data_path (an absent snapshot starts empty,
/// a corrupt one throws SchemaError). With `apply_config_seeds` the seed
/// files named by the config are applied in order topics, mappings,
/// experiments, and the two default experiments are defined when the store
/// has none.
std::unique_ptr<Runtime> open_runtime(const ApiConfig& config,
                                      std::shared_ptr<const Clock> clock = nullptr,
                                      bool apply_config_seeds = true);

}  // namespace gutinstinct::service

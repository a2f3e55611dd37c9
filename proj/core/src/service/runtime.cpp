#include "gutinstinct/service/runtime.hpp"

#include "gutinstinct/service/seed.hpp"

namespace gutinstinct::service {

std::unique_ptr<Runtime> open_runtime(const ApiConfig& config, std::shared_ptr<const Clock> clock,
                                      bool apply_config_seeds) {
  validate(config);
  if (!clock) {
    clock = std::make_shared<SystemClock>();
  }
  auto runtime = std::make_unique<Runtime>();
  runtime->config = config;
  runtime->store = std::make_shared<FileSnapshotStore>(config.data_path);
  State initial = runtime->store->load().value_or(State{});
  runtime->platform = std::make_unique<Platform>(std::move(initial), std::move(clock),
                                                 config.platform_options(), runtime->store);
  Platform& platform = *runtime->platform;

  if (apply_config_seeds) {
    if (config.topics_dir) {
      auto seed = load_topics_dir(*config.topics_dir);
      platform.install_topics(std::move(seed.topics), std::move(seed.corpora));
    }
    if (config.mappings_file) {
      platform.seed_mappings(load_mappings_file(*config.mappings_file));
    }
    if (config.experiments_file) {
      platform.define_experiments(load_experiments_file(*config.experiments_file));
    }
    const bool has_experiments =
        platform.read([](const State& s) { return !s.experiments.data().definitions.empty(); });
    if (!has_experiments) {
      platform.define_experiments(experiment::default_experiments());
    }
  }
  return runtime;
}

}  // namespace gutinstinct::service

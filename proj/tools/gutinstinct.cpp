// gutinstinct: serve the platform API and administer its data store.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/service/auth.hpp"
#include "gutinstinct/service/codec.hpp"
#include "gutinstinct/service/http_api.hpp"
#include "gutinstinct/service/runtime.hpp"
#include "gutinstinct/service/seed.hpp"

namespace fs = std::filesystem;
using namespace gutinstinct;

namespace {

struct GlobalOptions {
  std::string config_file;
  std::string data_dir;
};

service::ApiConfig resolve_config(const GlobalOptions& g) {
  service::ApiConfig config;
  if (!g.config_file.empty()) {
    config = service::load_config(g.config_file);
  }
  if (!g.data_dir.empty()) {
    config.data_path = g.data_dir;
  }
  return config;
}

std::unique_ptr<service::Runtime> open_store(const GlobalOptions& g) {
  return service::open_runtime(resolve_config(g), nullptr, /*apply_config_seeds=*/false);
}

int serve(const GlobalOptions& g) {
  const auto config = resolve_config(g);

  // Signals are collected by sigwait below; block them before any thread starts.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto runtime = service::open_runtime(config);
  service::ApiServer server(*runtime->platform,
                            {config.session_ttl, config.level2_public, config.password});
  const int port = server.bind(config.listen_host, config.listen_port);
  std::cout << "gutinstinct listening on " << config.listen_host << ':' << port << std::endl;
  std::thread worker([&] { server.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  std::cout << "shutting down" << std::endl;
  server.stop();
  worker.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gut Instinct citizen-science platform: API server and admin tool"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("-c,--config", g.config_file, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("-d,--data", g.data_dir, "Data directory holding store.json (overrides config)");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON API");

  std::string topics_dir;
  auto* seed_topics = app.add_subcommand("seed-topics", "Install topic documents and corpora");
  seed_topics->add_option("dir", topics_dir, "Topics directory")->required();

  std::string mappings_file;
  auto* seed_mappings = app.add_subcommand("seed-mappings", "Load the manual tag->topic table");
  seed_mappings->add_option("file", mappings_file, "tag<TAB>topic_id file")->required();

  std::string experiments_file;
  auto* seed_experiments = app.add_subcommand("seed-experiments", "Load experiment definitions");
  seed_experiments->add_option("file", experiments_file, "Experiments JSON")->required();

  auto* rebuild = app.add_subcommand("rebuild-model",
                                     "Rebuild the topic model, write model.json, re-route questions");

  std::string export_id;
  std::string export_out;
  auto* export_cmd = app.add_subcommand("export", "Export an experiment dataset as CSV");
  export_cmd->add_option("experiment_id", export_id)->required();
  export_cmd->add_option("--out", export_out, "Output file (stdout when omitted)");

  auto* list_unmapped = app.add_subcommand("list-unmapped", "Show the unmapped tag queue");

  std::string approve_tag;
  std::string approve_topic;
  std::uint64_t curator = 0;
  auto* approve = app.add_subcommand("approve-mapping", "Map a tag to a topic as a curator");
  approve->add_option("tag", approve_tag)->required();
  approve->add_option("topic", approve_topic)->required();
  approve->add_option("--curator", curator, "Moderator user id")->required();

  std::string user_name;
  std::string user_password;
  bool moderator = false;
  auto* add_user = app.add_subcommand("add-user", "Create an account (e.g. the first moderator)");
  add_user->add_option("display_name", user_name)->required();
  add_user->add_option("--password", user_password)->required();
  add_user->add_flag("--moderator", moderator);

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve_cmd->parsed()) {
      return serve(g);
    }
    auto runtime = open_store(g);
    service::Platform& platform = *runtime->platform;

    if (seed_topics->parsed()) {
      auto seed = service::load_topics_dir(topics_dir);
      const auto count = seed.topics.size();
      platform.install_topics(std::move(seed.topics), std::move(seed.corpora));
      std::cout << "installed " << count << " topics\n";
    } else if (seed_mappings->parsed()) {
      const auto entries = service::load_mappings_file(mappings_file);
      platform.seed_mappings(entries);
      std::cout << "seeded " << entries.size() << " mappings\n";
    } else if (seed_experiments->parsed()) {
      auto defs = service::load_experiments_file(experiments_file);
      const auto count = defs.size();
      platform.define_experiments(std::move(defs));
      std::cout << "defined " << count << " experiments\n";
    } else if (rebuild->parsed()) {
      platform.rebuild_model();
      const auto model = platform.model();
      if (!model) {
        throw Error(ErrorCode::EmptyCorpus, "no usable corpus; seed topics first");
      }
      const fs::path out = runtime->config.data_path / "model.json";
      std::ofstream(out) << router::model_to_json(*model).dump(2) << '\n';
      const auto rerouted = platform.reroute_unrouted();
      std::cout << "model: " << model->vocabulary().size() << " terms, "
                << model->centroids().size() << " topics -> " << out.string() << "\n"
                << "re-routed " << rerouted << " questions\n";
    } else if (export_cmd->parsed()) {
      const std::string csv = platform.export_dataset(export_id);
      if (export_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(export_out, std::ios::binary);
        out << csv;
        if (!out) {
          throw Error(ErrorCode::IoError, "cannot write " + export_out);
        }
      }
    } else if (list_unmapped->parsed()) {
      for (const auto& e : platform.unmapped()) {
        std::cout << e.canonical_tag << '\t' << e.occurrence_count << '\t'
                  << e.example_question_id.value << '\n';
      }
    } else if (approve->parsed()) {
      const auto mapping = platform.approve_mapping(UserId{curator}, approve_tag, approve_topic);
      std::cout << "mapped '" << approve_tag << "' -> " << mapping.topic_id << '\n';
    } else if (add_user->parsed()) {
      const auto user = platform.register_user(
          user_name, moderator ? board::Role::moderator : board::Role::participant,
          service::hash_password(user_password, runtime->config.password));
      std::cout << user.user_id.value << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

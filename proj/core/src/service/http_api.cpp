#include "gutinstinct/service/http_api.hpp"

#include <httplib.h>

#include <charconv>
#include <thread>

#include "gutinstinct/service/codec.hpp"

namespace gutinstinct::service {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyText:
    case ErrorCode::NoTags:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::UnknownKind:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyCorpus:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::SeedParseError:
      return 400;
    case ErrorCode::Unauthenticated:
    case ErrorCode::InvalidCredentials:
      return 401;
    case ErrorCode::NotAuthorized:
      return 403;
    case ErrorCode::UnknownUser:
    case ErrorCode::UnknownQuestion:
    case ErrorCode::UnknownParent:
    case ErrorCode::UnknownTopic:
    case ErrorCode::UnknownSection:
    case ErrorCode::UnknownItem:
    case ErrorCode::UnknownExperiment:
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::NotQualified:
    case ErrorCode::AnswerLocked:
    case ErrorCode::CrossQuestionParent:
    case ErrorCode::DuplicateId:
      return 409;
    case ErrorCode::ModelNotBuilt:
    case ErrorCode::SchemaError:
    case ErrorCode::IoError:
    case ErrorCode::AddressInUse:
      return 500;
  }
  return 500;
}

namespace {

json error_body(std::string_view code, std::string_view message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) {
    return json::object();
  }
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) {
      throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    }
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

std::uint64_t path_id(const httplib::Request& req, std::size_t group) {
  const std::string& text = req.matches[group].str();
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::NotFound, "bad id '" + text + "'");
  }
  return value;
}

std::string required_string(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& value, const char* key) {
  if (!value.is_array()) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a list");
  }
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) {
      throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

/// Participant-facing topic: no correct_index ever, and an item's expert
/// insight only once this user has answered it.
json topic_view(const learning::Topic& topic, const learning::ProgressRecord* progress,
                bool moderator) {
  if (moderator) {
    return json(topic);
  }
  json quiz = json::array();
  for (const auto& item : topic.quiz) {
    json entry{{"item_id", item.item_id}, {"prompt", item.prompt}, {"options", item.options}};
    if (progress != nullptr) {
      if (const auto it = progress->quiz_answers.find(item.item_id);
          it != progress->quiz_answers.end()) {
        entry["your_answer"] = {{"chosen_index", it->second.chosen_index},
                                {"correct", it->second.correct}};
        entry["expert_insight"] = item.expert_insight;
      }
    }
    quiz.push_back(std::move(entry));
  }
  json view{{"topic_id", topic.topic_id},
            {"title", topic.title},
            {"sections", topic.sections},
            {"quiz", std::move(quiz)}};
  if (progress != nullptr) {
    view["viewed_sections"] = progress->viewed_sections;
  }
  return view;
}

}  // namespace

struct ApiServer::Impl {
  Impl(Platform& p, ServerOptions o)
      : platform(p),
        options(o),
        sessions(p.shared_clock(), o.session_ttl) {
    // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which lets a
    // second server bind a port that is already serving.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
  }

  Platform& platform;
  ServerOptions options;
  SessionRegistry sessions;
  httplib::Server server;
  std::thread thread;
  bool bound{false};

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const Error& e) {
        send_json(res, http_status(e.code()), error_body(code_name(e.code()), e.what()));
      } catch (const json::exception& e) {
        send_json(res, 400, error_body(code_name(ErrorCode::InvalidArgument), e.what()));
      } catch (const std::exception& e) {
        send_json(res, 500, error_body("INTERNAL", e.what()));
      }
    };
  }

  board::UserAccount authenticate(const httplib::Request& req) {
    const std::string header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.size() <= kBearer.size() || header.compare(0, kBearer.size(), kBearer) != 0) {
      throw Error(ErrorCode::Unauthenticated, "missing bearer token");
    }
    const auto user_id = sessions.validate(std::string_view(header).substr(kBearer.size()));
    if (!user_id) {
      throw Error(ErrorCode::Unauthenticated, "invalid or expired token");
    }
    try {
      return platform.user(*user_id);
    } catch (const Error&) {
      throw Error(ErrorCode::Unauthenticated, "token user no longer exists");
    }
  }

  board::UserAccount authenticate_moderator(const httplib::Request& req) {
    board::UserAccount user = authenticate(req);
    if (!user.is_moderator()) {
      throw Error(ErrorCode::NotAuthorized, "moderator role required");
    }
    return user;
  }

  json session_body(const SessionToken& token, const board::UserAccount& user) {
    return json{{"token", token.token}, {"expires_at", to_millis(token.expires_at)}, {"user", user}};
  }

  json question_detail(QuestionId id, const board::UserAccount& viewer) {
    return platform.read([&](const State& s) {
      const board::Question& q = s.board.question(id);
      if (q.hidden && !viewer.is_moderator()) {
        throw Error(ErrorCode::UnknownQuestion, "unknown question " + to_string(id));
      }
      std::uint64_t yes = 0;
      std::uint64_t no = 0;
      for (const auto& [key, r] : s.board.data().level1) {
        if (key.first == id) (r.qualifies() ? yes : no)++;
      }
      json level2 = json::array();
      for (const auto& r : s.board.level2_responses(id)) {
        if (options.level2_public || viewer.is_moderator() || r.user_id == viewer.user_id) {
          level2.push_back(r);
        }
      }
      const board::Level1Response* mine = s.board.level1_response(id, viewer.user_id);
      return json{{"question", q},
                  {"level1_counts", {{"yes", yes}, {"no", no}}},
                  {"my_level1", mine ? json(board::answer_name(mine->answer)) : json(nullptr)},
                  {"qualified", mine != nullptr && mine->qualifies()},
                  {"level2_responses", std::move(level2)},
                  {"comments", s.board.comments(id)}};
    });
  }

  void register_routes() {
    using httplib::Request;
    using httplib::Response;

    server.Post("/api/register", guarded([this](const Request& req, Response& res) {
      const json body = parse_body(req);
      const std::string name = required_string(body, "display_name");
      const std::string password = required_string(body, "password");
      if (password.empty()) {
        throw Error(ErrorCode::EmptyText, "password must not be empty");
      }
      const auto user = platform.register_user(name, board::Role::participant,
                                               hash_password(password, options.password));
      platform.log_event(user.user_id, experiment::EventKind::login, std::nullopt);
      send_json(res, 201, session_body(sessions.issue(user.user_id), user));
    }));

    server.Post("/api/login", guarded([this](const Request& req, Response& res) {
      const json body = parse_body(req);
      const auto id_it = body.find("user_id");
      if (id_it == body.end() || !id_it->is_number_unsigned()) {
        throw Error(ErrorCode::InvalidArgument, "field 'user_id' must be a user id");
      }
      const UserId user_id{id_it->get<std::uint64_t>()};
      const std::string password = required_string(body, "password");
      const auto hash = platform.password_hash(user_id);
      if (!hash || !verify_password(*hash, password)) {
        throw Error(ErrorCode::InvalidCredentials, "unknown user or wrong password");
      }
      const auto user = platform.user(user_id);
      platform.log_event(user_id, experiment::EventKind::login, std::nullopt);
      send_json(res, 200, session_body(sessions.issue(user_id), user));
    }));

    server.Get("/api/questions", guarded([this](const Request& req, Response& res) {
      const auto viewer = authenticate(req);
      board::QuestionFilter filter;
      if (req.has_param("topic")) filter.topic_id = req.get_param_value("topic");
      if (req.has_param("tag")) filter.tag = req.get_param_value("tag");
      if (req.has_param("author")) {
        const std::string a = req.get_param_value("author");
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
        if (ec != std::errc() || ptr != a.data() + a.size()) {
          throw Error(ErrorCode::InvalidArgument, "author must be a user id");
        }
        filter.author_id = UserId{v};
      }
      filter.include_hidden =
          viewer.is_moderator() && req.get_param_value("include_hidden") == "true";
      board::SortOrder sort = board::SortOrder::newest;
      if (req.has_param("sort")) {
        const auto s = req.get_param_value("sort");
        if (s == "top") {
          sort = board::SortOrder::top;
        } else if (s != "newest") {
          throw Error(ErrorCode::InvalidArgument, "sort must be 'newest' or 'top'");
        }
      }
      const auto questions = platform.list_questions(filter, sort);
      platform.log_event(viewer.user_id, experiment::EventKind::board_view, std::nullopt);
      send_json(res, 200, json{{"questions", questions}});
    }));

    server.Post("/api/questions", guarded([this](const Request& req, Response& res) {
      const auto author = authenticate(req);
      const json body = parse_body(req);
      const auto tags_it = body.find("tags");
      const auto tags =
          tags_it == body.end() ? std::vector<std::string>{} : string_list(*tags_it, "tags");
      const auto q = platform.create_question(author.user_id, required_string(body, "level1_text"),
                                              required_string(body, "level2_text"), tags);
      send_json(res, 201, json(q));
    }));

    server.Get(R"(/api/questions/(\d+))", guarded([this](const Request& req, Response& res) {
      const auto viewer = authenticate(req);
      send_json(res, 200, question_detail(QuestionId{path_id(req, 1)}, viewer));
    }));

    server.Patch(R"(/api/questions/(\d+))", guarded([this](const Request& req, Response& res) {
      const auto editor = authenticate(req);
      const json body = parse_body(req);
      std::optional<std::vector<std::string>> tags;
      if (const auto it = body.find("tags"); it != body.end() && !it->is_null()) {
        tags = string_list(*it, "tags");
      }
      const auto q = platform.edit_question(editor.user_id, QuestionId{path_id(req, 1)},
                                            optional_string(body, "level1_text"),
                                            optional_string(body, "level2_text"), std::move(tags));
      send_json(res, 200, json(q));
    }));

    server.Delete(R"(/api/questions/(\d+))", guarded([this](const Request& req, Response& res) {
      const auto mod = authenticate(req);
      const auto q = platform.hide_question(mod.user_id, QuestionId{path_id(req, 1)}, true);
      send_json(res, 200, json(q));
    }));

    server.Post(R"(/api/questions/(\d+)/level1)", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      const auto answer = board::parse_answer(required_string(body, "answer"));
      const auto r = platform.answer_level1(user.user_id, QuestionId{path_id(req, 1)}, answer);
      json out = r;
      out["qualified"] = r.qualifies();
      send_json(res, 200, out);
    }));

    server.Post(R"(/api/questions/(\d+)/level2)", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      const auto r = platform.answer_level2(user.user_id, QuestionId{path_id(req, 1)},
                                            required_string(body, "body"));
      send_json(res, 201, json(r));
    }));

    server.Post(R"(/api/questions/(\d+)/comments)", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      std::optional<CommentId> parent;
      if (const auto it = body.find("parent_comment_id"); it != body.end() && !it->is_null()) {
        if (!it->is_number_unsigned()) {
          throw Error(ErrorCode::InvalidArgument, "parent_comment_id must be a comment id");
        }
        parent = CommentId{it->get<std::uint64_t>()};
      }
      const auto c = platform.add_comment(user.user_id, QuestionId{path_id(req, 1)},
                                          required_string(body, "body"), parent);
      send_json(res, 201, json(c));
    }));

    server.Post(R"(/api/questions/(\d+)/vote)", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      const auto direction = board::parse_direction(required_string(body, "direction"));
      const QuestionId id{path_id(req, 1)};
      const auto score = platform.cast_vote(user.user_id, id, direction);
      send_json(res, 200, json{{"question_id", id.value}, {"score", score}});
    }));

    server.Get("/api/topics", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      json topics = platform.read([&](const State& s) {
        json out = json::array();
        for (const auto& [id, topic] : s.learning.topics()) {
          out.push_back(topic_view(topic, s.learning.progress(user.user_id, id), user.is_moderator()));
        }
        return out;
      });
      send_json(res, 200, json{{"topics", std::move(topics)}});
    }));

    server.Get(R"(/api/topics/([A-Za-z0-9_\-]+))", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const TopicId id = req.matches[1].str();
      json view = platform.read([&](const State& s) {
        return topic_view(s.learning.get_topic(id), s.learning.progress(user.user_id, id),
                          user.is_moderator());
      });
      send_json(res, 200, view);
    }));

    server.Get(R"(/api/topics/([A-Za-z0-9_\-]+)/progress)",
               guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      send_json(res, 200, json(platform.progress_summary(user.user_id, req.matches[1].str())));
    }));

    server.Post(R"(/api/topics/([A-Za-z0-9_\-]+)/sections/([^/]+)/view)",
                guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const auto record = platform.record_view(user.user_id, req.matches[1].str(), req.matches[2].str());
      send_json(res, 200, json(record));
    }));

    server.Post(R"(/api/topics/([A-Za-z0-9_\-]+)/quiz/([^/]+)/answer)",
                guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      const auto it = body.find("chosen_index");
      if (it == body.end() || !it->is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, "field 'chosen_index' must be an integer");
      }
      if (it->get<std::int64_t>() < 0) {
        throw Error(ErrorCode::IndexOutOfRange, "chosen option out of range");
      }
      const auto feedback = platform.answer_quiz(user.user_id, req.matches[1].str(),
                                                 req.matches[2].str(), it->get<std::size_t>());
      send_json(res, 200,
                json{{"correct", feedback.correct}, {"expert_insight", feedback.expert_insight}});
    }));

    server.Post("/api/events", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      const json body = parse_body(req);
      const auto kind = experiment::parse_kind(required_string(body, "kind"));
      auto subject = optional_string(body, "subject_id");
      const auto topic = optional_string(body, "topic_id");
      if (kind == experiment::EventKind::section_view && topic && subject) {
        // A section view with a topic also advances learning progress.
        platform.record_view(user.user_id, *topic, *subject);
        send_json(res, 201, json{{"recorded", true}});
        return;
      }
      std::optional<Timestamp> at;
      if (const auto it = body.find("at"); it != body.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
          throw Error(ErrorCode::InvalidArgument, "field 'at' must be epoch milliseconds");
        }
        at = from_millis(it->get<std::int64_t>());
      }
      const auto event = platform.log_event(user.user_id, kind, std::move(subject), at);
      send_json(res, 201, json(event));
    }));

    server.Get(R"(/api/me/assignment/([^/]+))", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      send_json(res, 200, json(platform.assign(user.user_id, req.matches[1].str())));
    }));

    server.Get("/api/me/metrics", guarded([this](const Request& req, Response& res) {
      const auto user = authenticate(req);
      send_json(res, 200, json(platform.compute_metrics(user.user_id)));
    }));

    server.Get("/api/tags/route", guarded([this](const Request& req, Response& res) {
      authenticate(req);
      const auto result =
          platform.preview_route(req.get_param_value("tag"), req.get_param_value("context"));
      send_json(res, 200, json(result));
    }));

    server.Get(R"(/api/admin/export/([^/]+))", guarded([this](const Request& req, Response& res) {
      authenticate_moderator(req);
      res.status = 200;
      res.set_content(platform.export_dataset(req.matches[1].str()), "text/csv; charset=utf-8");
    }));

    server.Post("/api/admin/mappings", guarded([this](const Request& req, Response& res) {
      const auto mod = authenticate_moderator(req);
      const json body = parse_body(req);
      const std::string tag = required_string(body, "tag");
      const auto mapping =
          platform.approve_mapping(mod.user_id, tag, required_string(body, "topic_id"));
      json out = mapping;
      out["tag"] = tag;
      send_json(res, 200, out);
    }));

    server.Get("/api/admin/unmapped", guarded([this](const Request& req, Response& res) {
      authenticate_moderator(req);
      send_json(res, 200, json{{"unmapped", platform.unmapped()}});
    }));

    server.set_error_handler([](const Request&, Response& res) {
      if (res.body.empty()) {
        send_json(res, res.status, error_body(code_name(ErrorCode::NotFound), "no such route"));
      }
    });
  }
};

ApiServer::ApiServer(Platform& platform, ServerOptions options)
    : impl_(std::make_unique<Impl>(platform, options)) {
  impl_->register_routes();
}

ApiServer::~ApiServer() { stop(); }

SessionRegistry& ApiServer::sessions() noexcept { return impl_->sessions; }

int ApiServer::bind(const std::string& host, int port) {
  int bound_port = -1;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound_port = port;
  }
  if (bound_port <= 0) {
    throw Error(ErrorCode::AddressInUse, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound_port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

int ApiServer::start(const std::string& host, int port) {
  const int bound_port = bind(host, port);
  impl_->thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return bound_port;
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) {
    impl_->thread.join();
  }
}

}  // namespace gutinstinct::service

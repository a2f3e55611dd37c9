#include "gutinstinct/service/codec.hpp"

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/common/hash.hpp"

using nlohmann::json;

namespace gutinstinct {
namespace {

json ts(Timestamp t) { return to_millis(t); }
Timestamp get_ts(const json& j, const char* key) { return from_millis(j.at(key).get<std::int64_t>()); }

template <typename Tag>
Id<Tag> get_id(const json& j, const char* key) {
  return Id<Tag>{j.at(key).get<std::uint64_t>()};
}

json opt_string(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> get_opt_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<std::string>();
}

[[noreturn]] void bad_enum(std::string_view what, std::string_view value) {
  throw Error(ErrorCode::InvalidArgument,
              "invalid " + std::string(what) + " '" + std::string(value) + "'");
}

}  // namespace

namespace board {

std::string_view role_name(Role r) noexcept {
  return r == Role::moderator ? "moderator" : "participant";
}
Role parse_role(std::string_view s) {
  if (s == "participant") return Role::participant;
  if (s == "moderator") return Role::moderator;
  bad_enum("role", s);
}
std::string_view answer_name(Level1Answer a) noexcept { return a == Level1Answer::yes ? "yes" : "no"; }
Level1Answer parse_answer(std::string_view s) {
  if (s == "yes") return Level1Answer::yes;
  if (s == "no") return Level1Answer::no;
  bad_enum("answer", s);
}
std::string_view direction_name(VoteDirection d) noexcept {
  return d == VoteDirection::up ? "up" : "down";
}
VoteDirection parse_direction(std::string_view s) {
  if (s == "up") return VoteDirection::up;
  if (s == "down") return VoteDirection::down;
  bad_enum("vote direction", s);
}

void to_json(json& j, const UserAccount& v) {
  j = json{{"user_id", v.user_id.value},
           {"display_name", v.display_name},
           {"role", role_name(v.role)},
           {"created_at", ts(v.created_at)}};
}
void from_json(const json& j, UserAccount& v) {
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.display_name = j.at("display_name").get<std::string>();
  v.role = parse_role(j.at("role").get<std::string>());
  v.created_at = get_ts(j, "created_at");
}

void to_json(json& j, const Tag& v) { j = json{{"raw", v.raw}, {"canonical", v.canonical}}; }
void from_json(const json& j, Tag& v) {
  v.raw = j.at("raw").get<std::string>();
  v.canonical = j.at("canonical").get<std::string>();
}

void to_json(json& j, const Question& v) {
  json history = json::array();
  for (const auto& e : v.edit_history) {
    history.push_back(json{{"at", ts(e.at)}, {"editor_id", e.editor_id.value}});
  }
  j = json{{"question_id", v.question_id.value},
           {"author_id", v.author_id.value},
           {"level1_text", v.level1_text},
           {"level2_text", v.level2_text},
           {"tags", v.tags},
           {"topic_id", opt_string(v.topic_id)},
           {"score", v.score},
           {"created_at", ts(v.created_at)},
           {"edited_at", ts(v.edited_at)},
           {"edit_history", std::move(history)},
           {"hidden", v.hidden}};
}
void from_json(const json& j, Question& v) {
  v.question_id = get_id<QuestionIdTag>(j, "question_id");
  v.author_id = get_id<UserIdTag>(j, "author_id");
  v.level1_text = j.at("level1_text").get<std::string>();
  v.level2_text = j.at("level2_text").get<std::string>();
  v.tags = j.at("tags").get<std::vector<Tag>>();
  v.topic_id = get_opt_string(j, "topic_id");
  v.score = j.at("score").get<std::int64_t>();
  v.created_at = get_ts(j, "created_at");
  v.edited_at = get_ts(j, "edited_at");
  v.edit_history.clear();
  for (const auto& e : j.at("edit_history")) {
    v.edit_history.push_back(EditRecord{get_ts(e, "at"), get_id<UserIdTag>(e, "editor_id")});
  }
  v.hidden = j.at("hidden").get<bool>();
}

void to_json(json& j, const Level1Response& v) {
  j = json{{"question_id", v.question_id.value},
           {"user_id", v.user_id.value},
           {"answer", answer_name(v.answer)},
           {"at", ts(v.at)}};
}
void from_json(const json& j, Level1Response& v) {
  v.question_id = get_id<QuestionIdTag>(j, "question_id");
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.answer = parse_answer(j.at("answer").get<std::string>());
  v.at = get_ts(j, "at");
}

void to_json(json& j, const Level2Response& v) {
  j = json{{"question_id", v.question_id.value},
           {"user_id", v.user_id.value},
           {"body", v.body},
           {"at", ts(v.at)}};
}
void from_json(const json& j, Level2Response& v) {
  v.question_id = get_id<QuestionIdTag>(j, "question_id");
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.body = j.at("body").get<std::string>();
  v.at = get_ts(j, "at");
}

void to_json(json& j, const Comment& v) {
  j = json{{"comment_id", v.comment_id.value},
           {"question_id", v.question_id.value},
           {"user_id", v.user_id.value},
           {"body", v.body},
           {"parent_comment_id",
            v.parent_comment_id ? json(v.parent_comment_id->value) : json(nullptr)},
           {"at", ts(v.at)}};
}
void from_json(const json& j, Comment& v) {
  v.comment_id = get_id<CommentIdTag>(j, "comment_id");
  v.question_id = get_id<QuestionIdTag>(j, "question_id");
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.body = j.at("body").get<std::string>();
  const auto& parent = j.at("parent_comment_id");
  v.parent_comment_id =
      parent.is_null() ? std::nullopt : std::optional<CommentId>(CommentId{parent.get<std::uint64_t>()});
  v.at = get_ts(j, "at");
}

void to_json(json& j, const Vote& v) {
  j = json{{"question_id", v.question_id.value},
           {"user_id", v.user_id.value},
           {"direction", direction_name(v.direction)}};
}
void from_json(const json& j, Vote& v) {
  v.question_id = get_id<QuestionIdTag>(j, "question_id");
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.direction = parse_direction(j.at("direction").get<std::string>());
}

}  // namespace board

namespace router {
namespace {
std::string_view provenance_name(MappingProvenance p) {
  return p == MappingProvenance::seeded ? "seeded" : "curator-approved";
}
MappingProvenance parse_provenance(std::string_view s) {
  if (s == "seeded") return MappingProvenance::seeded;
  if (s == "curator-approved") return MappingProvenance::curator_approved;
  bad_enum("provenance", s);
}
}  // namespace

void to_json(json& j, const ManualMapping& v) {
  j = json{{"topic_id", v.topic_id}, {"provenance", provenance_name(v.provenance)}, {"at", ts(v.at)}};
}
void from_json(const json& j, ManualMapping& v) {
  v.topic_id = j.at("topic_id").get<std::string>();
  v.provenance = parse_provenance(j.at("provenance").get<std::string>());
  v.at = get_ts(j, "at");
}

void to_json(json& j, const UnmappedQueueEntry& v) {
  j = json{{"canonical_tag", v.canonical_tag},
           {"example_question_id", v.example_question_id.value},
           {"occurrence_count", v.occurrence_count},
           {"first_seen", ts(v.first_seen)}};
}
void from_json(const json& j, UnmappedQueueEntry& v) {
  v.canonical_tag = j.at("canonical_tag").get<std::string>();
  v.example_question_id = get_id<QuestionIdTag>(j, "example_question_id");
  v.occurrence_count = j.at("occurrence_count").get<std::uint64_t>();
  v.first_seen = get_ts(j, "first_seen");
}

void to_json(json& j, const RoutingResult& v) {
  if (!v.match) {
    j = json{{"outcome", "unmapped"}, {"model_missing", v.model_missing}};
    return;
  }
  j = json{{"outcome", "matched"},
           {"topic_id", v.match->topic_id},
           {"score", v.match->score},
           {"method", v.match->method == RouteMethod::manual ? "manual" : "classifier"}};
}

json model_to_json(const TopicVectorModel& model) {
  json centroids = json::object();
  for (const auto& [topic, vec] : model.centroids()) {
    json weights = json::object();
    for (const auto& [idx, w] : vec) {
      weights[model.vocabulary()[idx]] = w;
    }
    centroids[topic] = std::move(weights);
  }
  return json{{"vocabulary", model.vocabulary()},
              {"idf", model.idf()},
              {"centroids", std::move(centroids)},
              {"built_at", ts(model.built_at())},
              {"corpus_fingerprint", to_hex64(model.corpus_fingerprint())}};
}

}  // namespace router

namespace learning {

void to_json(json& j, const ContentSection& v) {
  j = json{{"section_id", v.section_id},
           {"heading", v.heading},
           {"body", v.body},
           {"media_url", opt_string(v.media_url)}};
}
void from_json(const json& j, ContentSection& v) {
  v.section_id = j.at("section_id").get<std::string>();
  v.heading = j.value("heading", std::string());
  v.body = j.at("body").get<std::string>();
  v.media_url = get_opt_string(j, "media_url");
}

void to_json(json& j, const QuizItem& v) {
  j = json{{"item_id", v.item_id},
           {"prompt", v.prompt},
           {"options", v.options},
           {"correct_index", v.correct_index},
           {"expert_insight", v.expert_insight}};
}
void from_json(const json& j, QuizItem& v) {
  v.item_id = j.at("item_id").get<std::string>();
  v.prompt = j.at("prompt").get<std::string>();
  v.options = j.at("options").get<std::vector<std::string>>();
  const auto& idx = j.at("correct_index");
  if (!idx.is_number_integer() || idx.get<std::int64_t>() < 0) {
    throw Error(ErrorCode::SeedParseError, "correct_index must be a non-negative integer");
  }
  v.correct_index = idx.get<std::size_t>();
  v.expert_insight = j.at("expert_insight").get<std::string>();
}

void to_json(json& j, const Topic& v) {
  j = json{{"topic_id", v.topic_id}, {"title", v.title}, {"sections", v.sections}, {"quiz", v.quiz}};
}
void from_json(const json& j, Topic& v) {
  v.topic_id = j.at("topic_id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.sections = j.at("sections").get<std::vector<ContentSection>>();
  v.quiz = j.value("quiz", std::vector<QuizItem>{});
}

void to_json(json& j, const ProgressRecord& v) {
  json answers = json::object();
  for (const auto& [item, a] : v.quiz_answers) {
    answers[item] = json{{"chosen_index", a.chosen_index},
                         {"correct", a.correct},
                         {"at", ts(a.at)},
                         {"first_attempt_correct", a.first_attempt_correct}};
  }
  j = json{{"user_id", v.user_id.value},
           {"topic_id", v.topic_id},
           {"viewed_sections", v.viewed_sections},
           {"quiz_answers", std::move(answers)}};
}
void from_json(const json& j, ProgressRecord& v) {
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.topic_id = j.at("topic_id").get<std::string>();
  v.viewed_sections = j.at("viewed_sections").get<std::set<std::string>>();
  v.quiz_answers.clear();
  for (const auto& [item, a] : j.at("quiz_answers").items()) {
    v.quiz_answers.emplace(item, QuizAnswerRecord{a.at("chosen_index").get<std::size_t>(),
                                                  a.at("correct").get<bool>(), get_ts(a, "at"),
                                                  a.at("first_attempt_correct").get<bool>()});
  }
}

void to_json(json& j, const ProgressSummary& v) {
  j = json{{"fraction_viewed", v.fraction_viewed},
           {"first_attempt_accuracy",
            v.first_attempt_accuracy ? json(*v.first_attempt_accuracy) : json(nullptr)}};
}

}  // namespace learning

namespace experiment {
namespace {
std::string_view strategy_name(Strategy s) { return s == Strategy::hash ? "hash" : "balanced"; }
Strategy parse_strategy(std::string_view s) {
  if (s == "hash") return Strategy::hash;
  if (s == "balanced") return Strategy::balanced;
  throw Error(ErrorCode::ConfigInvalid, "unknown assignment strategy '" + std::string(s) + "'");
}
}  // namespace

void to_json(json& j, const ExperimentDef& v) {
  j = json{{"experiment_id", v.experiment_id},
           {"conditions", v.conditions},
           {"salt", v.salt},
           {"strategy", strategy_name(v.strategy)}};
}
void from_json(const json& j, ExperimentDef& v) {
  v.experiment_id = j.at("experiment_id").get<std::string>();
  v.conditions = j.at("conditions").get<std::vector<std::string>>();
  v.salt = j.at("salt").get<std::string>();
  v.strategy = parse_strategy(j.value("strategy", std::string("hash")));
}

void to_json(json& j, const Assignment& v) {
  j = json{{"user_id", v.user_id.value},
           {"experiment_id", v.experiment_id},
           {"condition_id", v.condition_id},
           {"at", ts(v.at)}};
}
void from_json(const json& j, Assignment& v) {
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.experiment_id = j.at("experiment_id").get<std::string>();
  v.condition_id = j.at("condition_id").get<std::string>();
  v.at = get_ts(j, "at");
}

void to_json(json& j, const EngagementEvent& v) {
  j = json{{"event_id", v.event_id.value},
           {"user_id", v.user_id.value},
           {"kind", kind_name(v.kind)},
           {"subject_id", opt_string(v.subject_id)},
           {"at", ts(v.at)}};
}
void from_json(const json& j, EngagementEvent& v) {
  v.event_id = get_id<EventIdTag>(j, "event_id");
  v.user_id = get_id<UserIdTag>(j, "user_id");
  v.kind = parse_kind(j.at("kind").get<std::string>());
  v.subject_id = get_opt_string(j, "subject_id");
  v.at = get_ts(j, "at");
}

void to_json(json& j, const MetricsReport& v) {
  json counts = json::object();
  for (EventKind k : all_kinds()) {
    counts[std::string(kind_name(k))] = v.count(k);
  }
  j = json{{"user_id", v.user_id.value},
           {"conditions", v.conditions},
           {"session_count", v.session_count},
           {"total_active_seconds", v.total_active_seconds},
           {"counts", std::move(counts)},
           {"topics", v.topics}};
}

}  // namespace experiment

namespace service {

json encode_state(const State& state) {
  const auto& b = state.board.data();
  json board{{"users", json::array()},
             {"questions", json::array()},
             {"level1", json::array()},
             {"level2", b.level2},
             {"comments", json::array()},
             {"votes", json::array()},
             {"next_user_id", b.next_user_id},
             {"next_question_id", b.next_question_id},
             {"next_comment_id", b.next_comment_id}};
  for (const auto& [id, u] : b.users) board["users"].push_back(u);
  for (const auto& [id, q] : b.questions) board["questions"].push_back(q);
  for (const auto& [key, r] : b.level1) board["level1"].push_back(r);
  for (const auto& [id, c] : b.comments) board["comments"].push_back(c);
  for (const auto& [key, v] : b.votes) board["votes"].push_back(v);

  const auto& r = state.router.data();
  json mappings = json::object();
  for (const auto& [tag, m] : r.mappings) mappings[tag] = m;
  json unmapped = json::object();
  for (const auto& [tag, e] : r.unmapped) unmapped[tag] = e;
  json router{{"mappings", std::move(mappings)},
              {"unmapped", std::move(unmapped)},
              {"corpora", r.corpora}};

  const auto& l = state.learning.data();
  json learning{{"topics", json::array()}, {"progress", json::array()}};
  for (const auto& [id, t] : l.topics) learning["topics"].push_back(t);
  for (const auto& [key, p] : l.progress) learning["progress"].push_back(p);

  const auto& e = state.experiments.data();
  json experiments{{"definitions", json::array()},
                   {"assignments", json::array()},
                   {"events", e.events},
                   {"next_event_id", e.next_event_id}};
  for (const auto& [id, d] : e.definitions) experiments["definitions"].push_back(d);
  for (const auto& [key, a] : e.assignments) experiments["assignments"].push_back(a);

  json credentials = json::array();
  for (const auto& [id, hash] : state.password_hashes) {
    credentials.push_back(json{{"user_id", id.value}, {"password_hash", hash}});
  }

  return json{{"schema_version", kSchemaVersion},
              {"board", std::move(board)},
              {"router", std::move(router)},
              {"learning", std::move(learning)},
              {"experiments", std::move(experiments)},
              {"credentials", std::move(credentials)}};
}

namespace {

State decode_unchecked(const json& j) {
  State state;

  const json& jb = j.at("board");
  board::Board::Data b;
  for (const auto& u : jb.at("users")) {
    auto user = u.get<board::UserAccount>();
    b.users.emplace(user.user_id, std::move(user));
  }
  for (const auto& q : jb.at("questions")) {
    auto question = q.get<board::Question>();
    b.questions.emplace(question.question_id, std::move(question));
  }
  for (const auto& r : jb.at("level1")) {
    auto resp = r.get<board::Level1Response>();
    b.level1.emplace(board::ResponseKey{resp.question_id, resp.user_id}, resp);
  }
  b.level2 = jb.at("level2").get<std::vector<board::Level2Response>>();
  for (const auto& c : jb.at("comments")) {
    auto comment = c.get<board::Comment>();
    b.comments.emplace(comment.comment_id, std::move(comment));
  }
  for (const auto& v : jb.at("votes")) {
    auto vote = v.get<board::Vote>();
    b.votes.emplace(board::ResponseKey{vote.question_id, vote.user_id}, vote);
  }
  b.next_user_id = jb.at("next_user_id").get<std::uint64_t>();
  b.next_question_id = jb.at("next_question_id").get<std::uint64_t>();
  b.next_comment_id = jb.at("next_comment_id").get<std::uint64_t>();
  state.board = board::Board(std::move(b));

  const json& jr = j.at("router");
  router::TagRouter::Data r;
  for (const auto& [tag, m] : jr.at("mappings").items()) {
    r.mappings.emplace(tag, m.get<router::ManualMapping>());
  }
  for (const auto& [tag, e] : jr.at("unmapped").items()) {
    r.unmapped.emplace(tag, e.get<router::UnmappedQueueEntry>());
  }
  r.corpora = jr.at("corpora").get<router::Corpora>();
  state.router = router::TagRouter(std::move(r));

  const json& jl = j.at("learning");
  learning::Learning::Data l;
  for (const auto& t : jl.at("topics")) {
    auto topic = t.get<learning::Topic>();
    l.topics.emplace(topic.topic_id, std::move(topic));
  }
  for (const auto& p : jl.at("progress")) {
    auto record = p.get<learning::ProgressRecord>();
    l.progress.emplace(learning::ProgressKey{record.user_id, record.topic_id}, std::move(record));
  }
  state.learning = learning::Learning(std::move(l));

  const json& je = j.at("experiments");
  experiment::Experiments::Data e;
  for (const auto& d : je.at("definitions")) {
    auto def = d.get<experiment::ExperimentDef>();
    e.definitions.emplace(def.experiment_id, std::move(def));
  }
  for (const auto& a : je.at("assignments")) {
    auto assignment = a.get<experiment::Assignment>();
    e.assignments.emplace(std::pair{assignment.experiment_id, assignment.user_id}, assignment);
  }
  e.events = je.at("events").get<std::vector<experiment::EngagementEvent>>();
  e.next_event_id = je.at("next_event_id").get<std::uint64_t>();
  state.experiments = experiment::Experiments(std::move(e));

  for (const auto& c : j.at("credentials")) {
    state.password_hashes.emplace(UserId{c.at("user_id").get<std::uint64_t>()},
                                  c.at("password_hash").get<std::string>());
  }
  return state;
}

}  // namespace

State decode_state(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer()) {
    throw Error(ErrorCode::SchemaError, "snapshot has no schema_version");
  }
  const auto version = j.at("schema_version").get<std::int64_t>();
  if (version != kSchemaVersion) {
    throw Error(ErrorCode::SchemaError,
                "unsupported snapshot schema_version " + std::to_string(version));
  }
  State state;
  try {
    state = decode_unchecked(j);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::SchemaError, std::string("malformed snapshot: ") + ex.what());
  } catch (const Error& ex) {
    throw Error(ErrorCode::SchemaError, std::string("malformed snapshot: ") + ex.what());
  }
  std::map<QuestionId, std::int64_t> tallies;
  for (const auto& [key, vote] : state.board.data().votes) {
    tallies[key.first] += vote.direction == board::VoteDirection::up ? 1 : -1;
  }
  for (const auto& [id, q] : state.board.data().questions) {
    if (q.score != tallies[id]) {
      throw Error(ErrorCode::SchemaError,
                  "question " + to_string(id) + " score disagrees with its votes");
    }
  }
  return state;
}

std::string canonical_dump(const json& j) { return j.dump(); }

}  // namespace service
}  // namespace gutinstinct

#include "logex/service.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "logex/recognizer.hpp"
#include "logex/rules.hpp"
#include "logex/syntax.hpp"

namespace logex {

ApiConfig ApiConfig::pilot() {
  ApiConfig c;
  c.advisories = false;
  c.length_warnings = false;
  c.divergence_warnings = false;
  c.equivalent_buggy_feedback = false;
  return c;
}

Mode ApiConfig::mode_for(ExerciseKind k) const {
  bool strict = k == ExerciseKind::Proof ? strict_proof : k == ExerciseKind::ToDnf ? strict_dnf : strict_cnf;
  return strict ? Mode::Strict : Mode::Lenient;
}

ApiConfig load_config_file(const std::string& path, ApiConfig c) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  Json j = Json::parse(in);
  c.host = j.value("host", c.host);
  c.port = j.value("port", c.port);
  c.exercise_file = j.value("exercises", c.exercise_file);
  c.log_path = j.value("log", c.log_path);
  c.advisories = j.value("advisories", c.advisories);
  c.length_warnings = j.value("lengthWarnings", c.length_warnings);
  c.divergence_warnings = j.value("divergenceWarnings", c.divergence_warnings);
  c.equivalent_buggy_feedback = j.value("equivalentBuggyFeedback", c.equivalent_buggy_feedback);
  if (j.contains("strict")) {
    const Json& s = j["strict"];
    c.strict_dnf = s.value("dnf", c.strict_dnf);
    c.strict_cnf = s.value("cnf", c.strict_cnf);
    c.strict_proof = s.value("proof", c.strict_proof);
  }
  return c;
}

ApiConfig config_from_env(ApiConfig c) {
  if (const char* cfg = std::getenv("LOGEX_CONFIG")) c = load_config_file(cfg, c);
  if (const char* addr = std::getenv("LOGEX_ADDR")) {
    std::string a = addr;
    auto colon = a.rfind(':');
    if (colon == std::string::npos) {
      c.host = a;
    } else {
      if (colon > 0) c.host = a.substr(0, colon);
      c.port = std::stoi(a.substr(colon + 1));
    }
  }
  if (const char* ex = std::getenv("LOGEX_EXERCISES")) c.exercise_file = ex;
  if (const char* log = std::getenv("LOGEX_LOG")) c.log_path = log;
  return c;
}

Json to_json(const ApiConfig& c) {
  return {{"host", c.host},
          {"port", c.port},
          {"exercises", c.exercise_file},
          {"log", c.log_path},
          {"advisories", c.advisories},
          {"lengthWarnings", c.length_warnings},
          {"divergenceWarnings", c.divergence_warnings},
          {"equivalentBuggyFeedback", c.equivalent_buggy_feedback},
          {"strict", {{"dnf", c.strict_dnf}, {"cnf", c.strict_cnf}, {"proof", c.strict_proof}}}};
}

Json to_json(const ExerciseProgress& p) {
  auto chain_json = [](const std::vector<RuleApplication>& steps) {
    Json j = Json::array();
    for (const auto& s : steps) j.push_back(to_json(s));
    return j;
  };
  Json j{{"exercise", to_json(p.exercise)},
         {"finished", p.finished()},
         {"completed", p.completed_at.has_value()},
         {"accepted", p.accepted_steps},
         {"rejected", p.rejected_steps}};
  if (const auto* proof = std::get_if<ProofState>(&p.state)) {
    j["forward"] = chain_json(proof->forward);
    j["backward"] = chain_json(proof->backward);
    j["forwardHead"] = print(proof->forward_head());
    j["backwardHead"] = print(proof->backward_head());
  } else {
    const auto& d = std::get<DerivationState>(p.state);
    j["forward"] = chain_json(d.steps);
    j["forwardHead"] = print(d.head());
  }
  return j;
}

namespace {

struct HttpError {
  int status;
  std::string message;
  std::string field;
};

Response error(int status, std::string message, std::string field = {}) {
  Json body{{"error", std::move(message)}};
  if (!field.empty()) body["field"] = std::move(field);
  return {status, std::move(body)};
}

std::vector<std::string> split_path(std::string_view path) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string required_string(const Json& body, const char* field) {
  if (!body.contains(field)) throw HttpError{400, std::string("missing field '") + field + "'", field};
  if (!body[field].is_string()) throw HttpError{400, std::string("field '") + field + "' must be a string", field};
  return body[field].get<std::string>();
}

ChainDirection direction_of(const Json& body, const ExerciseProgress& p) {
  std::string text = "forward";
  if (body.contains("direction")) {
    if (!body["direction"].is_string()) throw HttpError{400, "direction must be a string", "direction"};
    text = body["direction"].get<std::string>();
  }
  auto d = parse_direction(text);
  if (!d) throw HttpError{400, "direction must be forward or backward", "direction"};
  if (*d == ChainDirection::Backward && !p.is_proof()) {
    throw HttpError{400, "only proofs have a backward direction", "direction"};
  }
  return *d;
}

std::int64_t system_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

Service::Service(ApiConfig config, ExerciseBank bank, Clock clock)
    : config_(std::move(config)), bank_(std::move(bank)), clock_(std::move(clock)) {
  if (!clock_) clock_ = system_ms;
  if (config_.log_path.empty()) return;
  if (std::filesystem::exists(config_.log_path)) {
    for (auto& ev : read_log_file(config_.log_path)) {
      auto& slot = sessions_[ev.session];
      if (!slot) {
        slot = std::make_unique<Slot>();
        slot->session.id = ev.session;
      }
      record(slot->session, ev);
      log_.push_back(std::move(ev));
    }
    for (const auto& [id, slot] : sessions_) {
      if (id.size() > 1 && id[0] == 's') {
        try {
          next_session_ = std::max<std::size_t>(next_session_, std::stoul(id.substr(1)) + 1);
        } catch (const std::exception&) {
        }
      }
    }
  }
  sink_ = std::make_unique<LogSink>(config_.log_path);
}

std::vector<LogEvent> Service::log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

std::optional<Session> Service::session(const std::string& id) const {
  Slot* slot = find_slot(id);
  if (!slot) return std::nullopt;
  std::lock_guard lock(slot->mutex);
  return slot->session;
}

Service::Slot* Service::find_slot(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

std::int64_t Service::now(const Session& s) const {
  std::int64_t t = clock_();
  return s.last_ts ? std::max(t, *s.last_ts) : t;
}

void Service::commit(Slot& slot, LogEvent e) {
  record(slot.session, e);
  std::lock_guard lock(log_mutex_);
  if (sink_) sink_->append(e);
  log_.push_back(std::move(e));
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body_text) {
  Json body = Json::object();
  if (!body_text.empty()) {
    try {
      body = Json::parse(body_text);
    } catch (const Json::parse_error& e) {
      return error(400, std::string("malformed JSON body: ") + e.what());
    }
    if (!body.is_object()) return error(400, "request body must be a JSON object");
  }
  const auto seg = split_path(path);
  const bool get = method == "GET";
  const bool post = method == "POST";
  try {
    if (seg.size() == 1 && seg[0] == "session") {
      if (!post) return error(405, "method not allowed");
      return create_session(body);
    }
    if (seg.size() == 1 && seg[0] == "exercises") {
      if (get) return list_exercises();
      if (post) return create_exercise(body);
      return error(405, "method not allowed");
    }
    if (seg.size() == 1 && seg[0] == "rules") {
      if (!get) return error(405, "method not allowed");
      Json rules = Json::array();
      for (const auto& r : rule_sheet()) rules.push_back(to_json(r));
      return {200, {{"rules", rules}}};
    }
    if (seg.size() >= 3 && seg[0] == "session") {
      Slot* slot = find_slot(seg[1]);
      if (!slot) return error(404, "unknown session '" + seg[1] + "'");
      std::lock_guard lock(slot->mutex);
      if (seg.size() == 3 && seg[2] == "metrics") {
        if (!get) return error(405, "method not allowed");
        return metrics(*slot);
      }
      if (seg[2] != "exercise" || seg.size() < 4 || seg.size() > 5) return error(404, "no such route");
      const std::string& ex = seg[3];
      if (seg.size() == 4) {
        if (!get) return error(405, "method not allowed");
        return exercise_state(*slot, ex);
      }
      const std::string& action = seg[4];
      if (action == "solution") {
        if (!get) return error(405, "method not allowed");
        return solution(*slot, ex);
      }
      if (action != "step" && action != "undo" && action != "hint" && action != "next") {
        return error(404, "no such route");
      }
      if (!post) return error(405, "method not allowed");
      if (action == "step") return submit_step(*slot, ex, body);
      if (action == "undo") return undo(*slot, ex, body);
      if (action == "hint") return hint(*slot, ex, body);
      return next(*slot, ex);
    }
    return error(404, "no such route");
  } catch (const HttpError& e) {
    return error(e.status, e.message, e.field);
  }
}

Response Service::create_session(const Json& body) {
  std::string student;
  if (body.contains("student")) {
    if (!body["student"].is_string()) throw HttpError{400, "student must be a string", "student"};
    student = body["student"].get<std::string>();
  }
  Slot* slot = nullptr;
  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "s" + std::to_string(next_session_++);
    auto owned = std::make_unique<Slot>();
    owned->session.id = id;
    slot = owned.get();
    sessions_.emplace(id, std::move(owned));
  }
  std::lock_guard lock(slot->mutex);
  commit(*slot, LogEvent{now(slot->session), id, "", EventKind::SessionCreated, {{"student", student}}});
  return {201, {{"session", id}, {"student", student}}};
}

Response Service::list_exercises() const {
  Json list = Json::array();
  for (auto kind : {ExerciseKind::ToDnf, ExerciseKind::ToCnf, ExerciseKind::Proof}) {
    for (const auto& e : bank_.fixed_set(kind)) list.push_back(to_json(e));
  }
  return {200, {{"version", bank_.version()}, {"exercises", list}}};
}

Response Service::create_exercise(const Json& body) {
  const std::string session_id = required_string(body, "session");
  auto kind = parse_kind(required_string(body, "kind"));
  if (!kind) throw HttpError{400, "kind must be dnf, cnf or proof", "kind"};
  const std::string text = required_string(body, "formula");
  std::optional<std::string> rhs;
  if (*kind == ExerciseKind::Proof) rhs = required_string(body, "rhs");
  Slot* slot = find_slot(session_id);
  if (!slot) return error(404, "unknown session '" + session_id + "'");
  std::lock_guard lock(slot->mutex);
  std::size_t n = 1;
  for (const auto& [id, p] : slot->session.exercises) n += p.exercise.user_created ? 1 : 0;
  auto result = create_user_exercise("user-" + std::to_string(n), *kind, text,
                                     rhs ? std::optional<std::string_view>(*rhs) : std::nullopt);
  if (auto* rejected = std::get_if<RejectedExercise>(&result)) {
    return {422, {{"error", rejected->message}, {"reason", to_string(rejected->reason)}}};
  }
  const auto& ex = std::get<Exercise>(result);
  commit(*slot, LogEvent{now(slot->session), session_id, ex.id, EventKind::ExerciseStarted,
                         {{"exercise", to_json(ex)}}});
  return {201, to_json(*slot->session.progress(ex.id))};
}

const ExerciseProgress* Service::ensure_started(Slot& slot, const std::string& exercise) {
  if (const auto* p = slot.session.progress(exercise)) return p;
  const Exercise* e = bank_.find(exercise);
  if (!e) throw HttpError{404, "unknown exercise '" + exercise + "'", ""};
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::ExerciseStarted,
                        {{"exercise", to_json(*e)}}});
  return slot.session.progress(exercise);
}

void Service::complete_if_finished(Slot& slot, const std::string& exercise) {
  const ExerciseProgress* p = slot.session.progress(exercise);
  if (!p || !p->finished()) return;
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::ExerciseCompleted,
                        {{"accepted", p->accepted_steps}}});
}

Response Service::exercise_state(Slot& slot, const std::string& exercise) {
  return {200, to_json(*ensure_started(slot, exercise))};
}

Response Service::submit_step(Slot& slot, const std::string& exercise, const Json& body) {
  const ExerciseProgress* p = ensure_started(slot, exercise);
  const std::string text = required_string(body, "formulaText");
  std::optional<std::string> claimed;
  if (body.contains("ruleId") && !body["ruleId"].is_null()) {
    if (!body["ruleId"].is_string()) throw HttpError{400, "ruleId must be a string", "ruleId"};
    if (!body["ruleId"].get<std::string>().empty()) claimed = body["ruleId"].get<std::string>();
  }
  const ChainDirection dir = direction_of(body, *p);
  const Mode mode = config_.mode_for(p->exercise.kind);

  StepSubmission sub{p->head(dir), text, claimed, mode, dir};
  DiagnoseOptions options;
  options.absorption_advisory = false;
  options.equivalent_buggy_feedback = config_.equivalent_buggy_feedback;
  Diagnosis d = diagnose(sub, options);

  if (config_.advisories && d.accepted && d.kind != DiagnosisKind::NoOp) {
    ExerciseProgress after = *p;
    RuleApplication app = d.application ? *d.application
                                        : RuleApplication{"", "", Position::root(),
                                                          Orientation::LeftToRight, p->head(dir), *d.after};
    StepContext ctx;
    if (d.application) ctx.step_rule = d.application->rule_id;
    ctx.accepted_steps = p->accepted_steps + 1;
    if (auto* proof = std::get_if<ProofState>(&after.state)) {
      (dir == ChainDirection::Forward ? proof->forward : proof->backward).push_back(app);
      if (config_.divergence_warnings) ctx.on_path = on_path(*proof);
    } else {
      auto& der = std::get<DerivationState>(after.state);
      der.steps.push_back(app);
      if (config_.divergence_warnings) ctx.on_path = on_path(der);
    }
    if (config_.length_warnings) ctx.worked_length = worked_length(p->exercise);
    d.advisories = advisories_for(*d.after, ctx);
  }

  Json submitted{{"formulaText", text}, {"direction", to_string(dir)}, {"mode", to_string(mode)}};
  if (claimed) submitted["ruleId"] = *claimed;
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::StepSubmitted, submitted});
  Json diag = to_json(d);
  Json logged = diag;
  logged["direction"] = to_string(dir);
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::Diagnosis, logged});
  if (d.accepted && d.kind != DiagnosisKind::NoOp) complete_if_finished(slot, exercise);
  return {200, {{"diagnosis", diag}, {"state", to_json(*slot.session.progress(exercise))}}};
}

Response Service::undo(Slot& slot, const std::string& exercise, const Json& body) {
  const ExerciseProgress* p = ensure_started(slot, exercise);
  const ChainDirection dir = direction_of(body, *p);
  if (p->chain_length(dir) == 0) return error(409, "nothing to undo");
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::Undo,
                        {{"direction", to_string(dir)}}});
  return {200, to_json(*slot.session.progress(exercise))};
}

Response Service::hint(Slot& slot, const std::string& exercise, const Json& body) {
  const ExerciseProgress* p = ensure_started(slot, exercise);
  if (!body.contains("level") || !body["level"].is_number_integer()) {
    throw HttpError{400, "level must be 1, 2 or 3", "level"};
  }
  int level = body["level"].get<int>();
  if (level < 1 || level > 3) throw HttpError{400, "level must be 1, 2 or 3", "level"};
  Hint h;
  try {
    h = std::visit([&](const auto& s) { return logex::hint(s, level); }, p->state);
  } catch (const ExerciseSolved& e) {
    return error(409, e.what());
  }
  Json out = to_json(h);
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::HintRequested,
                        {{"level", level}, {"text", h.text}}});
  return {200, out};
}

Response Service::next(Slot& slot, const std::string& exercise) {
  const ExerciseProgress* p = ensure_started(slot, exercise);
  std::optional<NextStep> step;
  try {
    step = std::visit([](const auto& s) { return next_step(s); }, p->state);
  } catch (const ExerciseSolved& e) {
    return error(409, e.what());
  }
  Json js = to_json(*step);
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise, EventKind::NextStepRequested,
                        {{"step", js}}});
  complete_if_finished(slot, exercise);
  return {200, {{"step", js}, {"state", to_json(*slot.session.progress(exercise))}}};
}

Response Service::solution(Slot& slot, const std::string& exercise) {
  const ExerciseProgress* p = ensure_started(slot, exercise);
  Hint h = std::visit([](const auto& s) { return logex::hint(s, 3); }, p->state);
  commit(slot, LogEvent{now(slot.session), slot.session.id, exercise,
                        EventKind::WorkedSolutionRequested, {{"length", h.solution.size()}}});
  return {200, {{"solution", to_json(h.solution)}, {"length", h.solution.size()}}};
}

Response Service::metrics(Slot& slot) { return {200, to_json(metrics_report(slot.session))}; }

}  // namespace logex

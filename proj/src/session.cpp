#include "logex/session.hpp"

#include <fstream>
#include <istream>

#include "logex/recognizer.hpp"
#include "logex/syntax.hpp"

namespace logex {

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::SessionCreated, "session-created"},
    {EventKind::ExerciseStarted, "exercise-started"},
    {EventKind::StepSubmitted, "step-submitted"},
    {EventKind::Diagnosis, "diagnosis"},
    {EventKind::HintRequested, "hint-requested"},
    {EventKind::NextStepRequested, "next-step-requested"},
    {EventKind::WorkedSolutionRequested, "worked-solution-requested"},
    {EventKind::Undo, "undo"},
    {EventKind::ExerciseCompleted, "exercise-completed"},
};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventNames) {
    if (kind == k) return name;
  }
  return "";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& [kind, name] : kEventNames) {
    if (name == text) return kind;
  }
  return std::nullopt;
}

Json to_json(const LogEvent& e) {
  return {{"ts", e.ts},
          {"session", e.session},
          {"exercise", e.exercise},
          {"kind", to_string(e.kind)},
          {"payload", e.payload}};
}

LogEvent event_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedLog("event is not an object");
  auto require = [&](const char* name) -> const Json& {
    if (!j.contains(name)) throw MalformedLog(std::string("missing field '") + name + "'");
    return j[name];
  };
  LogEvent e;
  if (!require("ts").is_number_integer()) throw MalformedLog("ts must be an integer");
  e.ts = j["ts"].get<std::int64_t>();
  if (!require("session").is_string()) throw MalformedLog("session must be a string");
  e.session = j["session"].get<std::string>();
  if (!require("exercise").is_string()) throw MalformedLog("exercise must be a string");
  e.exercise = j["exercise"].get<std::string>();
  if (!require("kind").is_string()) throw MalformedLog("kind must be a string");
  auto kind = parse_event_kind(j["kind"].get<std::string>());
  if (!kind) throw MalformedLog("unknown event kind '" + j["kind"].get<std::string>() + "'");
  e.kind = *kind;
  if (!require("payload").is_object()) throw MalformedLog("payload must be an object");
  e.payload = j["payload"];
  return e;
}

std::string to_line(const LogEvent& e) { return to_json(e).dump(); }

std::vector<LogEvent> read_log(std::istream& in) {
  std::vector<LogEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(event_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw MalformedLog("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const MalformedLog& e) {
      throw MalformedLog("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LogEvent> read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedLog("cannot open " + path);
  return read_log(in);
}

const Formula& ExerciseProgress::head(ChainDirection d) const {
  if (const auto* p = std::get_if<ProofState>(&state)) {
    return d == ChainDirection::Forward ? p->forward_head() : p->backward_head();
  }
  return std::get<DerivationState>(state).head();
}

std::size_t ExerciseProgress::chain_length(ChainDirection d) const {
  if (const auto* p = std::get_if<ProofState>(&state)) {
    return d == ChainDirection::Forward ? p->forward.size() : p->backward.size();
  }
  return d == ChainDirection::Forward ? std::get<DerivationState>(state).steps.size() : 0;
}

bool ExerciseProgress::finished() const {
  if (const auto* p = std::get_if<ProofState>(&state)) return p->closed();
  const auto& d = std::get<DerivationState>(state);
  return is_normal_form(d.head(), d.target);
}

const ExerciseProgress* Session::progress(const std::string& exercise) const {
  auto it = exercises.find(exercise);
  return it == exercises.end() ? nullptr : &it->second;
}

namespace {

std::vector<RuleApplication>& chain(ExerciseProgress& p, ChainDirection d) {
  if (auto* proof = std::get_if<ProofState>(&p.state)) {
    return d == ChainDirection::Forward ? proof->forward : proof->backward;
  }
  if (d == ChainDirection::Backward) throw SessionError("normal-form exercises have no backward chain");
  return std::get<DerivationState>(p.state).steps;
}

ChainDirection direction_field(const Json& payload) {
  auto text = payload.value("direction", std::string("forward"));
  auto d = parse_direction(text);
  if (!d) throw SessionError("unknown direction '" + text + "'");
  return *d;
}

ExerciseState initial_state(const Exercise& e) {
  if (e.kind == ExerciseKind::Proof) return ProofState{e.start, *e.rhs, {}, {}};
  return DerivationState{normal_form_of(e.kind), e.start, {}};
}

void apply_event(Session& s, const LogEvent& ev) {
  if (s.event_count == 0 && s.id.empty()) s.id = ev.session;
  if (ev.session != s.id) throw SessionError("event belongs to session '" + ev.session + "'");
  if (s.last_ts && ev.ts < *s.last_ts) throw SessionError("out-of-order timestamp");
  if (s.pending && ev.kind != EventKind::Diagnosis) {
    throw SessionError("a submitted step must be followed by its diagnosis");
  }

  if (ev.kind == EventKind::SessionCreated) {
    if (s.event_count > 0) throw SessionError("session already created");
    s.student = ev.payload.value("student", std::string());
  } else if (ev.kind == EventKind::ExerciseStarted) {
    Exercise e = exercise_from_json(ev.payload.at("exercise"));
    if (e.id != ev.exercise) throw SessionError("exercise id does not match the payload");
    if (!s.exercises.count(e.id)) {
      ExerciseProgress p{e, initial_state(e), 0, 0, 0, 0, 0, 0, 0, ev.ts, ev.ts, std::nullopt};
      s.exercises.emplace(e.id, std::move(p));
    }
    s.active_exercise = e.id;
  } else {
    auto it = s.exercises.find(ev.exercise);
    if (it == s.exercises.end()) throw SessionError("unknown exercise '" + ev.exercise + "'");
    ExerciseProgress& p = it->second;
    switch (ev.kind) {
      case EventKind::StepSubmitted: {
        ChainDirection d = direction_field(ev.payload);
        chain(p, d);
        s.pending = {{ev.exercise, d}};
        break;
      }
      case EventKind::Diagnosis: {
        if (!s.pending || s.pending->first != ev.exercise) {
          throw SessionError("diagnosis without a submitted step");
        }
        ChainDirection d = s.pending->second;
        bool accepted = ev.payload.at("accepted").get<bool>();
        std::string kind = ev.payload.at("kind").get<std::string>();
        if (!accepted) {
          ++p.rejected_steps;
        } else if (kind == to_string(DiagnosisKind::NoOp)) {
          ++p.noop_steps;
        } else {
          const Formula& before = p.head(d);
          RuleApplication app =
              ev.payload.contains("application")
                  ? application_from_json(ev.payload["application"], before)
                  : RuleApplication{"", "", Position::root(), Orientation::LeftToRight, before,
                                    parse(ev.payload.at("formula").get<std::string>())};
          chain(p, d).push_back(std::move(app));
          ++p.accepted_steps;
        }
        s.pending.reset();
        break;
      }
      case EventKind::HintRequested: {
        int level = ev.payload.at("level").get<int>();
        if (level < 1 || level > 3) throw SessionError("hint level must be 1, 2 or 3");
        ++p.hints;
        break;
      }
      case EventKind::NextStepRequested: {
        const Json& step = ev.payload.at("step");
        ChainDirection d = direction_field(step);
        RuleApplication app = application_from_json(step, p.head(d));
        chain(p, d).push_back(std::move(app));
        ++p.next_steps;
        break;
      }
      case EventKind::WorkedSolutionRequested:
        ++p.worked_solutions;
        break;
      case EventKind::Undo: {
        auto& c = chain(p, direction_field(ev.payload));
        if (c.empty()) throw SessionError("nothing to undo");
        c.pop_back();
        ++p.undos;
        break;
      }
      case EventKind::ExerciseCompleted:
        if (!p.finished()) throw SessionError("exercise is not finished");
        p.completed_at = ev.ts;
        break;
      default:
        break;
    }
    p.last_event_at = ev.ts;
  }
  s.last_ts = ev.ts;
  ++s.event_count;
}

}  // namespace

void record(Session& session, const LogEvent& event) {
  Session next = session;
  try {
    apply_event(next, event);
  } catch (const SessionError&) {
    throw;
  } catch (const std::exception& e) {
    throw SessionError(std::string("malformed event: ") + e.what());
  }
  session = std::move(next);
}

std::map<std::string, Session> replay(const std::vector<LogEvent>& log) {
  std::map<std::string, Session> sessions;
  for (const auto& ev : log) {
    auto [it, inserted] = sessions.try_emplace(ev.session);
    if (inserted) it->second.id = ev.session;
    record(it->second, ev);
  }
  return sessions;
}

namespace {

Json chain_json(const std::vector<RuleApplication>& steps) {
  Json j = Json::array();
  for (const auto& s : steps) j.push_back(to_json(s));
  return j;
}

}  // namespace

Json snapshot(const Session& session) {
  Json j{{"id", session.id},
         {"student", session.student},
         {"activeExercise", session.active_exercise ? Json(*session.active_exercise) : Json()},
         {"lastTs", session.last_ts ? Json(*session.last_ts) : Json()},
         {"eventCount", session.event_count}};
  if (session.pending) {
    j["pending"] = {{"exercise", session.pending->first},
                    {"direction", to_string(session.pending->second)}};
  } else {
    j["pending"] = nullptr;
  }
  Json exercises = Json::object();
  for (const auto& [id, p] : session.exercises) {
    Json e{{"exercise", to_json(p.exercise)},
           {"accepted", p.accepted_steps},
           {"rejected", p.rejected_steps},
           {"noop", p.noop_steps},
           {"hints", p.hints},
           {"nextSteps", p.next_steps},
           {"workedSolutions", p.worked_solutions},
           {"undos", p.undos},
           {"startedAt", p.started_at},
           {"lastEventAt", p.last_event_at},
           {"completedAt", p.completed_at ? Json(*p.completed_at) : Json()}};
    if (const auto* proof = std::get_if<ProofState>(&p.state)) {
      e["forward"] = chain_json(proof->forward);
      e["backward"] = chain_json(proof->backward);
    } else {
      e["forward"] = chain_json(std::get<DerivationState>(p.state).steps);
    }
    exercises[id] = std::move(e);
  }
  j["exercises"] = std::move(exercises);
  return j;
}

std::vector<std::string> audit(const std::vector<LogEvent>& log) {
  std::vector<std::string> problems;
  std::map<std::string, Session> sessions;
  std::map<std::string, LogEvent> last_submission;
  const DiagnoseOptions options{false, false};
  for (std::size_t i = 0; i < log.size(); ++i) {
    const LogEvent& ev = log[i];
    auto [it, inserted] = sessions.try_emplace(ev.session);
    if (inserted) it->second.id = ev.session;
    Session& s = it->second;
    auto where = "event " + std::to_string(i + 1) + ": ";
    if (ev.kind == EventKind::StepSubmitted) last_submission.insert_or_assign(ev.session, ev);
    if (ev.kind == EventKind::Diagnosis && ev.payload.value("accepted", false) && s.pending) {
      auto sub_it = last_submission.find(ev.session);
      const ExerciseProgress* p = s.progress(ev.exercise);
      if (sub_it != last_submission.end() && p) {
        const Json& sp = sub_it->second.payload;
        StepSubmission sub{p->head(s.pending->second), sp.value("formulaText", std::string()),
                           std::nullopt, sp.value("mode", std::string("lenient")) == "strict"
                                             ? Mode::Strict
                                             : Mode::Lenient,
                           s.pending->second};
        if (sp.contains("ruleId") && sp["ruleId"].is_string()) sub.claimed_rule = sp["ruleId"].get<std::string>();
        Diagnosis again = diagnose(sub, options);
        if (!again.accepted) {
          problems.push_back(where + "accepted step is rejected on re-check (" +
                             std::string(to_string(again.kind)) + ")");
        } else if (ev.payload.value("kind", std::string()) == to_string(DiagnosisKind::Correct) &&
                   again.kind != DiagnosisKind::Correct) {
          problems.push_back(where + "step recorded as correct re-checks as " +
                             std::string(to_string(again.kind)));
        }
      }
    }
    try {
      record(s, ev);
    } catch (const SessionError& e) {
      problems.push_back(where + e.what());
    }
  }
  return problems;
}

std::optional<double> error_fraction(const ExerciseProgress& p) {
  if (p.accepted_steps == 0) return std::nullopt;
  return static_cast<double>(p.rejected_steps) / static_cast<double>(p.accepted_steps);
}

std::optional<TimePerStep> time_per_correct_step(const ExerciseProgress& p) {
  if (p.accepted_steps == 0) return std::nullopt;
  const bool partial = !p.completed_at.has_value();
  const std::int64_t end = partial ? p.last_event_at : *p.completed_at;
  const double minutes = static_cast<double>(end - p.started_at) / 60000.0;
  return TimePerStep{minutes / static_cast<double>(p.accepted_steps), partial};
}

std::size_t worked_length_to_head(const ExerciseProgress& p) {
  if (const auto* proof = std::get_if<ProofState>(&p.state)) {
    return worked_solution_length(proof->lhs, proof->rhs);
  }
  const auto& d = std::get<DerivationState>(p.state);
  return worked_solution_length(d.start, d.target, d.head());
}

std::optional<double> efficiency(const ExerciseProgress& p) {
  if (!p.finished()) return std::nullopt;
  std::size_t n = worked_length_to_head(p);
  if (n == 0) return std::nullopt;
  return static_cast<double>(p.accepted_steps) / static_cast<double>(n);
}

double completion_ratio(const Session& session, const std::vector<Exercise>& set) {
  if (set.empty()) throw std::invalid_argument("empty exercise set");
  std::size_t done = 0;
  std::size_t required = 0;
  for (const auto& e : set) {
    const auto* p = session.progress(e.id);
    // A finished exercise needs only the steps to the level the student stopped at.
    std::size_t n = p && p->finished() ? worked_length_to_head(*p) : worked_length(e);
    required += n;
    if (p) done += std::min(p->accepted_steps, n);
  }
  if (required == 0) return 1.0;
  return static_cast<double>(done) / static_cast<double>(required);
}

std::size_t error_count(const Session& session, const std::vector<Exercise>& set) {
  if (set.empty()) throw std::invalid_argument("empty exercise set");
  std::size_t errors = 0;
  for (const auto& e : set) {
    if (const auto* p = session.progress(e.id)) errors += p->rejected_steps;
  }
  return errors;
}

MetricsReport metrics_report(const Session& session) {
  MetricsReport r;
  std::map<ExerciseKind, std::vector<Exercise>> by_kind;
  for (const auto& [id, p] : session.exercises) {
    ExerciseMetrics m;
    m.session = session.id;
    m.student = session.student;
    m.exercise = id;
    m.kind = p.exercise.kind;
    m.accepted = p.accepted_steps;
    m.rejected = p.rejected_steps;
    m.completed = p.completed_at.has_value() && p.finished();
    m.error_fraction = error_fraction(p);
    m.time_per_step = time_per_correct_step(p);
    if (m.completed) m.efficiency = efficiency(p);
    m.worked_length = worked_length(p.exercise);
    r.exercises.push_back(std::move(m));
    by_kind[p.exercise.kind].push_back(p.exercise);
  }
  for (const auto& [kind, set] : by_kind) {
    SetMetrics m;
    m.kind = kind;
    m.completion = completion_ratio(session, set);
    m.errors = error_count(session, set);
    double total = 0;
    std::size_t n = 0;
    for (const auto& row : r.exercises) {
      if (row.kind == kind && row.efficiency) {
        total += *row.efficiency;
        ++n;
      }
    }
    if (n > 0) m.efficiency = total / static_cast<double>(n);
    r.sets.push_back(m);
  }
  return r;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

}  // namespace

Json to_json(const MetricsReport& r) {
  Json rows = Json::array();
  for (const auto& m : r.exercises) {
    Json row{{"session", m.session},
             {"student", m.student},
             {"exercise", m.exercise},
             {"kind", to_string(m.kind)},
             {"accepted", m.accepted},
             {"rejected", m.rejected},
             {"completed", m.completed},
             {"errorFraction", optional_number(m.error_fraction)},
             {"efficiency", optional_number(m.efficiency)},
             {"workedLength", m.worked_length}};
    if (m.time_per_step) {
      row["timePerStep"] = {{"minutes", m.time_per_step->minutes}, {"partial", m.time_per_step->partial}};
    } else {
      row["timePerStep"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  Json sets = Json::array();
  for (const auto& s : r.sets) {
    sets.push_back({{"kind", to_string(s.kind)},
                    {"completion", s.completion},
                    {"errors", s.errors},
                    {"efficiency", optional_number(s.efficiency)}});
  }
  return {{"exercises", rows}, {"sets", sets}};
}

LogSink::LogSink(std::string path) : path_(std::move(path)) {
  std::ofstream touch(path_, std::ios::app);
  if (!touch) throw std::runtime_error("cannot open log " + path_);
}

void LogSink::append(const LogEvent& e) {
  const std::string line = to_line(e) + "\n";
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << line;
  out.flush();
  if (!out) throw std::runtime_error("cannot append to log " + path_);
}

}  // namespace logex
